#pragma once

#include "kato/grid.hpp"

namespace kato {

struct QuadratureRule {
    rvec x;
    rvec w;
};

// Composite 20-point Gauss-Legendre on [a, b] with equal panels.
QuadratureRule gauss_legendre(double a, double b, std::size_t panels);

}  // namespace kato
