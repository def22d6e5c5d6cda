#pragma once

#include "kato/grid.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace kato::testing {

// Complex white noise on the grid, unnormalised.
inline Field noise_field(const Grid& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    Field f(g);
    for (auto& z : f.data) z = cplx(n(rng), n(rng));
    return f;
}

inline double max_abs_diff(const cvec& a, const cvec& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double rel_l2_diff(const cvec& a, const cvec& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(b[i]);
    }
    return std::sqrt(num / den);
}

}  // namespace kato::testing
