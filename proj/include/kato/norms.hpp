#pragma once

#include "kato/grid.hpp"

#include <limits>
#include <optional>
#include <string>

namespace kato {

constexpr double infinity = std::numeric_limits<double>::infinity();

// xt: L^q_x L^r_t (time integrated first).  tx: L^r_t L^q_x (space first).
enum class NormOrder { xt, tx };

struct Ball {
    std::vector<double> center;  // empty means origin
    double radius = infinity;
};

struct MixedNormSpec {
    double q = 2.0;  // spatial exponent
    double r = 2.0;  // temporal exponent
    NormOrder order = NormOrder::xt;
    Ball region;
    std::optional<std::pair<double, double>> window;  // all sampled times when empty
};

// Time integrals use the trapezoid rule over the selected uniform samples;
// space uses dx^n per cell whose centre lies in the ball.  Exponent infinity
// means the maximum over samples.
double mixed_norm(const SpacetimeField& u, const MixedNormSpec& spec);

// L^q_x(region) L^infinity_t.
double maximal_norm(const SpacetimeField& u, double q, const Ball& region,
                    std::optional<std::pair<double, double>> window = std::nullopt);

double parse_exponent(const std::string& s);
NormOrder parse_order(const std::string& s);

// Trapezoid weights for S uniform samples of spacing dt; a single sample gets weight 1.
rvec trapezoid_weights(std::size_t S, double dt);

// (sum w v^p)^{1/p}, or max v for p = infinity; values must be >= 0.
double weighted_lp(const double* v, const double* w, std::size_t count, double p);

}  // namespace kato
