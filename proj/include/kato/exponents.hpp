#pragma once

#include <optional>
#include <utility>
#include <vector>

namespace kato {

// -alpha + n/q + m/r - n/2, with 1/infinity = 0.
double predicted_exponent(int n, double m, double q, double r, double alpha);

struct TransferExponent {
    double delta_inf = 0.0;        // n (1/r - 1/r~)
    double alpha_global_sup = 0.0; // alpha - delta_inf (open bound)
};
TransferExponent transfer_exponent(int n, double r, double r_tilde, double alpha);

struct ScalingFit {
    std::vector<std::pair<double, double>> samples;  // (R, value)
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    std::optional<double> predicted;
};

// Least squares on (log R, log value); R must be strictly increasing powers of two, at least three.
// Least-squares slope of log v against log x (any positive x, at least two samples).
double loglog_slope(const std::vector<std::pair<double, double>>& samples);

ScalingFit fit_exponent(const std::vector<std::pair<double, double>>& samples, std::optional<double> predicted = std::nullopt);

}  // namespace kato
