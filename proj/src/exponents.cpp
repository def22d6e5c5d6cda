#include "kato/exponents.hpp"

#include "kato/symbols.hpp"

#include <cmath>

namespace kato {

namespace {

double reciprocal(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

bool is_power_of_two(double R) {
    if (!(R >= 1.0)) return false;
    int e = 0;
    return std::frexp(R, &e) == 0.5;
}

}  // namespace

double predicted_exponent(int n, double m, double q, double r, double alpha) {
    if (!(q >= 1.0) || !(r >= 1.0)) throw DomainError("exponents q, r must lie in [1, infinity]");
    return -alpha + n * reciprocal(q) + m * reciprocal(r) - 0.5 * n;
}

TransferExponent transfer_exponent(int n, double r, double r_tilde, double alpha) {
    if (!(r >= 2.0)) throw DomainError("transfer needs r >= 2");
    if (!(r_tilde > r)) throw DomainError("transfer needs r~ > r");
    TransferExponent t;
    t.delta_inf = n * (reciprocal(r) - reciprocal(r_tilde));
    t.alpha_global_sup = alpha - t.delta_inf;
    return t;
}

double loglog_slope(const std::vector<std::pair<double, double>>& samples) {
    if (samples.size() < 2) throw DomainError("a log-log slope needs at least two samples");
    double sx = 0, sy = 0;
    for (const auto& [x, v] : samples) {
        if (!(x > 0.0) || !(v > 0.0)) throw DomainError("log-log samples must be positive");
        sx += std::log(x);
        sy += std::log(v);
    }
    const double k = static_cast<double>(samples.size()), mx = sx / k, my = sy / k;
    double sxx = 0, sxy = 0;
    for (const auto& [x, v] : samples) {
        sxx += (std::log(x) - mx) * (std::log(x) - mx);
        sxy += (std::log(x) - mx) * (std::log(v) - my);
    }
    if (sxx == 0.0) throw DomainError("log-log samples need distinct abscissae");
    return sxy / sxx;
}

ScalingFit fit_exponent(const std::vector<std::pair<double, double>>& samples, std::optional<double> predicted) {
    if (samples.size() < 3) throw DomainError("a scaling fit needs at least three samples");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!is_power_of_two(samples[i].first)) throw DomainError("scaling fit R values must be powers of two");
        if (i > 0 && !(samples[i].first > samples[i - 1].first)) throw DomainError("scaling fit R values must increase");
        if (!(samples[i].second > 0.0)) throw DomainError("scaling fit values must be positive");
    }
    const double k = static_cast<double>(samples.size());
    double sx = 0, sy = 0;
    for (const auto& [R, v] : samples) {
        sx += std::log(R);
        sy += std::log(v);
    }
    const double mx = sx / k, my = sy / k;
    double sxx = 0, sxy = 0;
    for (const auto& [R, v] : samples) {
        sxx += (std::log(R) - mx) * (std::log(R) - mx);
        sxy += (std::log(R) - mx) * (std::log(v) - my);
    }
    ScalingFit f;
    f.samples = samples;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ssr = 0;
    for (const auto& [R, v] : samples) {
        const double e = std::log(v) - (f.intercept + f.slope * std::log(R));
        ssr += e * e;
    }
    f.slope_stderr = std::sqrt(ssr / (k - 2.0) / sxx);
    f.predicted = predicted;
    return f;
}

}  // namespace kato
