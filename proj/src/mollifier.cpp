#include "kato/mollifier.hpp"

#include <cmath>

namespace kato {

double mollifier(double s) {
    const double q = 1.0 - s * s;
    return q > 0.0 ? std::exp(-1.0 / q) : 0.0;
}

double smooth_step(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / s);
    const double b = std::exp(-1.0 / (1.0 - s));
    return a / (a + b);
}

double plateau(double s, double a, double b) {
    const double r = std::abs(s);
    if (r <= a) return 1.0;
    if (r >= b) return 0.0;
    return smooth_step((b - r) / (b - a));
}

}  // namespace kato
