#pragma once

namespace kato {

// exp(-1/(1 - s^2)) on (-1, 1), zero outside; unnormalised, peak e^{-1}.
double mollifier(double s);

// C-infinity transition: 0 for s <= 0, 1 for s >= 1.
double smooth_step(double s);

// 1 on [-(a), a], falls smoothly to 0 at |s| = b (b > a).
double plateau(double s, double a, double b);

}  // namespace kato
