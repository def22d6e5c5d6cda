#pragma once

#include "kato/grid.hpp"

#include <string>

namespace kato {

// Smooth cutoff on the sector {1/2 <= |xi| <= 2, |xi/|xi| - e1| <= pi/4}:
// a product of radial and angular smooth steps, equal to 1 on the sector
// shrunk by the transition widths.
struct SectorBump {
    double radial_width = (2.0 - 0.5) / 8.0;
    double angular_fraction = 1.0 / 8.0;  // of the full cap aperture

    double operator()(const double* xi, int n) const;
    double radial(double r) const;
    double angular(double theta) const;
    std::string describe() const;
};

// Multiplies a frequency-side buffer on grid g by phi.
void apply_bump(const Grid& g, const SectorBump& b, cplx* fhat);

}  // namespace kato
