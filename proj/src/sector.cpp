#include "kato/sector.hpp"

#include "kato/mollifier.hpp"
#include "kato/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kato {

double SectorBump::radial(double r) const {
    return smooth_step((r - Sector::r_inner) / radial_width) * smooth_step((Sector::r_outer - r) / radial_width);
}

double SectorBump::angular(double theta) const {
    const double amax = Sector::max_angle();
    const double w = angular_fraction * 2.0 * amax;
    return smooth_step((amax - theta) / w);
}

double SectorBump::operator()(const double* xi, int n) const {
    double r2 = 0.0;
    for (int i = 0; i < n; ++i) r2 += xi[i] * xi[i];
    const double r = std::sqrt(r2);
    if (r < Sector::r_inner || r > Sector::r_outer) return 0.0;
    const double rad = radial(r);
    if (n == 1) return xi[0] > 0.0 ? rad : 0.0;
    const double c = std::clamp(xi[0] / r, -1.0, 1.0);
    return rad * angular(std::acos(c));
}

std::string SectorBump::describe() const {
    std::ostringstream os;
    os << "sector bump: radial transition " << radial_width << ", angular transition " << angular_fraction
       << " of aperture";
    return os.str();
}

void apply_bump(const Grid& g, const SectorBump& b, cplx* fhat) {
    const std::size_t total = g.size();
    for (std::size_t i = 0; i < total; ++i) {
        const auto xi = g.frequency(i);
        fhat[i] *= b(xi.data(), g.n);
    }
}

}  // namespace kato
