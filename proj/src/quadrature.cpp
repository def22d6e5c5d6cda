#include "kato/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <stdexcept>

namespace kato {

QuadratureRule gauss_legendre(double a, double b, std::size_t panels) {
    if (panels == 0) throw std::invalid_argument("quadrature needs at least one panel");
    using G = boost::math::quadrature::gauss<double, 20>;
    const auto& ab = G::abscissa();
    const auto& wt = G::weights();
    QuadratureRule q;
    q.x.reserve(panels * 20);
    q.w.reserve(panels * 20);
    const double h = (b - a) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        const double mid = a + (static_cast<double>(p) + 0.5) * h;
        for (std::size_t i = 0; i < ab.size(); ++i) {
            for (int sgn : {-1, 1}) {
                q.x.push_back(mid + sgn * 0.5 * h * ab[i]);
                q.w.push_back(0.5 * h * wt[i]);
            }
        }
    }
    return q;
}

}  // namespace kato
