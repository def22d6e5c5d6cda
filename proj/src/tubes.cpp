#include "kato/tubes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kato {

Tube Tube::make(std::vector<double> l, std::vector<double> v, double R, const SymbolSpec& sym) {
    if (static_cast<int>(l.size()) != sym.n() || static_cast<int>(v.size()) != sym.n())
        throw std::invalid_argument("tube: dimension mismatch with the symbol");
    if (!(R > 0.0)) throw std::invalid_argument("tube radius must be positive");
    Tube t;
    t.grad = phase(sym, v).gradient;
    t.l = std::move(l);
    t.v = std::move(v);
    t.R = R;
    return t;
}

std::vector<double> Tube::core(double t) const {
    std::vector<double> p(l.size());
    for (std::size_t a = 0; a < l.size(); ++a) p[a] = l[a] - t * grad[a];
    return p;
}

bool Tube::contains(double t, const double* x) const {
    double d2 = 0.0;
    for (std::size_t a = 0; a < l.size(); ++a) {
        const double d = x[a] - (l[a] - t * grad[a]);
        d2 += d * d;
    }
    return d2 <= R * R;
}

SpacetimeCube SpacetimeCube::dilated(double factor) const {
    if (!(factor > 0.0)) throw std::invalid_argument("dilation must be positive");
    SpacetimeCube c = *this;
    const double mid = 0.5 * (t0 + t1), half = 0.5 * (t1 - t0) * factor;
    c.t0 = mid - half;
    c.t1 = mid + half;
    c.half_width = half_width * factor;
    return c;
}

namespace {

// Squared distance from p(t) to the box, a sum of per-axis terms max(0, |p_a - c_a| - h)^2.
double box_dist2(const Tube& tube, const SpacetimeCube& c, double t) {
    double s = 0.0;
    for (int a = 0; a < tube.n(); ++a) {
        const double e = std::max(0.0, std::abs(tube.l[a] - t * tube.grad[a] - c.center[a]) - c.half_width);
        s += e * e;
    }
    return s;
}

}  // namespace

double core_distance(const Tube& tube, const SpacetimeCube& cube) {
    const int n = tube.n();
    if (static_cast<int>(cube.center.size()) != n) throw std::invalid_argument("cube: dimension mismatch with the tube");
    if (cube.t1 < cube.t0) throw std::invalid_argument("cube: t1 < t0");

    if (cube.ball) {
        // |d + t g|, d = l - c, g = -grad: minimise over t by projection.
        double dg = 0.0, gg = 0.0;
        for (int a = 0; a < n; ++a) {
            const double d = tube.l[a] - cube.center[a];
            dg += d * (-tube.grad[a]);
            gg += tube.grad[a] * tube.grad[a];
        }
        const double t = gg > 0.0 ? std::clamp(-dg / gg, cube.t0, cube.t1) : cube.t0;
        double d2 = 0.0;
        for (int a = 0; a < n; ++a) {
            const double d = tube.l[a] - t * tube.grad[a] - cube.center[a];
            d2 += d * d;
        }
        return std::max(0.0, std::sqrt(d2) - cube.half_width);
    }

    // Box: the squared distance is convex and quadratic between the breakpoints
    // where some |p_a(t) - c_a| crosses h.
    std::vector<double> cuts{cube.t0, cube.t1};
    for (int a = 0; a < n; ++a) {
        const double g = tube.grad[a];
        if (g == 0.0) continue;
        for (double s : {-1.0, 1.0}) {
            const double t = (tube.l[a] - cube.center[a] - s * cube.half_width) / g;
            if (t > cube.t0 && t < cube.t1) cuts.push_back(t);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    double best = box_dist2(tube, cube, cube.t0);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        best = std::min(best, box_dist2(tube, cube, b));
        if (b <= a) continue;
        // On (a, b) each active axis contributes (sigma_a (l_a - t g_a - c_a) - h)^2.
        const double mid = 0.5 * (a + b);
        double A = 0.0, B = 0.0;
        for (int ax = 0; ax < n; ++ax) {
            const double off = tube.l[ax] - mid * tube.grad[ax] - cube.center[ax];
            if (std::abs(off) <= cube.half_width) continue;
            const double sg = off > 0 ? 1.0 : -1.0;
            // term = (k0 + k1 t)^2 with k1 = -sg g, k0 = sg (l - c) - h
            const double k1 = -sg * tube.grad[ax];
            const double k0 = sg * (tube.l[ax] - cube.center[ax]) - cube.half_width;
            A += k1 * k1;
            B += k0 * k1;
        }
        if (A > 0.0) {
            const double t = std::clamp(-B / A, a, b);
            best = std::min(best, box_dist2(tube, cube, t));
        }
    }
    return std::sqrt(best);
}

bool tube_meets_cube(const Tube& tube, const SpacetimeCube& cube, double dilation) {
    const SpacetimeCube c = dilation == 1.0 ? cube : cube.dilated(dilation);
    return core_distance(tube, c) <= tube.R * (1.0 + 1e-12);
}

bool tube_meets_cube_sampled(const Tube& tube, const SpacetimeCube& cube, double dilation, double spacing) {
    const int n = tube.n();
    if (n > 2) throw std::invalid_argument("sampling reference supports n <= 2");
    const SpacetimeCube c = dilation == 1.0 ? cube : cube.dilated(dilation);
    const auto steps = [spacing](double len) { return static_cast<std::size_t>(std::ceil(len / spacing)); };
    const std::size_t nt = steps(c.t1 - c.t0), nx = steps(2.0 * c.half_width);
    std::vector<double> x(n);
    for (std::size_t i = 0; i <= nt; ++i) {
        const double t = c.t0 + (c.t1 - c.t0) * static_cast<double>(i) / static_cast<double>(std::max<std::size_t>(nt, 1));
        const std::size_t ny = n == 2 ? nx : 0;
        for (std::size_t j = 0; j <= nx; ++j)
            for (std::size_t k = 0; k <= ny; ++k) {
                x[0] = c.center[0] - c.half_width + 2.0 * c.half_width * static_cast<double>(j) / static_cast<double>(std::max<std::size_t>(nx, 1));
                if (n == 2)
                    x[1] = c.center[1] - c.half_width + 2.0 * c.half_width * static_cast<double>(k) / static_cast<double>(std::max<std::size_t>(ny, 1));
                if (c.ball) {
                    double d2 = 0.0;
                    for (int a = 0; a < n; ++a) d2 += (x[a] - c.center[a]) * (x[a] - c.center[a]);
                    if (d2 > c.half_width * c.half_width) continue;
                }
                if (tube.contains(t, x.data())) return true;
            }
    }
    return false;
}

std::vector<SpacetimeCube> overlap_chain(double H) {
    if (!(H >= 1.0)) throw std::invalid_argument("chain scale H must be >= 1");
    std::vector<SpacetimeCube> chain;
    const long J = static_cast<long>(std::floor(1.5 * H));
    for (long j = 0; j <= J; ++j) {
        SpacetimeCube c;
        const double tj = 0.5 * H * H + static_cast<double>(j) * H;
        c.t0 = tj - 0.5 * H;
        c.t1 = tj + 0.5 * H;
        c.center = {0.0};
        c.half_width = H;
        c.ball = true;
        chain.push_back(c);
    }
    return chain;
}

std::size_t overlap_count(const Tube& tube, const std::vector<SpacetimeCube>& chain, double dilation) {
    std::size_t count = 0;
    for (const auto& c : chain) {
        SpacetimeCube cc = c;
        if (static_cast<int>(cc.center.size()) != tube.n()) cc.center.assign(tube.n(), 0.0);
        if (tube_meets_cube(tube, cc, dilation)) ++count;
    }
    return count;
}

OverlapSummary max_overlap(const SymbolSpec& sym, double H, double dilation) {
    if (sym.n() != 1) throw std::invalid_argument("max_overlap enumerates packet families for n = 1 only");
    const auto chain = overlap_chain(H);
    OverlapSummary s;
    s.H = H;
    s.dilation = dilation;
    s.min_slope = INFINITY;
    const double t_hi = chain.back().t1 * dilation + H * H;
    const double reach = 2.0 * H * dilation + H;

    const long k_lo = static_cast<long>(std::floor(Sector::r_inner * H)), k_hi = static_cast<long>(std::ceil(Sector::r_outer * H));
    for (long k = k_lo; k <= k_hi; ++k) {
        const double v = static_cast<double>(k) / H;
        if (!Sector::contains(&v, 1)) continue;
        const double g = phase(sym, {v}).gradient[0];
        s.min_slope = std::min(s.min_slope, std::abs(g));
        const double span = std::abs(g) * t_hi + reach;
        const long j_lo = static_cast<long>(std::floor(-span / H)), j_hi = static_cast<long>(std::ceil(span / H));
        for (long j = j_lo; j <= j_hi; ++j) {
            const Tube tube = Tube::make({static_cast<double>(j) * H}, {v}, H, sym);
            const std::size_t c = overlap_count(tube, chain, dilation);
            if (c == 0) continue;
            ++s.tubes;
            if (c > s.max_count) {
                s.max_count = c;
                s.v_at_max = v;
            }
        }
    }
    if (std::isfinite(s.min_slope) && s.min_slope > 0.0)
        s.geometric_bound = static_cast<std::size_t>(std::ceil(4.0 / s.min_slope - 1e-12)) + 1;
    return s;
}

}  // namespace kato
