#include "kato/surface.hpp"

#include "kato/fft.hpp"
#include "kato/mollifier.hpp"
#include "kato/norms.hpp"
#include "kato/quadrature.hpp"
#include "kato/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace kato {

SurfacePatch SurfacePatch::make(const SymbolSpec& sym) {
    if (sym.n() > 2) throw std::invalid_argument("surface quadrature supports n = 1 or 2");
    return SurfacePatch{sym};
}

double SurfacePatch::weight(const double* xi) const {
    double g[3] = {0, 0, 0};
    sym.value_gradient(xi, g);
    double s = 1.0;
    for (int a = 0; a < n(); ++a) s += g[a] * g[a];
    return std::sqrt(s);
}

namespace {

double max_gradient(const SymbolSpec& sym) {
    double m = 0.0;
    double g[3] = {0, 0, 0};
    for (const auto& xi : sector_lattice(sym.n(), 33, 17)) {
        sym.value_gradient(xi.data(), g);
        double s = 0.0;
        for (int a = 0; a < sym.n(); ++a) s += g[a] * g[a];
        m = std::max(m, std::sqrt(s));
    }
    return 1.1 * m;
}

std::size_t panels_for(double oscillation, double length, std::size_t min_panels) {
    return min_panels + static_cast<std::size_t>(std::ceil(oscillation * length / (2.0 * std::numbers::pi)));
}

}  // namespace

std::vector<SurfaceNode> surface_nodes(const SurfacePatch& patch, double oscillation, std::size_t min_panels) {
    const double r0 = Sector::r_inner, r1 = Sector::r_outer;
    std::vector<SurfaceNode> out;
    if (patch.n() == 1) {
        const auto q = gauss_legendre(r0, r1, panels_for(oscillation, r1 - r0, min_panels));
        out.reserve(q.x.size());
        for (std::size_t i = 0; i < q.x.size(); ++i) {
            const double xi = q.x[i];
            out.push_back({{xi}, q.w[i] * patch.weight(&xi)});
        }
        return out;
    }
    const double a = Sector::max_angle();
    const auto qr = gauss_legendre(r0, r1, panels_for(oscillation, r1 - r0, min_panels));
    const auto qt = gauss_legendre(-a, a, panels_for(oscillation * r1, 2.0 * a, min_panels));
    out.reserve(qr.x.size() * qt.x.size());
    for (std::size_t i = 0; i < qr.x.size(); ++i)
        for (std::size_t j = 0; j < qt.x.size(); ++j) {
            const double r = qr.x[i];
            const double xi[2] = {r * std::cos(qt.x[j]), r * std::sin(qt.x[j])};
            out.push_back({{xi[0], xi[1]}, qr.w[i] * qt.w[j] * r * patch.weight(xi)});
        }
    return out;
}

cplx surface_fourier(const SurfacePatch& patch, const std::vector<double>& zeta, std::size_t min_panels) {
    const int n = patch.n();
    if (static_cast<int>(zeta.size()) != n + 1) throw std::invalid_argument("surface_fourier: zeta must have n + 1 components");
    double zx = 0.0;
    for (int a = 0; a < n; ++a) zx += zeta[a + 1] * zeta[a + 1];
    const double osc = std::abs(zeta[0]) * max_gradient(patch.sym) + std::sqrt(zx);
    cplx acc = 0.0;
    for (const auto& node : surface_nodes(patch, osc, min_panels)) {
        double ph = zeta[0] * patch.sym.value(node.xi.data());
        for (int a = 0; a < n; ++a) ph += zeta[a + 1] * node.xi[a];
        acc += node.w * std::polar(1.0, -ph);
    }
    return acc;
}

double surface_measure(const SurfacePatch& patch, std::size_t min_panels) {
    double s = 0.0;
    for (const auto& node : surface_nodes(patch, 0.0, min_panels)) s += node.w;
    return s;
}

std::vector<double> surface_normal(const SurfacePatch& patch, const std::vector<double>& xi_star) {
    const Phase ph = phase(patch.sym, xi_star);
    std::vector<double> nu{1.0};
    double s = 1.0;
    for (double g : ph.gradient) {
        nu.push_back(-g);
        s += g * g;
    }
    for (auto& v : nu) v /= std::sqrt(s);
    return nu;
}

//==============================================================================
// Restriction and extension
//==============================================================================

Restriction restriction(const SpacetimeField& f, const SurfacePatch& patch) {
    const Grid& g = f.grid;
    if (g.n != patch.n()) throw std::invalid_argument("restriction: grid and symbol dimensions differ");
    if (!f.uniform()) throw std::invalid_argument("restriction needs uniformly spaced times");
    Restriction r;
    r.grid = g;
    rvec phi;
    const double cell = std::pow(2.0 * std::numbers::pi / g.L, g.n);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const auto xi = g.frequency(k);
        if (!Sector::contains(xi.data(), g.n)) continue;
        r.nodes.push_back(k);
        phi.push_back(patch.sym.value(xi.data()));
        r.weights.push_back(cell * patch.weight(xi.data()));
    }
    r.values.assign(r.nodes.size(), 0.0);
    const rvec wt = trapezoid_weights(f.slices(), f.slices() > 1 ? f.dt() : 1.0);
    cvec buf(g.size());
    double total = 0.0, edge = 0.0;
    const std::size_t S = f.slices();
    const std::size_t tb = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(0.05 * static_cast<double>(S))));
    for (std::size_t s = 0; s < S; ++s) {
        const cplx* src = f.slice(s);
        const bool t_edge = S > 2 && (s < tb || s + tb >= S);
        for (std::size_t j = 0; j < g.size(); ++j) {
            const double m = std::norm(src[j]);
            total += m;
            bool layer = t_edge;
            if (!layer) {
                const auto x = g.point(j);
                for (double xa : x)
                    if (std::abs(xa) > 0.45 * g.L) layer = true;
            }
            if (layer) edge += m;
        }
        std::copy(src, src + g.size(), buf.begin());
        dft_inplace(g, buf.data());
        for (std::size_t i = 0; i < r.nodes.size(); ++i) r.values[i] += wt[s] * std::polar(1.0, -f.times[s] * phi[i]) * buf[r.nodes[i]];
    }
    r.leakage = total > 0.0 ? edge / total : 0.0;
    r.leaking = r.leakage > restriction_leak_warning;
    return r;
}

SpacetimeField extension(const Restriction& layout, const cvec& g, const SymbolSpec& sym, const rvec& times) {
    if (g.size() != layout.nodes.size()) throw std::invalid_argument("extension: sample count does not match the layout");
    const Grid& grid = layout.grid;
    SpacetimeField out(grid, times);
    const double Ln = std::pow(grid.L, grid.n);
    rvec phi(layout.nodes.size());
    for (std::size_t i = 0; i < layout.nodes.size(); ++i) phi[i] = sym.value(grid.frequency(layout.nodes[i]).data());
    for (std::size_t s = 0; s < times.size(); ++s) {
        cplx* dst = out.slice(s);
        std::fill(dst, dst + grid.size(), cplx(0.0));
        for (std::size_t i = 0; i < layout.nodes.size(); ++i)
            dst[layout.nodes[i]] = Ln * layout.weights[i] * std::polar(1.0, times[s] * phi[i]) * g[i];
        idft_inplace(grid, dst);
    }
    return out;
}

cplx surface_pairing(const Restriction& r, const cvec& g) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * r.values[i] * std::conj(g[i]);
    return s;
}

cplx spacetime_pairing(const SpacetimeField& f, const SpacetimeField& h) {
    if (!(f.grid == h.grid) || f.slices() != h.slices()) throw std::invalid_argument("spacetime_pairing: layouts differ");
    const rvec wt = trapezoid_weights(f.slices(), f.slices() > 1 ? f.dt() : 1.0);
    cplx s = 0.0;
    for (std::size_t k = 0; k < f.slices(); ++k) {
        cplx acc = 0.0;
        for (std::size_t j = 0; j < f.grid.size(); ++j) acc += f.slice(k)[j] * std::conj(h.slice(k)[j]);
        s += wt[k] * f.grid.cell_volume() * acc;
    }
    return s;
}

//==============================================================================
// Sparse decoupling (n = 1)
//==============================================================================

namespace {

constexpr double beta_radius = 0.75;

// beta^vee(r) = (2 pi)^{-1} int_0^{3/4} beta(rho) J_0(rho r) rho d rho for the radial mollifier beta on R^2.
double beta_check(double r) {
    static const QuadratureRule q = gauss_legendre(0.0, beta_radius, 8);
    double s = 0.0;
    for (std::size_t i = 0; i < q.x.size(); ++i) s += q.w[i] * mollifier(q.x[i] / beta_radius) * std::cyl_bessel_j(0.0, q.x[i] * r) * q.x[i];
    return s / (2.0 * std::numbers::pi);
}

// Local field P = F_i phi_i h^2 on a square grid about the centre.
struct LocalBall {
    std::size_t m = 0;
    double h = 0.0, H = 0.0;
    rvec w;       // axis coordinates, shared by both axes
    cvec F;       // F_i on the grid, row-major [t][x]
    cvec P;
};

LocalBall make_local(double H, std::uint64_t seed) {
    LocalBall b;
    b.H = H;
    b.m = static_cast<std::size_t>(std::ceil(2.0 * H / 0.2)) + 1;
    b.h = 2.0 * H / static_cast<double>(b.m - 1);
    for (std::size_t i = 0; i < b.m; ++i) b.w.push_back(-H + b.h * static_cast<double>(i));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    constexpr int K = 2;
    std::vector<cplx> c((2 * K + 1) * (2 * K + 1));
    for (auto& v : c) v = cplx(gauss(rng), gauss(rng));
    b.F.assign(b.m * b.m, 0.0);
    b.P.assign(b.m * b.m, 0.0);
    for (std::size_t i = 0; i < b.m; ++i)
        for (std::size_t j = 0; j < b.m; ++j) {
            const double rr = std::hypot(b.w[i], b.w[j]);
            const double env = mollifier(rr / H);
            if (env == 0.0) continue;
            cplx s = 0.0;
            for (int a = -K; a <= K; ++a)
                for (int bb = -K; bb <= K; ++bb)
                    s += c[(a + K) * (2 * K + 1) + (bb + K)] * std::polar(1.0, std::numbers::pi * (a * b.w[i] + bb * b.w[j]) / H);
            b.F[i * b.m + j] = env * s;
            b.P[i * b.m + j] = b.F[i * b.m + j] * decoupling_phi(rr / H) * b.h * b.h;
        }
    return b;
}

// (F phi)^ at zeta = (tau, xi), relative to the ball centre.
cplx local_transform(const LocalBall& b, double tau, double xi) {
    cvec ex(b.m);
    for (std::size_t j = 0; j < b.m; ++j) ex[j] = std::polar(1.0, -b.w[j] * xi);
    cplx acc = 0.0;
    for (std::size_t i = 0; i < b.m; ++i) {
        cplx row = 0.0;
        for (std::size_t j = 0; j < b.m; ++j) row += b.P[i * b.m + j] * ex[j];
        acc += std::polar(1.0, -b.w[i] * tau) * row;
    }
    return acc;
}

// ||F^||_p from a zero-padded FFT.
double transform_lp(const LocalBall& b, double p) {
    int P = 1;
    while (static_cast<std::size_t>(P) < 4 * b.m) P *= 2;
    cvec buf(static_cast<std::size_t>(P) * P, 0.0);
    for (std::size_t i = 0; i < b.m; ++i)
        for (std::size_t j = 0; j < b.m; ++j) buf[i * P + j] = b.F[i * b.m + j] * b.h * b.h;
    fft_inplace(buf.data(), {P, P}, -1);
    const double dz = 2.0 * std::numbers::pi / (static_cast<double>(P) * b.h);
    double s = 0.0;
    for (const auto& v : buf) s += std::pow(std::abs(v), p);
    return std::pow(s * dz * dz, 1.0 / p);
}

// Barycentric Chebyshev interpolant of a function of xi on [a, b].
struct Chebyshev {
    double a = 0.0, b = 1.0;
    rvec x, wb;
    cvec f;
    cplx operator()(double t) const {
        cplx num = 0.0;
        double den = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double d = t - x[j];
            if (d == 0.0) return f[j];
            const double c = wb[j] / d;
            num += c * f[j];
            den += c;
        }
        return num / den;
    }
};

}  // namespace

double decoupling_phi(double r) {
    // Normalised to phi(0) = 1 and tabulated on [0, 1.05] (the argument is |z - z_i| / H <= 1 on the support of F_i).
    static const rvec table = [] {
        rvec t(2101);
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double v = beta_check(0.0005 * static_cast<double>(i));
            t[i] = v * v;
        }
        return t;
    }();
    static const double peak = table[0];
    if (r < 0.0) r = -r;
    if (r >= 1.05) {
        const double v = beta_check(r);
        return v * v / peak;
    }
    const double u = r / 0.0005;
    const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(u), table.size() - 2);
    const double f = u - static_cast<double>(i);
    return ((1.0 - f) * table[i] + f * table[i + 1]) / peak;
}

DecouplingResult decoupling_check(const SurfacePatch& patch, const std::vector<DecouplingBall>& balls, double H, double p,
                                  unsigned gamma) {
    if (patch.n() != 1) throw std::invalid_argument("decoupling check is implemented for n = 1");
    if (!(p >= 1.0 && p <= 2.0)) throw std::invalid_argument("decoupling exponent p must lie in [1, 2]");
    if (balls.empty()) throw std::invalid_argument("decoupling check needs at least one ball");
    if (!(H >= 1.0) || H != std::floor(H)) throw PreconditionError("decoupling radius H must be an integer >= 1");

    SparseFamily fam;
    fam.radius = BigInt(static_cast<long long>(H));
    fam.gamma = gamma;
    double zmax = 0.0;
    for (const auto& b : balls) {
        if (b.center.size() != 2) throw std::invalid_argument("decoupling ball centres live in R^2");
        LatticePoint z;
        for (double c : b.center) {
            if (c != std::floor(c)) throw PreconditionError("decoupling centres must be lattice points");
            z.push_back(static_cast<std::int64_t>(c));
        }
        fam.centers.push_back(z);
        zmax = std::max(zmax, std::hypot(b.center[0], b.center[1]));
    }
    if (!is_sparse(fam)) throw PreconditionError("ball collection is not (N, H)-sparse; the bound is not claimed");

    const double gmax = max_gradient(patch.sym);
    const double r0 = Sector::r_inner, r1 = Sector::r_outer;
    const double local_rate = std::sqrt(2.0) * H * (gmax + 1.0);
    const std::size_t M = static_cast<std::size_t>(std::ceil(3.0 * local_rate * 0.5 * (r1 - r0))) + 48;

    std::vector<Chebyshev> interp;
    DecouplingResult res;
    double rhs_sum = 0.0;
    for (const auto& b : balls) {
        const LocalBall lb = make_local(H, b.seed);
        Chebyshev c;
        c.a = r0;
        c.b = r1;
        for (std::size_t j = 0; j < M; ++j) {
            const double th = std::numbers::pi * (static_cast<double>(j) + 0.5) / static_cast<double>(M);
            const double xi = 0.5 * (r0 + r1) + 0.5 * (r1 - r0) * std::cos(th);
            c.x.push_back(xi);
            c.wb.push_back((j % 2 ? -1.0 : 1.0) * std::sin(th));
            c.f.push_back(local_transform(lb, patch.sym.value(&xi), xi));
        }
        interp.push_back(std::move(c));
        const double np = transform_lp(lb, p);
        res.single.push_back(np);  // filled with ratios below
        rhs_sum += std::pow(np, p);
    }

    const auto nodes = surface_nodes(patch, zmax * (gmax + 1.0) + local_rate, 16);
    double lhs = 0.0;
    std::vector<double> single_lhs(balls.size(), 0.0);
    for (const auto& node : nodes) {
        const double xi = node.xi[0];
        const double tau = patch.sym.value(&xi);
        cplx s = 0.0;
        for (std::size_t i = 0; i < balls.size(); ++i) {
            const cplx loc = interp[i](xi);
            single_lhs[i] += node.w * std::pow(std::abs(loc), p);
            s += std::polar(1.0, -(balls[i].center[0] * tau + balls[i].center[1] * xi)) * loc;
        }
        lhs += node.w * std::pow(std::abs(s), p);
    }
    const double Hp = std::pow(H, 1.0 / p);
    res.lhs = std::pow(lhs, 1.0 / p);
    res.rhs = Hp * std::pow(rhs_sum, 1.0 / p);
    res.ratio = res.lhs / res.rhs;
    for (std::size_t i = 0; i < balls.size(); ++i) {
        res.single[i] = std::pow(single_lhs[i], 1.0 / p) / (Hp * res.single[i]);
        res.max_single = std::max(res.max_single, res.single[i]);
    }
    return res;
}

std::vector<DecouplingBall> random_sparse_balls(std::size_t N, double H, unsigned gamma, std::uint64_t seed) {
    const double sep = std::pow(static_cast<double>(N) * H, static_cast<double>(gamma));
    const double width = sep * std::ceil(std::sqrt(static_cast<double>(N)) + 1.0);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-width, width);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        std::vector<DecouplingBall> balls;
        for (std::size_t i = 0; i < N; ++i) balls.push_back({{std::round(u(rng)), std::round(u(rng))}, rng()});
        bool ok = true;
        for (std::size_t i = 0; i < N && ok; ++i)
            for (std::size_t j = i + 1; j < N && ok; ++j)
                if (std::hypot(balls[i].center[0] - balls[j].center[0], balls[i].center[1] - balls[j].center[1]) < sep) ok = false;
        if (ok) return balls;
    }
    throw std::runtime_error("could not place sparse balls");
}

}  // namespace kato
