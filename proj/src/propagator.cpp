#include "kato/propagator.hpp"

#include "kato/fft.hpp"
#include "kato/mollifier.hpp"
#include "kato/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace kato {

namespace {

double radius(const std::vector<double>& xi) {
    double s = 0.0;
    for (double v : xi) s += v * v;
    return std::sqrt(s);
}

void check_dim(const Grid& g, const SymbolSpec& sym) {
    if (g.n != sym.n()) throw std::invalid_argument("symbol dimension does not match the field grid");
}

// 1 on [0,1], smooth decay to 0 at 2.
double beta(double s) { return plateau(s, 1.0, 2.0); }

}  // namespace

//==============================================================================
// Evolution
//==============================================================================

Evolution::Evolution(const Field& f, const SymbolSpec& sym) : Evolution(f.grid, dft(f).data, sym) {
    if (f.domain != Domain::space) throw std::invalid_argument("Evolution expects a space-side field");
}

Evolution::Evolution(const Grid& g, cvec fhat, const SymbolSpec& sym) : grid_(g), fhat_(std::move(fhat)), phi_(g.size()) {
    check_dim(g, sym);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto xi = g.frequency(i);
        phi_[i] = sym.value(xi.data());
    }
}

void Evolution::slice(double t, cplx* out) const {
    const std::size_t total = grid_.size();
    for (std::size_t i = 0; i < total; ++i) out[i] = fhat_[i] * std::polar(1.0, t * phi_[i]);
    idft_inplace(grid_, out);
}

SpacetimeField propagate(const Field& f, const SymbolSpec& sym, const rvec& times) {
    Evolution ev(f, sym);
    SpacetimeField u(f.grid, times);
    for (std::size_t s = 0; s < times.size(); ++s) {
        if (!std::isfinite(times[s])) throw std::invalid_argument("propagation times must be finite");
        if (times[s] == 0.0) {
            std::copy(f.data.begin(), f.data.end(), u.slice(s));
        } else {
            ev.slice(times[s], u.slice(s));
        }
    }
    return u;
}

Field sector_filter(const Field& f, const SectorBump& bump) {
    Field fh = dft(f);
    apply_bump(f.grid, bump, fh.data.data());
    return idft(fh);
}

SpacetimeField apply_U(const Field& f, const SymbolSpec& sym, const SectorBump& bump, const rvec& times) {
    check_dim(f.grid, sym);
    Field fh = dft(f);
    apply_bump(f.grid, bump, fh.data.data());
    Evolution ev(f.grid, fh.data, sym);
    SpacetimeField u(f.grid, times);
    for (std::size_t s = 0; s < times.size(); ++s) ev.slice(times[s], u.slice(s));
    return u;
}

Field bessel(const Field& f, double alpha) {
    if (alpha == 0.0) return f;
    Field fh = dft(f);
    for (std::size_t i = 0; i < fh.size(); ++i) {
        const auto xi = f.grid.frequency(i);
        double r2 = 0.0;
        for (double v : xi) r2 += v * v;
        fh[i] *= std::pow(1.0 + r2, 0.5 * alpha);
    }
    return idft(fh);
}

//==============================================================================
// Littlewood-Paley blocks
//==============================================================================

int lp_top_shell(const Grid& g) {
    const double top = g.max_frequency();
    int k = 0;
    while (std::ldexp(1.0, k) < top) ++k;
    return k;
}

Field lp_project(const Field& f, int k) {
    if (k < 0) throw RangeError("Littlewood-Paley index must be nonnegative");
    const double top = f.grid.max_frequency();
    if (k > 0 && std::ldexp(1.0, k - 1) >= top)
        throw RangeError("shell " + std::to_string(k) + " lies beyond the grid's largest frequency " + std::to_string(top));
    Field fh = dft(f);
    for (std::size_t i = 0; i < fh.size(); ++i) {
        const double r = radius(f.grid.frequency(i));
        const double w = k == 0 ? beta(r) : beta(std::ldexp(r, -k)) - beta(std::ldexp(r, -(k - 1)));
        fh[i] *= w;
    }
    return idft(fh);
}

//==============================================================================
// Rescaling identity
//==============================================================================

RescaleResult rescale_check(const Field& f, const SymbolSpec& sym, int k, const rvec& times, const SectorBump& bump) {
    check_dim(f.grid, sym);
    const Grid& A = f.grid;
    const double nyquist = std::numbers::pi * static_cast<double>(A.N) / A.L;
    if (nyquist < 2.25) throw RangeError("grid cannot represent the sector with margin (per-axis Nyquist " + std::to_string(nyquist) + ")");
    const Grid B = Grid::make(A.n, A.N, std::ldexp(A.L, -k));

    RescaleResult res;
    res.time_scale = std::pow(2.0, -sym.m() * k);
    res.space_scale = std::ldexp(1.0, -k);

    // Left side on grid A.
    SpacetimeField left = apply_U(f, sym, bump, times);

    // g(y) = (f * phi_check)(2^k y): the filtered samples read on grid B.
    Field filtered = sector_filter(f, bump);
    Field g(B, filtered.data);
    Field gh = dft(g);
    const double lo = std::ldexp(0.5, k) * 7.0 / 8.0, lo1 = std::ldexp(0.5, k);
    const double hi1 = std::ldexp(2.0, k), hi = std::ldexp(2.0, k) * 9.0 / 8.0;
    for (std::size_t i = 0; i < gh.size(); ++i) {
        const double r = radius(B.frequency(i));
        double w = 0.0;
        if (r >= lo1 && r <= hi1) w = 1.0;
        else if (r > lo && r < lo1) w = smooth_step((r - lo) / (lo1 - lo));
        else if (r > hi1 && r < hi) w = smooth_step((hi - r) / (hi - hi1));
        gh[i] *= w;
    }
    Evolution ev(B, gh.data, sym);
    cvec buf(B.size());
    double peak = 0.0;
    for (std::size_t s = 0; s < times.size(); ++s) {
        ev.slice(res.time_scale * times[s], buf.data());
        const cplx* u = left.slice(s);
        for (std::size_t j = 0; j < B.size(); ++j) {
            res.mismatch = std::max(res.mismatch, std::abs(u[j] - buf[j]));
            peak = std::max(peak, std::abs(u[j]));
        }
    }
    res.relative = peak > 0.0 ? res.mismatch / peak : res.mismatch;
    return res;
}

//==============================================================================
// Time sampling
//==============================================================================

double time_step_rule(double max_phase_rate) {
    if (!(max_phase_rate > 0.0)) throw std::invalid_argument("phase rate must be positive");
    return 0.999 * (std::numbers::pi / 4.0) / max_phase_rate;
}

TimeSampling sample_window(double a, double b, double max_phase_rate, std::size_t max_samples) {
    if (!(b > a)) throw std::invalid_argument("time window must satisfy a < b");
    TimeSampling ts;
    const double h = time_step_rule(max_phase_rate);
    std::size_t steps = static_cast<std::size_t>(std::ceil((b - a) / h));
    if (steps + 1 > max_samples) {
        steps = max_samples - 1;
        ts.capped = true;
    }
    ts.times = uniform_times(a, b, steps);
    ts.dt = (b - a) / static_cast<double>(steps);
    return ts;
}

cplx gaussian_solution(double x, double t, double w) {
    const cplx d(w * w, -2.0 * t);
    return w / std::sqrt(d) * std::exp(-x * x / (2.0 * d));
}

cplx oscillatory_quadrature(const std::function<cplx(double)>& fhat, const SymbolSpec& sym, double x, double t, double a,
                            double b) {
    if (sym.n() != 1) throw std::invalid_argument("oscillatory_quadrature is one dimensional");
    if (!(b > a)) throw std::invalid_argument("quadrature interval must have positive length");
    // Phase rate |x| + |t| |Phi'|; a few panels per oscillation.
    double gmax = 0.0;
    for (int i = 0; i <= 64; ++i) {
        const double xi = a + (b - a) * i / 64.0;
        double g = 0.0;
        sym.value_gradient(&xi, &g);
        gmax = std::max(gmax, std::abs(g));
    }
    const double rate = std::abs(x) + std::abs(t) * gmax + 1.0;
    auto panels = static_cast<std::size_t>(std::ceil(rate * (b - a) / std::numbers::pi)) + 4;
    // Steep but smooth amplitudes need more panels than the phase does: double until settled.
    auto sum_with = [&](std::size_t p) {
        const QuadratureRule q = gauss_legendre(a, b, p);
        cplx sum = 0.0;
        for (std::size_t i = 0; i < q.x.size(); ++i) {
            const double xi = q.x[i];
            sum += q.w[i] * std::polar(1.0, x * xi + t * sym.value(&xi)) * fhat(xi);
        }
        return sum;
    };
    cplx sum = sum_with(panels);
    for (int round = 0; round < 10; ++round) {
        panels *= 2;
        const cplx next = sum_with(panels);
        const bool settled = std::abs(next - sum) <= 1e-14 * std::max(1.0, std::abs(next));
        sum = next;
        if (settled) break;
    }
    return sum / (2.0 * std::numbers::pi);
}

}  // namespace kato
