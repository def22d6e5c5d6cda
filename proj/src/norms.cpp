#include "kato/norms.hpp"

#include "kato/symbols.hpp"

#include <algorithm>
#include <cmath>

namespace kato {

rvec trapezoid_weights(std::size_t S, double dt) {
    if (S == 1) return {1.0};
    rvec w(S, dt);
    w.front() *= 0.5;
    w.back() *= 0.5;
    return w;
}

double weighted_lp(const double* v, const double* w, std::size_t count, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (std::size_t i = 0; i < count; ++i) m = std::max(m, v[i]);
        return m;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i) s += w[i] * std::pow(v[i], p);
    return std::pow(s, 1.0 / p);
}

double mixed_norm(const SpacetimeField& u, const MixedNormSpec& spec) {
    if (!(spec.q >= 1.0) || !(spec.r >= 1.0)) throw DomainError("mixed norm exponents must be >= 1");
    const Grid& g = u.grid;
    std::vector<double> c = spec.region.center;
    if (c.empty()) c.assign(g.n, 0.0);
    if (static_cast<int>(c.size()) != g.n) throw DomainError("ball centre has wrong dimension");

    std::vector<std::size_t> cells;
    for (std::size_t j = 0; j < g.size(); ++j) {
        const auto x = g.point(j);
        double d2 = 0.0;
        for (int a = 0; a < g.n; ++a) d2 += (x[a] - c[a]) * (x[a] - c[a]);
        if (std::sqrt(d2) <= spec.region.radius) cells.push_back(j);
    }
    std::vector<std::size_t> slices;
    for (std::size_t s = 0; s < u.slices(); ++s) {
        if (!spec.window) {
            slices.push_back(s);
            continue;
        }
        const double tol = 1e-12 * std::max(1.0, std::abs(u.times[s]));
        if (u.times[s] >= spec.window->first - tol && u.times[s] <= spec.window->second + tol) slices.push_back(s);
    }
    if (cells.empty()) throw DomainError("mixed norm region contains no grid cells");
    if (slices.empty()) throw DomainError("mixed norm window contains no time samples");
    if (!u.uniform()) throw DomainError("mixed norm needs uniformly spaced times");

    const double dt = slices.size() > 1 ? u.times[slices[1]] - u.times[slices[0]] : 1.0;
    const rvec wt = trapezoid_weights(slices.size(), dt);
    const rvec wx(cells.size(), g.cell_volume());

    double peak = 0.0;
    for (auto s : slices)
        for (auto j : cells) peak = std::max(peak, std::abs(u.slice(s)[j]));
    if (peak == 0.0) return 0.0;

    rvec buf;
    rvec outer;
    if (spec.order == NormOrder::xt) {
        buf.resize(slices.size());
        outer.resize(cells.size());
        for (std::size_t a = 0; a < cells.size(); ++a) {
            for (std::size_t b = 0; b < slices.size(); ++b) buf[b] = std::abs(u.slice(slices[b])[cells[a]]) / peak;
            outer[a] = weighted_lp(buf.data(), wt.data(), buf.size(), spec.r);
        }
        return peak * weighted_lp(outer.data(), wx.data(), outer.size(), spec.q);
    }
    buf.resize(cells.size());
    outer.resize(slices.size());
    for (std::size_t b = 0; b < slices.size(); ++b) {
        for (std::size_t a = 0; a < cells.size(); ++a) buf[a] = std::abs(u.slice(slices[b])[cells[a]]) / peak;
        outer[b] = weighted_lp(buf.data(), wx.data(), buf.size(), spec.q);
    }
    return peak * weighted_lp(outer.data(), wt.data(), outer.size(), spec.r);
}

double maximal_norm(const SpacetimeField& u, double q, const Ball& region, std::optional<std::pair<double, double>> window) {
    MixedNormSpec spec;
    spec.q = q;
    spec.r = infinity;
    spec.order = NormOrder::xt;
    spec.region = region;
    spec.window = window;
    return mixed_norm(u, spec);
}

double parse_exponent(const std::string& s) {
    if (s == "inf" || s == "infinity" || s == "Inf") return infinity;
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("bad exponent '" + s + "'");
    return v;
}

NormOrder parse_order(const std::string& s) {
    if (s == "xt") return NormOrder::xt;
    if (s == "tx") return NormOrder::tx;
    throw std::invalid_argument("norm order must be xt or tx, got '" + s + "'");
}

}  // namespace kato
