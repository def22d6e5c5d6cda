#include "kato/wavepackets.hpp"

#include "kato/exponents.hpp"
#include "kato/fft.hpp"
#include "kato/mollifier.hpp"
#include "kato/propagator.hpp"
#include "kato/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace kato {

namespace {

// Odometer over a box of multi-indices [lo, hi]^n.
bool next_index(std::vector<long>& idx, long lo, long hi) {
    for (int a = static_cast<int>(idx.size()) - 1; a >= 0; --a) {
        if (++idx[a] <= hi) return true;
        idx[a] = lo;
    }
    return false;
}

double torus_delta(double d, double period) {
    d = std::fmod(d, period);
    if (d < -0.5 * period) d += period;
    if (d >= 0.5 * period) d -= period;
    return d;
}

}  // namespace

//==============================================================================
// Partition profile
//==============================================================================

cplx partition_profile(double s, long j, double radius) {
    const double d = s - static_cast<double>(j);
    if (std::abs(d) >= radius) return 0.0;
    auto b = [radius](double x) { return mollifier(x / radius); };
    double A, B;
    bool left_member;
    if (d >= 0.0) {
        A = b(d);
        B = b(1.0 - d);
        left_member = true;
    } else {
        A = b(1.0 + d);
        B = b(-d);
        left_member = false;
    }
    const double tot = A + B;
    const double ma = std::sqrt(A / tot), mb = std::sqrt(B / tot);
    const double theta = 2.0 * std::atan2(mb, ma);
    const cplx ph = std::polar(1.0, 0.5 * theta);
    return left_member ? ma * ph : cplx(0.0, -1.0) * mb * ph;
}

//==============================================================================
// PartitionPair
//==============================================================================

PartitionPair PartitionPair::build(double R, const Grid& grid) {
    if (!(R >= 1.0)) throw ConfigurationError("wave packet scale R must be >= 1");
    const double ratio = grid.L / R;
    const long M = std::lround(ratio);
    if (std::abs(ratio - static_cast<double>(M)) > 1e-9 * ratio)
        throw ConfigurationError("grid period L = " + std::to_string(grid.L) + " must be an integer multiple of R = " + std::to_string(R));
    const double dx_max = std::min(R / 8.0, std::numbers::pi / 4.0);
    const double L_min = 4.0 * std::numbers::pi * R;
    if (grid.dx() > dx_max * (1.0 + 1e-12) || grid.L < L_min) {
        const std::size_t need_N = static_cast<std::size_t>(std::ceil(std::max(grid.L, L_min) / dx_max));
        std::size_t N = 8;
        while (N < need_N) N *= 2;
        throw ConfigurationError("grid cannot resolve wave packets at R = " + std::to_string(R) + ": need dx <= " +
                                 std::to_string(dx_max) + " and L >= " + std::to_string(L_min) + " (e.g. L = " +
                                 std::to_string(std::max(grid.L, L_min)) + " with N >= " + std::to_string(N) + ")");
    }
    PartitionPair p;
    p.R_ = R;
    p.grid_ = grid;
    p.M_ = M;

    p.phi1_.assign(static_cast<std::size_t>(M), cvec(grid.N));
    for (long j = 0; j < M; ++j) {
        const double c = p.l_coord(j);
        for (std::size_t i = 0; i < grid.N; ++i) {
            const double d = torus_delta(grid.x(i) - c, grid.L) / R;
            p.phi1_[static_cast<std::size_t>(j)][i] = partition_profile(d, 0, spatial_radius);
        }
    }

    const double top = std::numbers::pi * static_cast<double>(grid.N) / grid.L;
    p.vmin_ = static_cast<long>(std::floor(-top * R - frequency_radius));
    p.vmax_ = static_cast<long>(std::ceil(top * R + frequency_radius));
    p.psi1_.assign(static_cast<std::size_t>(p.vmax_ - p.vmin_ + 1), {});
    for (std::size_t k = 0; k < grid.N; ++k) {
        const double s = R * grid.xi(k);
        const long j0 = static_cast<long>(std::floor(s));
        for (long j = j0 - 1; j <= j0 + 2; ++j) {
            if (j < p.vmin_ || j > p.vmax_) continue;
            const cplx val = partition_profile(s, j, frequency_radius);
            if (val != 0.0) p.psi1_[static_cast<std::size_t>(j - p.vmin_)].emplace_back(k, val);
        }
    }
    return p;
}

double PartitionPair::l_coord(long j) const {
    double c = static_cast<double>(j) * R_;
    c = torus_delta(c, grid_.L);
    return c;
}

cvec PartitionPair::phi(const std::vector<long>& lj) const {
    const Grid& g = grid_;
    cvec out(g.size());
    std::size_t idx[3];
    for (std::size_t f = 0; f < g.size(); ++f) {
        g.unravel(f, idx);
        cplx v = 1.0;
        for (int a = 0; a < g.n && v != 0.0; ++a) v *= phi1_[static_cast<std::size_t>(lj[a])][idx[a]];
        out[f] = v;
    }
    return out;
}

std::vector<std::pair<std::size_t, cplx>> PartitionPair::psi(const std::vector<long>& vk) const {
    const Grid& g = grid_;
    std::vector<std::pair<std::size_t, cplx>> acc{{0, 1.0}};
    for (int a = 0; a < g.n; ++a) {
        if (vk[a] < vmin_ || vk[a] > vmax_) return {};
        const auto& axis = psi1_[static_cast<std::size_t>(vk[a] - vmin_)];
        std::vector<std::pair<std::size_t, cplx>> next;
        next.reserve(acc.size() * axis.size());
        for (const auto& [fi, fv] : acc)
            for (const auto& [k, kv] : axis) next.emplace_back(fi * g.N + k, fv * kv);
        acc.swap(next);
        if (acc.empty()) break;
    }
    return acc;
}

PartitionPair::SumCheck PartitionPair::spatial_sums() const {
    const Grid& g = grid_;
    std::vector<cvec> lin(g.n, cvec(g.N, 0.0));
    std::vector<rvec> sq(g.n, rvec(g.N, 0.0));
    for (int a = 0; a < g.n; ++a)
        for (const auto& prof : phi1_)
            for (std::size_t i = 0; i < g.N; ++i) {
                lin[a][i] += prof[i];
                sq[a][i] += std::norm(prof[i]);
            }
    SumCheck c;
    std::size_t idx[3];
    for (std::size_t f = 0; f < g.size(); ++f) {
        g.unravel(f, idx);
        cplx l = 1.0;
        double s = 1.0;
        for (int a = 0; a < g.n; ++a) {
            l *= lin[a][idx[a]];
            s *= sq[a][idx[a]];
        }
        c.lin_error = std::max(c.lin_error, std::abs(l - 1.0));
        c.sq_error = std::max(c.sq_error, std::abs(s - 1.0));
    }
    return c;
}

PartitionPair::SumCheck PartitionPair::frequency_sums() const {
    const Grid& g = grid_;
    cvec lin(g.N, 0.0);
    rvec sq(g.N, 0.0);
    for (const auto& axis : psi1_)
        for (const auto& [k, v] : axis) {
            lin[k] += v;
            sq[k] += std::norm(v);
        }
    SumCheck c;
    std::size_t idx[3];
    for (std::size_t f = 0; f < g.size(); ++f) {
        g.unravel(f, idx);
        cplx l = 1.0;
        double s = 1.0;
        for (int a = 0; a < g.n; ++a) {
            l *= lin[idx[a]];
            s *= sq[idx[a]];
        }
        c.lin_error = std::max(c.lin_error, std::abs(l - 1.0));
        c.sq_error = std::max(c.sq_error, std::abs(s - 1.0));
    }
    return c;
}

//==============================================================================
// Decomposition
//==============================================================================

Decomposition decompose(const Field& f, double R) {
    if (f.domain != Domain::space) throw std::invalid_argument("decompose expects a space-side field");
    const PartitionPair pp = PartitionPair::build(R, f.grid);
    const Grid& g = f.grid;
    Decomposition d;
    d.R = R;
    d.input_energy = l2_norm_sq(f);
    const double threshold = packet_drop_threshold * d.input_energy;
    const double budget = packet_drop_budget * d.input_energy;
    const double freq_weight = std::pow(1.0 / g.L, g.n);

    // First pass: transforms of phi_l f and every packet energy.
    struct Slot {
        std::size_t block;
        std::vector<long> lj, vk;
        double energy;
    };
    std::vector<cvec> blocks;
    std::vector<Slot> slots;
    std::vector<long> lj(g.n, 0);
    do {
        const cvec ph = pp.phi(lj);
        cvec buf(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) buf[i] = ph[i] * f[i];
        dft_inplace(g, buf.data());
        std::vector<long> vk(g.n, pp.v_min());
        do {
            const auto support = pp.psi(vk);
            if (support.empty()) continue;
            double e = 0.0;
            for (const auto& [k, w] : support) e += std::norm(w * buf[k]);
            slots.push_back({blocks.size(), lj, vk, e * freq_weight});
        } while (next_index(vk, pp.v_min(), pp.v_max()));
        blocks.push_back(std::move(buf));
    } while (next_index(lj, 0, pp.spatial_count() - 1));

    // Drop the weakest packets, smallest first, while each is under the threshold
    // and their total stays within the budget.
    std::vector<std::size_t> order(slots.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return slots[a].energy < slots[b].energy; });
    std::vector<char> keep(slots.size(), 1);
    for (std::size_t i : order) {
        const double e = slots[i].energy;
        if (e != 0.0 && (e >= threshold || d.dropped_energy + e > budget)) break;
        keep[i] = 0;
        ++d.dropped;
        d.dropped_energy += e;
    }

    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (!keep[i]) continue;
        const Slot& s = slots[i];
        WavePacket p;
        p.l_index = s.lj;
        p.v_index = s.vk;
        for (int a = 0; a < g.n; ++a) {
            p.l.push_back(pp.l_coord(s.lj[a]));
            p.v.push_back(pp.v_coord(s.vk[a]));
        }
        p.energy = s.energy;
        p.field = Field(g, Domain::frequency);
        for (const auto& [k, w] : pp.psi(s.vk)) p.field[k] = w * blocks[s.block][k];
        idft_inplace(g, p.field.data.data());
        p.field.domain = Domain::space;
        d.packets.push_back(std::move(p));
    }
    return d;
}

DecompositionAudit audit_decomposition(const Field& f, const Decomposition& d, double spatial_constant) {
    const Grid& g = f.grid;
    DecompositionAudit a;
    a.spatial_constant = spatial_constant;
    cvec sum(g.size(), 0.0);
    double e = 0.0;
    for (const auto& p : d.packets) {
        for (std::size_t i = 0; i < g.size(); ++i) sum[i] += p.field[i];
        e += p.energy;
    }
    Field diff(g);
    for (std::size_t i = 0; i < g.size(); ++i) diff[i] = f[i] - sum[i];
    const double fn = l2_norm(f);
    a.reconstruction_error = l2_norm(diff) / fn;
    a.energy_error = std::abs(e - fn * fn) / (fn * fn);

    const std::size_t nn = static_cast<std::size_t>(g.n);
    std::vector<double> xis(g.size() * nn), xs(g.size() * nn);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const auto xi = g.frequency(k);
        const auto x = g.point(k);
        std::copy(xi.begin(), xi.end(), xis.begin() + static_cast<std::ptrdiff_t>(k * nn));
        std::copy(x.begin(), x.end(), xs.begin() + static_cast<std::ptrdiff_t>(k * nn));
    }
    const double freq_r2 = 1.0 / (d.R * d.R), space_r2 = spatial_constant * spatial_constant * d.R * d.R;
    for (const auto& p : d.packets) {
        const Field ph = dft(p.field);
        double out = 0.0, all = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) {
            double d2 = 0.0;
            for (std::size_t ax = 0; ax < nn; ++ax) d2 += (xis[k * nn + ax] - p.v[ax]) * (xis[k * nn + ax] - p.v[ax]);
            const double m = std::norm(ph[k]);
            all += m;
            if (d2 > freq_r2) out += m;
        }
        a.max_frequency_spill = std::max(a.max_frequency_spill, all > 0 ? out / all : 0.0);

        double sout = 0.0, sall = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            double d2 = 0.0;
            for (std::size_t ax = 0; ax < nn; ++ax) {
                const double dd = torus_delta(xs[i * nn + ax] - p.l[ax], g.L);
                d2 += dd * dd;
            }
            const double m = std::norm(p.field[i]);
            sall += m;
            if (d2 > space_r2) sout += m;
        }
        a.max_spatial_spill = std::max(a.max_spatial_spill, sall > 0 ? sout / sall : 0.0);
    }
    return a;
}

double almost_orthogonality(const Decomposition& d, const std::vector<std::size_t>& selection) {
    if (selection.empty()) throw DomainError("almost_orthogonality needs a nonempty selection");
    const Grid& g = d.packets.at(selection.front()).field.grid;
    Field sum(g);
    double e = 0.0;
    for (auto s : selection) {
        const auto& p = d.packets.at(s);
        for (std::size_t i = 0; i < g.size(); ++i) sum[i] += p.field[i];
        e += p.energy;
    }
    if (e == 0.0) throw DomainError("almost_orthogonality selection has zero energy");
    return l2_norm(sum) / std::sqrt(e);
}

TransportResult packet_transport(const Decomposition& d, const SymbolSpec& sym, const rvec& times, double radius_factor,
                                 const SectorBump& bump) {
    TransportResult res;
    for (const auto& p : d.packets) {
        if (!Sector::contains(p.v.data(), static_cast<int>(p.v.size()))) continue;
        const Grid& g = p.field.grid;
        SpacetimeField u = apply_U(p.field, sym, bump, times);
        const Phase ph = phase(sym, p.v);
        bool counted = false;
        for (std::size_t s = 0; s < times.size(); ++s) {
            double in = 0.0, all = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i) {
                const auto x = g.point(i);
                double d2 = 0.0;
                for (int ax = 0; ax < g.n; ++ax) {
                    const double core = p.l[ax] - times[s] * ph.gradient[ax];
                    const double dd = torus_delta(x[ax] - core, g.L);
                    d2 += dd * dd;
                }
                const double m = std::norm(u.slice(s)[i]);
                all += m;
                if (std::sqrt(d2) <= radius_factor * d.R) in += m;
            }
            all *= g.cell_volume();
            in *= g.cell_volume();
            if (all < 1e-6 * p.energy) continue;
            counted = true;
            if (in / all < res.min_fraction) {
                res.min_fraction = in / all;
                res.worst_time = times[s];
            }
        }
        if (counted) ++res.packets_checked;
    }
    return res;
}

PsiSpill psi_spillover(double R, const Grid& grid) {
    const PartitionPair pp = PartitionPair::build(R, grid);
    Field fh(grid, Domain::frequency);
    for (const auto& [k, v] : pp.psi(std::vector<long>(grid.n, 0))) fh[k] = v;
    Field k = idft(fh);
    std::vector<std::pair<double, double>> rm;
    double all = 0.0, out = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto x = grid.point(i);
        double d2 = 0.0;
        for (double v : x) d2 += v * v;
        const double r = std::sqrt(d2) / R;
        const double m = std::norm(k[i]);
        rm.emplace_back(r, m);
        all += m;
        if (r > 2.0 / 3.0) out += m;
    }
    std::sort(rm.begin(), rm.end());
    PsiSpill s;
    s.outside_fraction = out / all;
    double acc = 0.0;
    for (const auto& [r, m] : rm) {
        acc += m;
        if (acc >= 0.9999 * all) {
            s.radius_9999 = r;
            break;
        }
    }
    return s;
}

//==============================================================================
// Packet kernel
//==============================================================================

double kernel_chi_radius(double R) { return 2.0 / (3.0 * R); }

namespace {

template <typename F>
cplx kernel_quadrature(const std::vector<double>& v, double R, const SymbolSpec& sym, double rate, F&& integrand) {
    const int n = sym.n();
    const double a = kernel_chi_radius(R), b = 1.1 * a;
    std::vector<QuadratureRule> rules(n);
    for (int ax = 0; ax < n; ++ax) {
        const double c = v[ax];
        const double edges[4] = {c - b, c - a, c + a, c + b};
        QuadratureRule q;
        for (int seg = 0; seg < 3; ++seg) {
            const double len = edges[seg + 1] - edges[seg];
            const std::size_t panels = static_cast<std::size_t>(std::ceil(len * rate / std::numbers::pi)) + (seg == 1 ? 4 : 2);
            QuadratureRule part = gauss_legendre(edges[seg], edges[seg + 1], panels);
            q.x.insert(q.x.end(), part.x.begin(), part.x.end());
            q.w.insert(q.w.end(), part.w.begin(), part.w.end());
        }
        rules[ax] = std::move(q);
    }
    cplx acc = 0.0;
    std::vector<std::size_t> idx(n, 0);
    std::vector<double> xi(n);
    while (true) {
        double w = 1.0;
        for (int ax = 0; ax < n; ++ax) {
            xi[ax] = rules[ax].x[idx[ax]];
            w *= rules[ax].w[idx[ax]];
        }
        double d2 = 0.0;
        for (int ax = 0; ax < n; ++ax) d2 += (xi[ax] - v[ax]) * (xi[ax] - v[ax]);
        const double chi = plateau(std::sqrt(d2), a, b);
        if (chi != 0.0) acc += w * chi * integrand(xi);
        int ax = n - 1;
        for (; ax >= 0; --ax) {
            if (++idx[ax] < rules[ax].x.size()) break;
            idx[ax] = 0;
        }
        if (ax < 0) break;
    }
    return acc;
}

}  // namespace

KernelValue packet_kernel(const std::vector<double>& v, double R, const SymbolSpec& sym, double t, const std::vector<double>& x,
                          const SectorBump& bump) {
    const int n = sym.n();
    if (static_cast<int>(v.size()) != n || static_cast<int>(x.size()) != n) throw std::invalid_argument("packet_kernel: dimension mismatch");
    double xn = 0.0, vn = 0.0;
    for (int a = 0; a < n; ++a) {
        xn += x[a] * x[a];
        vn += v[a] * v[a];
    }
    const double reach = std::sqrt(vn) + 1.1 * kernel_chi_radius(R);
    const double gmax = sym.m() * std::pow(reach, sym.m() - 1.0) * 2.0;
    const double rate = std::sqrt(xn) + std::abs(t) * gmax + 1.0;
    KernelValue kv;
    kv.outside_regime = std::abs(t) > 2.0 * std::pow(R, sym.m());
    kv.value = kernel_quadrature(v, R, sym, rate, [&](const std::vector<double>& xi) {
        double ph = t * sym.value(xi.data());
        for (int a = 0; a < n; ++a) ph += x[a] * xi[a];
        return bump(xi.data(), n) * std::polar(1.0, ph);
    });
    return kv;
}

double packet_kernel_mass(const std::vector<double>& v, double R, const SymbolSpec& sym, const SectorBump& bump) {
    return kernel_quadrature(v, R, sym, 1.0, [&](const std::vector<double>& xi) { return cplx(bump(xi.data(), sym.n()), 0.0); }).real();
}

KernelDecay kernel_decay(const std::vector<double>& v, double R, const SymbolSpec& sym, const rvec& times, const rvec& factors,
                         const SectorBump& bump) {
    if (times.empty()) throw std::invalid_argument("kernel decay needs at least one time");
    const auto n = static_cast<std::size_t>(sym.n());
    if (v.size() != n) throw std::invalid_argument("frequency centre has the wrong dimension");
    std::vector<double> grad(n);
    sym.value_gradient(v.data(), grad.data());
    KernelDecay out;
    out.R = R;
    std::vector<double> x(n);
    auto at = [&](double t, double shift) {
        for (std::size_t i = 0; i < n; ++i) x[i] = -t * grad[i];
        x[0] += shift;
        return std::abs(packet_kernel(v, R, sym, t, x, bump).value);
    };
    for (double t : times) out.core_value = std::max(out.core_value, at(t, 0.0));
    for (double f : factors) {
        const double d = f * R;
        double best = 0.0;
        for (double t : times) best = std::max({best, at(t, d), at(t, -d)});
        out.samples.emplace_back(d, best);
    }
    out.slope = loglog_slope(out.samples);
    return out;
}

}  // namespace kato
