#include "kato/opnorm.hpp"

#include "kato/fft.hpp"
#include "kato/mollifier.hpp"
#include "kato/propagator.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace kato {

namespace {

double norm2(const cvec& v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s);
}

void normalise(cvec& v) {
    const double n = norm2(v);
    if (n == 0.0) throw std::runtime_error("cannot normalise a zero vector");
    for (auto& z : v) z /= n;
}

cplx dot(const cvec& a, const cvec& b) {  // sum conj(a) b
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

cvec random_unit(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    cvec v(n);
    for (auto& z : v) z = cplx(g(rng), g(rng));
    normalise(v);
    return v;
}

}  // namespace

WindowSpec parse_window(const std::string& text) {
    WindowSpec w;
    if (text == "local") return w;
    if (text.rfind("global", 0) == 0) {
        w.global = true;
        if (text.size() > 6) {
            if (text[6] != ':') throw std::invalid_argument("window must be local, global or global:T");
            w.T = std::stod(text.substr(7));
            if (!(w.T > 0.0)) throw std::invalid_argument("global window T must be positive");
        }
        return w;
    }
    throw std::invalid_argument("window must be local, global or global:T (got '" + text + "')");
}

std::pair<double, double> time_window(const SmoothingOperatorSpec& spec) {
    if (!spec.window.global) return local_window(spec.R, spec.sym.m());
    const double T = spec.window.T > 0.0 ? spec.window.T : 8.0 * std::pow(spec.R, spec.sym.m());
    return {-T, T};
}

double period_factor(const SmoothingOperatorSpec& spec) { return spec.window.global ? 1.5 : 2.0; }

std::unique_ptr<ExtensionSampler> make_sampler(const SmoothingOperatorSpec& spec, double period_scale) {
    return std::make_unique<ExtensionSampler>(spec.sym, spec.alpha, spec.bump, spec.R, time_window(spec), period_factor(spec) * period_scale,
                                              spec.dx);
}

//==============================================================================
// Power iteration and dense check
//==============================================================================

PowerResult power_iteration(const LinearOperator& A, const PowerOptions& opt) {
    if (opt.restarts < 1) throw std::invalid_argument("power iteration needs at least one start");
    std::mt19937_64 rng(opt.seed);
    PowerResult best;
    best.converged = true;
    const std::size_t n = A.input_size();
    for (std::size_t r = 0; r < opt.restarts; ++r) {
        cvec v = (r == 0 && opt.warm) ? *opt.warm : random_unit(n, rng);
        if (v.size() != n) throw std::invalid_argument("warm start has the wrong length");
        normalise(v);
        cvec w;
        double lambda = 0.0, prev = 0.0, gap = 1.0;
        bool done = false;
        std::size_t it = 0;
        while (it < opt.max_iterations) {
            A.normal(v, w);
            ++it;
            lambda = dot(v, w).real();
            const double wn = norm2(w);
            if (wn == 0.0) {
                lambda = 0.0;
                done = true;
                break;
            }
            gap = it > 1 ? std::abs(lambda - prev) / std::max(lambda, 1e-300) : 1.0;
            if (it > 1 && gap < opt.tol) {
                done = true;
                break;
            }
            prev = lambda;
            for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / wn;
        }
        best.iterations += it;
        ++best.restarts;
        if (!done) {
            best.converged = false;
            best.gap = std::max(best.gap, gap);
        }
        const double nrm = std::sqrt(std::max(lambda, 0.0));
        if (nrm > best.norm || best.vector.empty()) {
            best.norm = nrm;
            best.vector = v;
        }
    }
    return best;
}

double dense_operator_norm(const LinearOperator& A) {
    const std::size_t n = A.input_size(), m = A.output_size();
    Eigen::MatrixXcd M(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    cvec e(n, 0.0), col;
    for (std::size_t j = 0; j < n; ++j) {
        e[j] = 1.0;
        A.apply(e, col);
        for (std::size_t i = 0; i < m; ++i) M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
        e[j] = 0.0;
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
    return svd.singularValues()(0);
}

PowerResult operator_norm_l2(const SmoothingOperatorSpec& spec, const PowerOptions& opt) {
    if (spec.q != 2.0 || spec.r != 2.0) throw DomainError("operator_norm_l2 needs q = r = 2");
    const auto A = make_sampler(spec);
    return power_iteration(*A, opt);
}

WindowComparison compare_windows(const SmoothingOperatorSpec& spec, const PowerOptions& opt) {
    SmoothingOperatorSpec g = spec;
    g.window.global = true;
    auto A = make_sampler(g);
    const auto loc = local_window(spec.R, spec.sym.m());
    const auto glob = A->window();
    if (loc.first < glob.first || loc.second > glob.second) throw DomainError("the global window must contain the local window");
    WindowComparison c;
    A->set_window(loc);
    c.local = power_iteration(*A, opt);
    A->set_window(glob);
    PowerOptions o = opt;
    o.warm = &c.local.vector;
    c.global = power_iteration(*A, o);
    return c;
}

//==============================================================================
// Torus operator
//==============================================================================

TorusSmoothingOperator::TorusSmoothingOperator(const Grid& grid, const SymbolSpec& sym, double alpha, const SectorBump& bump, double R,
                                               const rvec& times)
    : grid_(grid), times_(times) {
    if (grid.n != sym.n()) throw std::invalid_argument("grid and symbol dimensions differ");
    if (times.empty()) throw std::invalid_argument("torus operator needs at least one time");
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const auto xi = grid.frequency(k);
        const double b = bump(xi.data(), grid.n);
        if (b == 0.0) continue;
        double r2 = 0.0;
        for (double v : xi) r2 += v * v;
        nodes_.push_back(k);
        mult_.push_back(b * std::pow(1.0 + r2, 0.5 * alpha) * std::pow(grid.L, 0.5 * grid.n));
        phi_.push_back(sym.value(xi.data()));
    }
    if (nodes_.empty()) throw DomainError("no grid frequencies inside the sector bump");
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const auto x = grid.point(j);
        double r2 = 0.0;
        for (double v : x) r2 += v * v;
        if (std::sqrt(r2) <= R) cells_.push_back(j);
    }
    if (cells_.empty()) throw DomainError("ball contains no grid cells");
    wt_ = trapezoid_weights(times.size(), times.size() > 1 ? times[1] - times[0] : 1.0);
}

void TorusSmoothingOperator::apply(const cvec& y, cvec& out) const {
    if (y.size() != nodes_.size()) throw std::invalid_argument("torus operator input has the wrong length");
    out.assign(output_size(), 0.0);
    cvec buf(grid_.size());
    const double wx = grid_.cell_volume();
    for (std::size_t s = 0; s < times_.size(); ++s) {
        std::fill(buf.begin(), buf.end(), cplx(0.0));
        for (std::size_t i = 0; i < nodes_.size(); ++i) buf[nodes_[i]] = mult_[i] * std::polar(1.0, times_[s] * phi_[i]) * y[i];
        idft_inplace(grid_, buf.data());
        const double w = std::sqrt(wx * wt_[s]);
        for (std::size_t c = 0; c < cells_.size(); ++c) out[s * cells_.size() + c] = w * buf[cells_[c]];
    }
}

void TorusSmoothingOperator::adjoint(const cvec& out, cvec& y) const {
    if (out.size() != output_size()) throw std::invalid_argument("torus operator output has the wrong length");
    y.assign(nodes_.size(), 0.0);
    cvec buf(grid_.size());
    const double wx = grid_.cell_volume();
    // idft_j = L^{-n} sum_k e^{i x_j xi_k} v_k, so its adjoint is (L dx)^{-n} dft.
    const double adj = 1.0 / std::pow(grid_.L * grid_.dx(), grid_.n);
    for (std::size_t s = 0; s < times_.size(); ++s) {
        std::fill(buf.begin(), buf.end(), cplx(0.0));
        const double w = std::sqrt(wx * wt_[s]);
        for (std::size_t c = 0; c < cells_.size(); ++c) buf[cells_[c]] = w * out[s * cells_.size() + c];
        dft_inplace(grid_, buf.data());
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            y[i] += mult_[i] * std::polar(1.0, -times_[s] * phi_[i]) * adj * buf[nodes_[i]];
    }
}

//==============================================================================
// Mixed-norm lower bounds
//==============================================================================

namespace {

struct Trial {
    std::string name;
    cvec y;
    double value = 0.0;
};

}  // namespace

LowerBound lower_bound_mixed(const ExtensionSampler& A, double q, double r, NormOrder order, const LowerBoundOptions& opt) {
    LowerBound out;
    const double R = A.R();
    const auto win = A.window();
    const double W = win.second - win.first;
    const SymbolSpec& sym = A.symbol();
    auto phi = [&sym](double xi) { return sym.value(&xi); };

    std::vector<Trial> trials;
    auto add = [&](std::string name, const std::function<cplx(double)>& fhat) {
        cvec y = A.from_spectrum(fhat);
        if (norm2(y) == 0.0) return;
        normalise(y);
        const double v = A.mixed(y, q, r, order);
        ++out.evaluations;
        out.candidates.push_back({name, v});
        trials.push_back({std::move(name), std::move(y), v});
    };

    // The phase e^{-i t_f Phi(xi)} focuses the packet at x = 0, t = t_f.
    const double centres[4] = {0.75, 1.0, 1.25, 1.5};
    const double fracs[3] = {0.1, 0.5, 0.9};
    for (int k = 4; k >= 0; --k) {
        const double w = std::pow(R, -0.25 * k);
        for (double f : fracs) {
            const double tf = win.first + f * W;
            for (double c : centres) {
                std::ostringstream name;
                name << "focus(xi0=" << c << ",w=" << w << ",tf=" << tf << ")";
                add(name.str(), [&, c, w, tf](double xi) {
                    const double b = mollifier((xi - c) / w);
                    return b == 0.0 ? cplx(0.0) : b * std::polar(1.0, -tf * phi(xi));
                });
            }
            std::ostringstream name;
            name << "superposition(w=" << w << ",tf=" << tf << ")";
            add(name.str(), [&, w, tf](double xi) {
                double b = 0.0;
                for (double c : centres) b += mollifier((xi - c) / w);
                return b == 0.0 ? cplx(0.0) : b * std::polar(1.0, -tf * phi(xi));
            });
        }
    }
    // Knapp example: frequency width 1/R about xi = 1, centred in the window.
    const double tc = 0.5 * (win.first + win.second);
    auto knapp = [&](double xi) {
        const double b = mollifier((xi - 1.0) * R / 0.5);
        return b == 0.0 ? cplx(0.0) : b * std::polar(1.0, -tc * phi(xi));
    };
    add("knapp", knapp);
    {
        cvec y = A.from_spectrum(knapp);
        if (norm2(y) > 0.0) {
            normalise(y);
            out.plate_heuristic = A.mixed(y, q, infinity, NormOrder::tx);
            ++out.evaluations;
        }
    }
    if (trials.empty()) throw DomainError("no lower-bound candidate has support on the sampling nodes");

    std::sort(trials.begin(), trials.end(), [](const Trial& a, const Trial& b) { return a.value > b.value; });
    out.best = trials.front().name;
    out.best_candidate = trials.front().value;
    out.value = trials.front().value;
    out.maximizer = trials.front().y;
    if (!opt.ascent) return out;

    // Projected gradient ascent on the unit sphere; the norm is homogeneous of degree 1.
    const std::size_t starts = std::min(opt.restarts, trials.size());
    for (std::size_t s = 0; s < starts; ++s) {
        cvec y = trials[s].y, g, trial_y(y.size());
        double v = trials[s].value, eta = 0.5;
        for (std::size_t it = 0; it < opt.ascent_steps; ++it) {
            A.mixed(y, q, r, order, &g);
            ++out.evaluations;
            const cplx proj = dot(y, g);
            for (std::size_t i = 0; i < g.size(); ++i) g[i] -= proj.real() * y[i];
            const double gn = norm2(g);
            if (gn == 0.0) break;
            bool improved = false;
            while (eta >= opt.min_step) {
                for (std::size_t i = 0; i < y.size(); ++i) trial_y[i] = y[i] + eta * g[i] / gn;
                normalise(trial_y);
                const double tv = A.mixed(trial_y, q, r, order);
                ++out.evaluations;
                if (tv > v) {
                    y.swap(trial_y);
                    v = tv;
                    improved = true;
                    eta = std::min(1.0, 1.5 * eta);
                    break;
                }
                eta *= 0.5;
            }
            if (!improved) {
                out.stagnated = true;
                break;
            }
        }
        if (v > out.value) {
            out.value = v;
            out.best = trials[s].name;
            out.maximizer = y;
        }
    }
    return out;
}

LowerBound lower_bound_mixed(const SmoothingOperatorSpec& spec, const LowerBoundOptions& opt) {
    const auto A = make_sampler(spec);
    return lower_bound_mixed(*A, spec.q, spec.r, spec.order, opt);
}

double tail_fraction(const ExtensionSampler& A, const cvec& y, double r) {
    const auto win = A.window();
    if (!(win.first < 0.0 && win.second > 0.0)) return 0.0;
    const double T = std::max(-win.first, win.second);
    const rvec d = A.time_density(y, std::isinf(r) ? 2.0 : r);
    double total = 0.0, tail = 0.0;
    for (std::size_t k = 0; k < d.size(); ++k) {
        total += d[k];
        if (std::abs(A.window_time(k)) >= 0.9 * T) tail += d[k];
    }
    return total > 0.0 ? tail / total : 0.0;
}

}  // namespace kato
