#include "kato/sampler.hpp"

#include "kato/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kato {

namespace {

std::size_t next_pow2(double v) {
    std::size_t n = 8;
    while (static_cast<double>(n) < v) n *= 2;
    return n;
}

// |u|^p, with the common even exponents done without pow.
double abs_pow(cplx u, double p) {
    const double n2 = std::norm(u);
    if (p == 2.0) return n2;
    if (p == 4.0) return n2 * n2;
    return n2 == 0.0 ? 0.0 : std::pow(n2, 0.5 * p);
}

// |u|^{p-2} u, zero at u = 0.
cplx pow_phase(cplx u, double p) {
    if (p == 2.0) return u;
    if (p == 4.0) return std::norm(u) * u;
    const double n2 = std::norm(u);
    if (n2 == 0.0) return 0.0;
    return std::pow(n2, 0.5 * (p - 2.0)) * u;
}

}  // namespace

ExtensionSampler::ExtensionSampler(const SymbolSpec& sym, double alpha, const SectorBump& bump, double R,
                                   std::pair<double, double> layout_window, double period_factor, double dx)
    : sym_(sym), R_(R), layout_(layout_window), window_(layout_window) {
    if (sym.n() != 1) throw std::invalid_argument("the extension sampler is implemented for n = 1");
    if (!(R > 0.0)) throw std::invalid_argument("ball radius R must be positive");
    if (!(layout_window.second > layout_window.first)) throw std::invalid_argument("time window must have positive length");
    if (!(period_factor > 1.0)) throw std::invalid_argument("period factor must exceed 1");
    if (!(dx > 0.0)) throw std::invalid_argument("spatial step must be positive");
    const double one = 1.0;
    const double kappa = sym.value(&one);
    if (!(kappa > 0.0)) throw DomainError("the symbol must be positive on the sector");
    const double m = sym.m();
    const double tau_min = kappa * std::pow(Sector::r_inner, m), tau_max = kappa * std::pow(Sector::r_outer, m);

    const double W = layout_window.second - layout_window.first;
    period_ = period_factor * W;
    dtau_ = 2.0 * std::numbers::pi / period_;
    // Demodulated about the centre of the tau range, the fastest phase moves < pi/4 per step.
    const double dt_max = (std::numbers::pi / 4.0) / (0.5 * (tau_max - tau_min));
    S_ = next_pow2(period_ / dt_max);
    dt_ = period_ / static_cast<double>(S_);
    t0_ = layout_window.first;

    const std::size_t A = static_cast<std::size_t>(std::floor((tau_max - tau_min) / dtau_)) + 1;
    if (A > S_) throw std::logic_error("sampler layout has more nodes than FFT bins");
    for (std::size_t a = 0; a < A; ++a) {
        const double tau = tau_min + static_cast<double>(a) * dtau_;
        const double xi = std::pow(tau / kappa, 1.0 / m);
        const double weight = bump(&xi, 1) * std::pow(1.0 + xi * xi, 0.5 * alpha);
        if (weight == 0.0) continue;
        const double J = xi / (m * tau);
        xi_.push_back(xi);
        M_.push_back(weight * std::sqrt(J * dtau_ / (2.0 * std::numbers::pi)));
        slot_.push_back(a);
        carrier_.push_back(std::polar(1.0, t0_ * static_cast<double>(a) * dtau_));
    }
    if (xi_.empty()) throw DomainError("no sampling nodes inside the sector bump");

    const long half = static_cast<long>(std::ceil(R / dx - 1e-12));
    const double h = R / static_cast<double>(half);
    for (long j = -half; j <= half; ++j) {
        xs_.push_back(static_cast<double>(j) * h);
        wx_.push_back((j == -half || j == half) ? 0.5 * h : h);
    }
    for (double xi : xi_) {
        step_.push_back(std::polar(1.0, h * xi));
        start_.push_back(std::polar(1.0, -R * xi));
    }
    set_window(layout_window);
}

void ExtensionSampler::set_window(std::pair<double, double> w) {
    const double tol = 1e-9 * std::max(1.0, std::abs(layout_.second));
    if (w.first < layout_.first - tol || w.second > layout_.second + tol || !(w.second >= w.first))
        throw std::invalid_argument("evaluation window must lie inside the layout window");
    window_ = w;
    const double a = (w.first - t0_) / dt_, b = (w.second - t0_) / dt_;
    s0_ = static_cast<std::size_t>(std::ceil(a - 1e-9));
    const std::size_t s1 = std::min<std::size_t>(S_ - 1, static_cast<std::size_t>(std::floor(b + 1e-9)));
    if (s1 < s0_) throw std::invalid_argument("evaluation window contains no time samples");
    window_count_ = s1 - s0_ + 1;
    wt_ = trapezoid_weights(window_count_, dt_);
}

void ExtensionSampler::sweep(const cvec* y, const Visitor& visit) const {
    const std::size_t A = M_.size();
    cvec e(start_);
    cvec base;
    if (y) {
        if (y->size() != A) throw std::invalid_argument("sampler input has the wrong length");
        base.resize(A);
        for (std::size_t a = 0; a < A; ++a) base[a] = M_[a] * carrier_[a] * (*y)[a];
    }
    cvec u;
    for (std::size_t j = 0; j < xs_.size(); ++j) {
        if (j > 0)
            for (std::size_t a = 0; a < A; ++a) e[a] *= step_[a];
        if (y) {
            u.assign(S_, 0.0);
            for (std::size_t a = 0; a < A; ++a) u[slot_[a]] = base[a] * e[a];
            fft_inplace(u.data(), {static_cast<int>(S_)}, +1);
        }
        visit(j, u, e);
    }
}

void ExtensionSampler::pull_back(const cvec& e, cvec& g, cvec& grad) const {
    fft_inplace(g.data(), {static_cast<int>(S_)}, -1);
    for (std::size_t a = 0; a < M_.size(); ++a) grad[a] += M_[a] * std::conj(carrier_[a] * e[a]) * g[slot_[a]];
}

void ExtensionSampler::apply(const cvec& y, cvec& out) const {
    out.assign(output_size(), 0.0);
    sweep(&y, [&](std::size_t j, cvec& u, const cvec&) {
        for (std::size_t k = 0; k < window_count_; ++k) out[j * window_count_ + k] = std::sqrt(wx_[j] * wt_[k]) * u[s0_ + k];
    });
}

void ExtensionSampler::adjoint(const cvec& out, cvec& y) const {
    if (out.size() != output_size()) throw std::invalid_argument("sampler output has the wrong length");
    y.assign(M_.size(), 0.0);
    cvec g;
    sweep(nullptr, [&](std::size_t j, cvec&, const cvec& e) {
        g.assign(S_, 0.0);
        for (std::size_t k = 0; k < window_count_; ++k) g[s0_ + k] = std::sqrt(wx_[j] * wt_[k]) * out[j * window_count_ + k];
        pull_back(e, g, y);
    });
}

void ExtensionSampler::normal(const cvec& y, cvec& out) const {
    out.assign(M_.size(), 0.0);
    cvec g;
    sweep(&y, [&](std::size_t j, cvec& u, const cvec& e) {
        g.assign(S_, 0.0);
        for (std::size_t k = 0; k < window_count_; ++k) g[s0_ + k] = wx_[j] * wt_[k] * u[s0_ + k];
        pull_back(e, g, out);
    });
}

double ExtensionSampler::mixed(const cvec& y, double q, double r, NormOrder order, cvec* grad) const {
    if (!(q >= 1.0) || !(r >= 1.0)) throw DomainError("mixed norm exponents must be >= 1");
    const std::size_t K = window_count_, X = xs_.size();
    const bool qinf = std::isinf(q), rinf = std::isinf(r);
    if (grad) grad->assign(M_.size(), 0.0);
    rvec mag(K);
    cvec g;

    if (order == NormOrder::xt) {
        // n_x = ||u(., x)||_{L^r_t}; N = ||n||_{L^q_x}
        rvec nx(X, 0.0);
        std::vector<std::size_t> arg_t(X, 0);
        double acc = 0.0;
        auto time_norm = [&](const cvec& u, std::size_t j) {
            if (rinf) {
                for (std::size_t k = 0; k < K; ++k) mag[k] = std::norm(u[s0_ + k]);
                arg_t[j] = static_cast<std::size_t>(std::max_element(mag.begin(), mag.end()) - mag.begin());
                nx[j] = std::sqrt(mag[arg_t[j]]);
                return;
            }
            double sum = 0.0;
            for (std::size_t k = 0; k < K; ++k) sum += wt_[k] * abs_pow(u[s0_ + k], r);
            nx[j] = std::pow(sum, 1.0 / r);
        };
        if (!qinf) {
            sweep(&y, [&](std::size_t j, cvec& u, const cvec& e) {
                time_norm(u, j);
                acc += wx_[j] * std::pow(nx[j], q);
                if (!grad || nx[j] == 0.0) return;
                g.assign(S_, 0.0);
                if (rinf) {
                    g[s0_ + arg_t[j]] = wx_[j] * pow_phase(u[s0_ + arg_t[j]], q);
                } else {
                    const double c = wx_[j] * std::pow(nx[j], q - r);
                    for (std::size_t k = 0; k < K; ++k) g[s0_ + k] = c * wt_[k] * pow_phase(u[s0_ + k], r);
                }
                pull_back(e, g, *grad);
            });
            const double N = std::pow(acc, 1.0 / q);
            if (grad && N > 0.0)
                for (auto& v : *grad) v *= std::pow(N, 1.0 - q);
            return N;
        }
        sweep(&y, [&](std::size_t j, cvec& u, const cvec&) { time_norm(u, j); });
        const std::size_t jstar = static_cast<std::size_t>(std::max_element(nx.begin(), nx.end()) - nx.begin());
        const double N = nx[jstar];
        if (grad && N > 0.0)
            sweep(&y, [&](std::size_t j, cvec& u, const cvec& e) {
                if (j != jstar) return;
                g.assign(S_, 0.0);
                if (rinf) {
                    g[s0_ + arg_t[j]] = pow_phase(u[s0_ + arg_t[j]], 1.0);
                } else {
                    const double c = std::pow(N, 1.0 - r);
                    for (std::size_t k = 0; k < K; ++k) g[s0_ + k] = c * wt_[k] * pow_phase(u[s0_ + k], r);
                }
                pull_back(e, g, *grad);
            });
        return N;
    }

    // tx: n_t = ||u(t, .)||_{L^q_x}; N = ||n||_{L^r_t}
    rvec acc(K, 0.0);
    std::vector<std::size_t> arg_x(K, 0);
    sweep(&y, [&](std::size_t j, cvec& u, const cvec&) {
        for (std::size_t k = 0; k < K; ++k) {
            if (qinf) {
                const double a = std::norm(u[s0_ + k]);
                if (a > acc[k]) {
                    acc[k] = a;
                    arg_x[k] = j;
                }
            } else {
                acc[k] += wx_[j] * abs_pow(u[s0_ + k], q);
            }
        }
    });
    rvec nt(K);
    for (std::size_t k = 0; k < K; ++k) nt[k] = qinf ? std::sqrt(acc[k]) : std::pow(acc[k], 1.0 / q);
    const double N = weighted_lp(nt.data(), wt_.data(), K, r);
    if (!grad || N == 0.0) return N;
    const std::size_t kstar = static_cast<std::size_t>(std::max_element(nt.begin(), nt.end()) - nt.begin());
    sweep(&y, [&](std::size_t j, cvec& u, const cvec& e) {
        g.assign(S_, 0.0);
        bool any = false;
        for (std::size_t k = 0; k < K; ++k) {
            if (nt[k] == 0.0) continue;
            if (rinf && k != kstar) continue;
            if (qinf && arg_x[k] != j) continue;
            const double tw = rinf ? 1.0 : wt_[k] * std::pow(nt[k], r - (qinf ? 1.0 : q));
            const double p = qinf ? 1.0 : q;
            g[s0_ + k] = tw * (qinf ? 1.0 : wx_[j]) * pow_phase(u[s0_ + k], p);
            any = true;
        }
        if (any) pull_back(e, g, *grad);
    });
    const double scale = rinf ? (qinf ? 1.0 : std::pow(N, 1.0 - q)) : std::pow(N, 1.0 - r);
    for (auto& v : *grad) v *= scale;
    return N;
}

rvec ExtensionSampler::time_density(const cvec& y, double p) const {
    rvec d(window_count_, 0.0);
    sweep(&y, [&](std::size_t j, cvec& u, const cvec&) {
        for (std::size_t k = 0; k < window_count_; ++k) d[k] += wx_[j] * abs_pow(u[s0_ + k], p);
    });
    return d;
}

cvec ExtensionSampler::from_spectrum(const std::function<cplx(double)>& fhat) const {
    cvec y(M_.size());
    const double one = 1.0;
    const double kappa = sym_.value(&one), m = sym_.m();
    for (std::size_t a = 0; a < M_.size(); ++a) {
        const double xi = xi_[a];
        const double tau = kappa * std::pow(xi, m);
        const double J = xi / (m * tau);
        y[a] = fhat(xi) * std::sqrt(J * dtau_ / (2.0 * std::numbers::pi));
    }
    return y;
}

}  // namespace kato
