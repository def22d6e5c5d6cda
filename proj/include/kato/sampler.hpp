#pragma once

#include "kato/linear_operator.hpp"
#include "kato/norms.hpp"
#include "kato/sector.hpp"
#include "kato/symbols.hpp"

#include <functional>
#include <utility>

namespace kato {

// The localized smoothing operator in n = 1, f -> <D>^alpha phi(D) U f on
// B_R x window, sampled through tau = Phi(xi).
//
// The unknowns y_a sit on uniform nodes tau_a = tau_min + a dtau and satisfy
// ||f||_2^2 = sum |y_a|^2 for fhat(xi_a) = (2 pi)^{1/2} y_a / sqrt(J_a dtau),
// J = d xi / d tau.  At each spatial node, u(t_s, x) for all times on the
// period P = 2 pi / dtau comes from one FFT of length S (the common carrier
// e^{i t tau_min} is dropped; every norm only sees |u|).
class ExtensionSampler : public LinearOperator {
public:
    // layout_window: the time range the sampling period must cover without aliasing;
    // period_factor: P / (window length).
    ExtensionSampler(const SymbolSpec& sym, double alpha, const SectorBump& bump, double R, std::pair<double, double> layout_window,
                     double period_factor, double dx = 1.0);

    // Evaluation window, inside the layout window.  Defaults to the layout window.
    void set_window(std::pair<double, double> w);
    std::pair<double, double> window() const { return window_; }

    std::size_t input_size() const override { return M_.size(); }
    std::size_t output_size() const override { return xs_.size() * window_count_; }
    void apply(const cvec& y, cvec& out) const override;
    void adjoint(const cvec& out, cvec& y) const override;
    void normal(const cvec& y, cvec& out) const override;

    // L^q_x(B_R) L^r_t(window) (order xt) or L^r_t L^q_x (order tx) of u;
    // optionally its gradient, normalised so that dN = Re <grad, dy>.
    double mixed(const cvec& y, double q, double r, NormOrder order, cvec* grad = nullptr) const;

    // Per-window-sample sum_x w_x |u(t, x)|^p.
    rvec time_density(const cvec& y, double p) const;

    // y for a given spectrum fhat(xi) (zero outside the retained nodes).
    cvec from_spectrum(const std::function<cplx(double)>& fhat) const;

    const rvec& xi_nodes() const { return xi_; }
    const rvec& x_nodes() const { return xs_; }
    const SymbolSpec& symbol() const { return sym_; }
    double R() const { return R_; }
    double dt() const { return dt_; }
    double dtau() const { return dtau_; }
    double period() const { return period_; }
    std::size_t fft_length() const { return S_; }
    std::size_t window_samples() const { return window_count_; }
    double window_time(std::size_t k) const { return t0_ + static_cast<double>(s0_ + k) * dt_; }

private:
    SymbolSpec sym_;
    double R_;
    double t0_ = 0.0;            // time of sample s = 0
    double period_ = 0.0, dtau_ = 0.0, dt_ = 0.0;
    std::size_t S_ = 0;
    std::pair<double, double> layout_, window_;
    std::size_t s0_ = 0, window_count_ = 0;
    rvec wt_;                    // trapezoid weights over the window samples

    rvec xi_, M_;
    std::vector<std::size_t> slot_;  // FFT bin of each retained node
    cvec carrier_;               // e^{i t0 (tau_a - tau_min)}
    cvec step_, start_;          // e^{i dx xi_a}, e^{-i R xi_a}
    rvec xs_, wx_;

    using Visitor = std::function<void(std::size_t, cvec&, const cvec&)>;
    // Calls visit(j, u, e) with u the length-S time series at x_j and e_a = e^{i x_j xi_a}.
    void sweep(const cvec* y, const Visitor& visit) const;
    // grad += the adjoint image of a weighted time series g at the node with phases e.
    void pull_back(const cvec& e, cvec& g, cvec& grad) const;
};

}  // namespace kato
