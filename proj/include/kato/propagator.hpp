#pragma once

#include "kato/grid.hpp"
#include "kato/sector.hpp"
#include "kato/symbols.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>

namespace kato {

class RangeError : public std::range_error {
public:
    using std::range_error::range_error;
};

// Holds fhat and Phi on the frequency nodes so slices can be produced one at a time.
class Evolution {
public:
    Evolution(const Field& f, const SymbolSpec& sym);
    Evolution(const Grid& g, cvec fhat, const SymbolSpec& sym);

    const Grid& grid() const { return grid_; }
    const cvec& spectrum() const { return fhat_; }
    const rvec& symbol_values() const { return phi_; }
    void slice(double t, cplx* out) const;

private:
    Grid grid_;
    cvec fhat_;
    rvec phi_;
};

// u(t) = idft(e^{i t Phi} dft(f)) for each requested time.
SpacetimeField propagate(const Field& f, const SymbolSpec& sym, const rvec& times);

// propagate applied to idft(phi * dft(f)).
SpacetimeField apply_U(const Field& f, const SymbolSpec& sym, const SectorBump& bump, const rvec& times);
Field sector_filter(const Field& f, const SectorBump& bump);

// Multiplier (1 + |xi|^2)^{alpha/2}.
Field bessel(const Field& f, double alpha);

// Dyadic shell projection with psi_0 = beta(|xi|), psi_k = beta(|xi|/2^k) - beta(|xi|/2^{k-1}),
// beta = 1 on [0,1], 0 beyond 2.
Field lp_project(const Field& f, int k);
int lp_top_shell(const Grid& g);

struct RescaleResult {
    double mismatch = 0.0;       // sup |Uf - rescaled side|
    double relative = 0.0;       // mismatch / sup |Uf|
    double time_scale = 1.0;     // 2^{-mk}
    double space_scale = 1.0;    // 2^{-k}
};

// Compares Uf(t, x) with T_k[(f * phi_check)(2^k .)](2^{-mk} t, 2^{-k} x) on the
// grid points of f at the given times.
RescaleResult rescale_check(const Field& f, const SymbolSpec& sym, int k, const rvec& times,
                            const SectorBump& bump = {});

// Time step so the fastest phase advances less than pi/4 per step.
double time_step_rule(double max_phase_rate);

struct TimeSampling {
    rvec times;
    bool capped = false;
    double dt = 0.0;
};

// Uniform sampling of [a, b] obeying the step rule, at most max_samples points.
TimeSampling sample_window(double a, double b, double max_phase_rate, std::size_t max_samples = 1u << 16);

// U f for f(x) = e^{-x^2 / (2 w^2)}, n = 1, Phi = xi^2, in closed form.
cplx gaussian_solution(double x, double t, double w);

// (2 pi)^{-1} int_a^b e^{i(x xi + t Phi(xi))} fhat(xi) d xi for n = 1 by composite
// Gauss-Legendre, doubling the panel count until the sum settles.
cplx oscillatory_quadrature(const std::function<cplx(double)>& fhat, const SymbolSpec& sym, double x, double t, double a,
                            double b);

// The local window I_{R^m} = [R^m / 2, 2 R^m].
inline std::pair<double, double> local_window(double R, double m) {
    const double Rm = std::pow(R, m);
    return {0.5 * Rm, 2.0 * Rm};
}

}  // namespace kato
