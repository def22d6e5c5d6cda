#pragma once

#include "kato/grid.hpp"
#include "kato/symbols.hpp"

#include <cstdint>
#include <vector>

namespace kato {

// S = {(Phi(xi), xi) : xi in the sector}, d sigma = sqrt(1 + |grad Phi|^2) d xi.
// n = 1 or 2 for quadrature (the sector is [1/2, 2], or a polar wedge).
struct SurfacePatch {
    SymbolSpec sym;
    static SurfacePatch make(const SymbolSpec& sym);
    int n() const { return sym.n(); }
    double weight(const double* xi) const;
};

struct SurfaceNode {
    std::vector<double> xi;
    double w = 0.0;  // quadrature weight times the surface weight
};

// Gauss-Legendre nodes over the sector; `oscillation` is the largest phase
// rate (radians per unit xi) the rule must resolve.
std::vector<SurfaceNode> surface_nodes(const SurfacePatch& patch, double oscillation, std::size_t min_panels = 8);

// d sigma^(zeta) = int_S e^{-i (zeta_0 tau + zeta' . xi)} d sigma, zeta = (zeta_0, zeta').
cplx surface_fourier(const SurfacePatch& patch, const std::vector<double>& zeta, std::size_t min_panels = 8);
double surface_measure(const SurfacePatch& patch, std::size_t min_panels = 8);

// Unit normal (1, -grad Phi(xi*)) / |.|; the stationary direction for xi*.
std::vector<double> surface_normal(const SurfacePatch& patch, const std::vector<double>& xi_star);

// Restriction of spacetime data to S on the grid's frequency nodes inside the sector:
// Rf_k = sum_s w_s e^{-i t_s Phi(xi_k)} dft(f(t_s))(xi_k), with trapezoid weights w_s.
struct Restriction {
    Grid grid;
    std::vector<std::size_t> nodes;  // flat frequency indices inside the sector
    cvec values;
    rvec weights;  // pairing weights (2 pi / L)^n sqrt(1 + |grad Phi|^2)
    double leakage = 0.0;  // mass fraction of f in the outer 5% boundary layer of the box
    bool leaking = false;
};
constexpr double restriction_leak_warning = 1e-10;

Restriction restriction(const SpacetimeField& f, const SurfacePatch& patch);

// Extension R* g(t, x) = sum_k w_k e^{i (t Phi(xi_k) + x . xi_k)} g_k, the discrete adjoint of restriction.
SpacetimeField extension(const Restriction& layout, const cvec& g, const SymbolSpec& sym, const rvec& times);

// <Rf, g>_{d sigma} and <f, R* g> with the matching discrete weights.
cplx surface_pairing(const Restriction& r, const cvec& g);
cplx spacetime_pairing(const SpacetimeField& f, const SpacetimeField& h);

// Sparse decoupling check in n = 1 (spacetime R^2).
// phi = |beta^vee|^2 with beta a radial mollifier of radius 3/4, so supp phi^ is in B(0, 3/2).
double decoupling_phi(double r);

struct DecouplingBall {
    std::vector<double> center;  // z_i in R^2
    std::uint64_t seed = 0;      // random smooth F_i supported in B(z_i, H)
};

struct DecouplingResult {
    double lhs = 0.0;            // || sum_i (F_i phi_i)^ |_S ||_{L^p(d sigma)}
    double rhs = 0.0;            // H^{1/p} (sum_i ||F_i^||_p^p)^{1/p}
    double ratio = 0.0;
    std::vector<double> single;  // the same ratio for each ball alone
    double max_single = 0.0;
};

DecouplingResult decoupling_check(const SurfacePatch& patch, const std::vector<DecouplingBall>& balls, double H, double p,
                                  unsigned gamma = 2);

// N random integer centres, pairwise (N H)^gamma separated.
std::vector<DecouplingBall> random_sparse_balls(std::size_t N, double H, unsigned gamma, std::uint64_t seed);

}  // namespace kato
