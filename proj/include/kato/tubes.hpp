#pragma once

#include "kato/symbols.hpp"

#include <cstddef>
#include <vector>

namespace kato {

// T_(l,v): the R-neighbourhood of the line t -> l - t grad Phi(v).
struct Tube {
    std::vector<double> l, v, grad;
    double R = 1.0;

    static Tube make(std::vector<double> l, std::vector<double> v, double R, const SymbolSpec& sym);
    int n() const { return static_cast<int>(l.size()); }
    std::vector<double> core(double t) const;
    bool contains(double t, const double* x) const;
};

// [t0, t1] x (box [c - h, c + h]^n, or ball B(c, h)).
struct SpacetimeCube {
    double t0 = 0.0, t1 = 1.0;
    std::vector<double> center;
    double half_width = 1.0;
    bool ball = false;

    SpacetimeCube dilated(double factor) const;  // about the cube's own centre
};

// Minimum over t in [t0, t1] of the distance from the core point to the spatial set.
double core_distance(const Tube& tube, const SpacetimeCube& cube);

// Exact test: the tube meets the dilated cube.
bool tube_meets_cube(const Tube& tube, const SpacetimeCube& cube, double dilation = 1.0);

// Dense point-sampling reference at the given spacing (n = 1 and 2 only).
bool tube_meets_cube_sampled(const Tube& tube, const SpacetimeCube& cube, double dilation, double spacing);

// Cubes Delta_j = [t_j - H/2, t_j + H/2] x B(0, H), t_j = H^2/2 + j H, covering I_{H^2}.
std::vector<SpacetimeCube> overlap_chain(double H);

std::size_t overlap_count(const Tube& tube, const std::vector<SpacetimeCube>& chain, double dilation = 1.0);

struct OverlapSummary {
    double H = 0.0;
    double dilation = 1.0;
    std::size_t tubes = 0;          // tubes that meet at least one cube
    std::size_t max_count = 0;
    double v_at_max = 0.0;
    double min_slope = 0.0;         // min |grad Phi(v)| over the lattice nodes in the sector
    std::size_t geometric_bound = 0;  // ceil(4 / min_slope) + 1 at dilation 1
};

// Every scale-H packet (n = 1): v in H^{-1} Z inside the sector, l in H Z that can reach the chain.
OverlapSummary max_overlap(const SymbolSpec& sym, double H, double dilation = 1.0);

}  // namespace kato
