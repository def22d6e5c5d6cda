#pragma once

#include "kato/grid.hpp"
#include "kato/sector.hpp"
#include "kato/symbols.hpp"

#include <stdexcept>
#include <utility>
#include <string>

namespace kato {

class ConfigurationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// One-dimensional lattice partition with at most two overlapping members.
// |p_j|^2 = b(s - j) / sum_i b(s - i) for a mollifier b of the given radius
// (1/2 < radius < 1), and the phases are arranged so that sum_j p_j = 1 as
// well as sum_j |p_j|^2 = 1.  Argument s is in lattice units.
cplx partition_profile(double s, long j, double radius);

// Tensor-product partitions on the spatial lattice R Z^n (periodic on the
// grid) and on the frequency lattice R^{-1} Z^n.
class PartitionPair {
public:
    static constexpr double spatial_radius = 0.85;     // lattice units, per axis
    static constexpr double frequency_radius = 2.0 / 3.0;

    static PartitionPair build(double R, const Grid& grid);

    double R() const { return R_; }
    const Grid& grid() const { return grid_; }
    long spatial_count() const { return M_; }  // lattice points per axis
    long v_min() const { return vmin_; }
    long v_max() const { return vmax_; }

    double l_coord(long j) const;             // lattice index -> coordinate in [-L/2, L/2)
    double v_coord(long k) const { return static_cast<double>(k) / R_; }

    // phi_l on the grid for the lattice multi-index lj.
    cvec phi(const std::vector<long>& lj) const;
    // Frequency nodes (flat indices) and values of psi_v.
    std::vector<std::pair<std::size_t, cplx>> psi(const std::vector<long>& vk) const;

    struct SumCheck {
        double sq_error = 0.0;    // max |sum |p|^2 - 1|
        double lin_error = 0.0;   // max |sum p - 1|
    };
    SumCheck spatial_sums() const;
    SumCheck frequency_sums() const;

private:
    double R_ = 1.0;
    Grid grid_;
    long M_ = 0;
    long vmin_ = 0, vmax_ = 0;
    std::vector<cvec> phi1_;  // [lattice j][axis sample i]
    std::vector<std::vector<std::pair<std::size_t, cplx>>> psi1_;  // [k - vmin] -> (axis node, value)
};

struct WavePacket {
    std::vector<long> l_index, v_index;
    std::vector<double> l, v;
    double energy = 0.0;
    Field field;
};

struct Decomposition {
    double R = 1.0;
    std::vector<WavePacket> packets;
    std::size_t dropped = 0;
    double dropped_energy = 0.0;
    double input_energy = 0.0;
};

// A packet may be dropped when its energy is below threshold * |f|^2; the
// weakest go first and the dropped total never exceeds budget * |f|^2.
constexpr double packet_drop_threshold = 1e-14;
constexpr double packet_drop_budget = 1e-24;

Decomposition decompose(const Field& f, double R);

struct DecompositionAudit {
    double reconstruction_error = 0.0;  // |f - sum|/|f|
    double energy_error = 0.0;          // |sum energies - |f|^2| / |f|^2
    double max_frequency_spill = 0.0;   // worst packet fraction outside B(v, 1/R)
    double max_spatial_spill = 0.0;     // worst packet fraction outside B(l, C R)
    double spatial_constant = 3.0;      // the C used above
};

DecompositionAudit audit_decomposition(const Field& f, const Decomposition& d, double spatial_constant = 3.0);

// |sum f_p| / (sum |f_p|^2)^{1/2} over the selected packets.
double almost_orthogonality(const Decomposition& d, const std::vector<std::size_t>& selection);

// Fraction of each packet's |U f_p(t)|^2 within distance `radius_factor * R`
// of l - t grad Phi(v); the minimum over packets with v in the sector and the given times.
struct TransportResult {
    double min_fraction = 1.0;
    std::size_t packets_checked = 0;
    double worst_time = 0.0;
};
TransportResult packet_transport(const Decomposition& d, const SymbolSpec& sym, const rvec& times,
                                 double radius_factor = 4.0, const SectorBump& bump = {});

// Spatial kernel of psi: mass outside B(0, 2R/3) and the radius holding 99.99%.
struct PsiSpill {
    double outside_fraction = 0.0;
    double radius_9999 = 0.0;  // in units of R
};
PsiSpill psi_spillover(double R, const Grid& grid);

// K_v(t, x) = int e^{i(x.xi + t Phi(xi))} chi_v(xi) phi(xi) dxi with chi_v = 1 on
// B(v, 2/(3R)) and a smooth fall to 0 at 1.1 times that radius.
struct KernelValue {
    cplx value;
    bool outside_regime = false;  // |t| > 2 R^m: the decay bound is not claimed
};
KernelValue packet_kernel(const std::vector<double>& v, double R, const SymbolSpec& sym, double t,
                          const std::vector<double>& x, const SectorBump& bump = {});
// int |chi_v phi| d xi
double packet_kernel_mass(const std::vector<double>& v, double R, const SymbolSpec& sym, const SectorBump& bump = {});
double kernel_chi_radius(double R);

// max over the times and both sides of |K_v(t, core(t) + d e1)| for d = factor * R,
// core(t) = -t grad Phi(v), and the log-log slope against d.
struct KernelDecay {
    double R = 0.0;
    std::vector<std::pair<double, double>> samples;  // (d, max |K_v|)
    double core_value = 0.0;                         // max |K_v| on the core
    double slope = 0.0;
};
KernelDecay kernel_decay(const std::vector<double>& v, double R, const SymbolSpec& sym, const rvec& times,
                         const rvec& factors = {1.0, 2.0, 4.0, 8.0}, const SectorBump& bump = {});

}  // namespace kato
