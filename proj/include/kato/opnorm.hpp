#pragma once

#include "kato/linear_operator.hpp"
#include "kato/norms.hpp"
#include "kato/sampler.hpp"
#include "kato/sector.hpp"
#include "kato/symbols.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace kato {

struct WindowSpec {
    bool global = false;
    double T = 0.0;  // global window [-T, T]; 0 means 8 R^m
};
WindowSpec parse_window(const std::string& text);  // "local" | "global" | "global:T"

struct SmoothingOperatorSpec {
    SymbolSpec sym = SymbolSpec::power(2.0, 1);
    double alpha = 0.5;
    double q = 2.0, r = 2.0;
    NormOrder order = NormOrder::xt;
    double R = 8.0;
    WindowSpec window;
    SectorBump bump;
    double dx = 1.0;
};

std::pair<double, double> time_window(const SmoothingOperatorSpec& spec);
// Period / window length used for the sampling layout.
double period_factor(const SmoothingOperatorSpec& spec);
std::unique_ptr<ExtensionSampler> make_sampler(const SmoothingOperatorSpec& spec, double period_scale = 1.0);

struct PowerOptions {
    std::size_t restarts = 3;
    double tol = 1e-4;
    std::size_t max_iterations = 200;
    std::uint64_t seed = 1;
    const cvec* warm = nullptr;  // replaces the first random start
};

struct PowerResult {
    double norm = 0.0;
    std::size_t iterations = 0;  // summed over restarts
    std::size_t restarts = 0;
    bool converged = false;      // every restart met the tolerance
    double gap = 0.0;            // relative change of the last two Rayleigh quotients (worst restart)
    cvec vector;                 // unit maximiser
};

// Power iteration on A*A; the largest of the restarts.
PowerResult power_iteration(const LinearOperator& A, const PowerOptions& opt = {});

// Largest singular value of the explicit matrix (columns A e_i).
double dense_operator_norm(const LinearOperator& A);

PowerResult operator_norm_l2(const SmoothingOperatorSpec& spec, const PowerOptions& opt = {});

// The same R, local and global windows on one sampling layout; the global
// iteration starts from the local maximiser.
struct WindowComparison {
    PowerResult local, global;
};
WindowComparison compare_windows(const SmoothingOperatorSpec& spec, const PowerOptions& opt = {});

// f -> sqrt(weights) <D>^alpha phi(D) U f on ball cells x times of a periodic grid (any n).
class TorusSmoothingOperator : public LinearOperator {
public:
    TorusSmoothingOperator(const Grid& grid, const SymbolSpec& sym, double alpha, const SectorBump& bump, double R, const rvec& times);
    std::size_t input_size() const override { return nodes_.size(); }
    std::size_t output_size() const override { return cells_.size() * times_.size(); }
    void apply(const cvec& y, cvec& out) const override;
    void adjoint(const cvec& out, cvec& y) const override;

private:
    Grid grid_;
    rvec times_, wt_;
    std::vector<std::size_t> nodes_, cells_;
    rvec mult_, phi_;
};

struct Candidate {
    std::string name;
    double value = 0.0;
};

struct LowerBoundOptions {
    std::size_t ascent_steps = 50;
    std::size_t restarts = 5;
    double min_step = 1e-4;  // an ascent stops once halving drives the step below this
    bool ascent = true;
};

struct LowerBound {
    double value = 0.0;
    std::string best;                // candidate that seeded the winning ascent
    double best_candidate = 0.0;     // structured value before ascent
    std::vector<Candidate> candidates;
    std::size_t evaluations = 0;
    bool stagnated = false;          // an ascent ran out of step size
    double plate_heuristic = 0.0;    // max_t ||u_knapp(t)||_{L^q(B_R)}
    cvec maximizer;                  // unit input achieving value
};

LowerBound lower_bound_mixed(const ExtensionSampler& A, double q, double r, NormOrder order, const LowerBoundOptions& opt = {});
LowerBound lower_bound_mixed(const SmoothingOperatorSpec& spec, const LowerBoundOptions& opt = {});

// Share of sum_x w_x |u|^r carried by |t| >= 0.9 T on a global window (0 on a local one).
double tail_fraction(const ExtensionSampler& A, const cvec& y, double r);

}  // namespace kato
