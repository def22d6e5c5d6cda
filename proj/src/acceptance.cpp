#include "kato/acceptance.hpp"

#include "kato/exponents.hpp"
#include "kato/opnorm.hpp"
#include "kato/propagator.hpp"
#include "kato/recipes.hpp"
#include "kato/sparse.hpp"
#include "kato/surface.hpp"
#include "kato/tubes.hpp"
#include "kato/wavepackets.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace kato {

namespace {

// Thresholds.
constexpr double energy_tol = 1e-12;
constexpr double gaussian_tol = 1e-6;
constexpr double packet_tol = 1e-10;
constexpr double orthogonality_ceiling = 4.0;
constexpr double kernel_slope_max = -3.0;
constexpr double slope_tol = 0.1;
constexpr double dense_rel_tol = 0.01;
constexpr double residual_slope_min = 0.2;
constexpr double overlap_spread_max = 2.0;
constexpr double surface_slope_target = -0.5;
constexpr double decoupling_factor = 2.0;

const SymbolSpec schrodinger = SymbolSpec::power(2.0, 1);

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

Criterion make(bool pass, double value, const std::string& relation, double threshold, std::string detail) {
    Criterion c;
    c.pass = pass;
    c.value = value;
    c.relation = relation;
    c.threshold = threshold;
    c.detail = std::move(detail);
    return c;
}

double buffer_norm(const cplx* u, std::size_t size, double cell) {
    double s = 0.0;
    for (std::size_t i = 0; i < size; ++i) s += std::norm(u[i]);
    return std::sqrt(s * cell);
}

Criterion c1_energy() {
    const Grid g = Grid::make(1, 1024, 256.0);
    const rvec times = uniform_times(32.0, 128.0, 64);
    double worst = 0.0;
    cvec u(g.size());
    for (std::uint64_t s = 1; s <= 100; ++s) {
        RandomBandlimitedRecipe r;
        r.region = {BandRegion::Kind::ball, 2.0};
        r.seed = s;
        const Field f = make_field(g, r);
        const double nf = l2_norm(f);
        const Evolution ev(f, schrodinger);
        for (double t : times) {
            ev.slice(t, u.data());
            worst = std::max(worst, std::abs(buffer_norm(u.data(), u.size(), g.cell_volume()) - nf) / nf);
        }
    }
    return make(worst <= energy_tol, worst, "<=", energy_tol,
                "max relative deviation of |u(t)| from |f| over 100 fields x 65 times: " + fmt(worst));
}

Criterion c2_gaussian() {
    const Grid g = Grid::make(1, 1024, 64.0);
    const double t = 0.5;
    const Field f = make_field(g, GaussianRecipe{{}, 1.0});
    const SpacetimeField u = propagate(f, schrodinger, {t});
    auto fhat = [](double xi) { return cplx(std::sqrt(2.0 * std::numbers::pi) * std::exp(-0.5 * xi * xi)); };
    double oracle_err = 0.0, closed_err = 0.0;
    for (std::size_t j = 0; j < g.N; ++j) {
        const double x = g.x(j);
        closed_err = std::max(closed_err, std::abs(u.data[j] - gaussian_solution(x, t, 1.0)));
        if (j % 4 == 0) oracle_err = std::max(oracle_err, std::abs(u.data[j] - oscillatory_quadrature(fhat, schrodinger, x, t, -40.0, 40.0)));
    }
    return make(oracle_err <= gaussian_tol, oracle_err, "<=", gaussian_tol,
                "max |u - quadrature oracle| " + fmt(oracle_err) + " (closed form " + fmt(closed_err) + ")");
}

Criterion c3_packets() {
    const Grid g = Grid::make(1, 1024, 256.0);
    double rec = 0.0, energy = 0.0;
    for (double R : {4.0, 8.0}) {
        for (std::uint64_t s = 1; s <= 20; ++s) {
            RandomBandlimitedRecipe r;
            r.seed = s;
            const Field f = make_field(g, r);
            const Decomposition d = decompose(f, R);
            const DecompositionAudit a = audit_decomposition(f, d);
            rec = std::max(rec, a.reconstruction_error);
            energy = std::max(energy, a.energy_error);
        }
    }
    const double worst = std::max(rec, energy);
    return make(worst <= packet_tol, worst, "<=", packet_tol,
                "max reconstruction error " + fmt(rec) + ", max energy error " + fmt(energy) + " (R = 4, 8; 20 fields)");
}

Criterion c4_orthogonality() {
    const Grid g = Grid::make(1, 1024, 256.0);
    RandomBandlimitedRecipe r;
    r.seed = 1;
    const Field f = make_field(g, r);
    const Decomposition d = decompose(f, 8.0);
    std::mt19937_64 rng(4);
    std::bernoulli_distribution coin(0.5);
    double worst = 0.0;
    for (int s = 0; s < 100; ++s) {
        std::vector<std::size_t> sel;
        for (std::size_t p = 0; p < d.packets.size(); ++p)
            if (coin(rng)) sel.push_back(p);
        if (!sel.empty()) worst = std::max(worst, almost_orthogonality(d, sel));
    }
    return make(worst <= orthogonality_ceiling, worst, "<=", orthogonality_ceiling,
                "calibrated constant " + fmt(worst) + " over 100 subcollections of " + std::to_string(d.packets.size()) + " packets");
}

Criterion c5_kernel() {
    double worst = -infinity;
    std::string detail;
    for (double R : {16.0, 32.0}) {
        const double Rm = R * R;
        const KernelDecay k = kernel_decay({1.0}, R, schrodinger, {0.5 * Rm, Rm, 2.0 * Rm});
        worst = std::max(worst, k.slope);
        detail += (detail.empty() ? "" : ", ") + std::string("slope at R = ") + fmt(R) + ": " + fmt(k.slope);
    }
    return make(worst <= kernel_slope_max, worst, "<=", kernel_slope_max, detail);
}

ExperimentConfig opnorm_config(const std::string& name, ExperimentKind kind, double alpha, double r) {
    ExperimentConfig c;
    c.name = name;
    c.kind = kind;
    c.alpha = alpha;
    c.q = 2.0;
    c.r = r;
    c.R = {8, 16, 32, 64};
    return c;
}

double fitted_slope(const Report& rep, const std::string& fit) { return rep.fits.at(fit).at("slope").get<double>(); }

Criterion c6_scaling() {
    const Report rep = run(opnorm_config("scaling", ExperimentKind::scaling, 0.5, 2.0));
    const double slope = fitted_slope(rep, "norm");

    // Dense cross-check on a periodic grid with N = 256.
    const Grid g = Grid::make(1, 256, 256.0);
    const double R = 4.0;
    const auto w = local_window(R, 2.0);
    const TimeSampling ts = sample_window(w.first, w.second, 4.0);
    const TorusSmoothingOperator T(g, schrodinger, 0.5, SectorBump{}, R, ts.times);
    const double dense = dense_operator_norm(T);
    const double power = power_iteration(T).norm;
    const double rel = std::abs(power - dense) / dense;

    const bool pass = std::abs(slope - 0.5) <= slope_tol && rel <= dense_rel_tol;
    return make(pass, slope, "within", 0.5,
                "fitted slope " + fmt(slope) + " (target 0.5 +- 0.1); dense " + fmt(dense) + " vs power " + fmt(power) + ", relative gap " +
                    fmt(rel) + " (<= 0.01)");
}

Criterion c7_sharpness() {
    const Report rep = run(opnorm_config("sharpness", ExperimentKind::scaling, 0.75, 2.0));
    const double slope = fitted_slope(rep, "norm");
    const double at_alpha = predicted_exponent(1, 2.0, 2.0, 2.0, 0.75);
    const double at_half = predicted_exponent(1, 2.0, 2.0, 2.0, 0.5);
    // Residual against the rate the estimate would need at alpha = 3/4.
    const double residual = slope - at_alpha;
    return make(residual >= residual_slope_min, residual, ">=", residual_slope_min,
                "measured slope " + fmt(slope) + "; residual over R^" + fmt(at_alpha) + " is " + fmt(residual) + "; residual over R^" +
                    fmt(at_half) + " is " + fmt(slope - at_half));
}

Criterion c8_maximal() {
    ExperimentConfig c = opnorm_config("maximal", ExperimentKind::maximal, -0.25, infinity);
    const Report rep = run(c);
    const double slope = fitted_slope(rep, "norm");
    return make(std::abs(slope - 0.25) <= slope_tol, slope, "within", 0.25, "fitted lower-bound slope " + fmt(slope) + " (target 0.25 +- 0.1)");
}

Criterion c9_transfer() {
    ExperimentConfig c = opnorm_config("transfer", ExperimentKind::transfer, 0.5, 2.0);
    c.r_tilde = 4.0;
    c.window.global = true;
    c.ascent_steps = 20;
    c.ascent_restarts = 3;
    const Report rep = run(c);
    const double local = fitted_slope(rep, "local"), global = fitted_slope(rep, "global");
    const double bound = local + 0.25 + slope_tol;
    double tail = 0.0;
    for (const auto& row : rep.rows) tail = std::max(tail, row[4]);
    return make(global <= bound, global, "<=", bound,
                "global slope " + fmt(global) + ", local slope " + fmt(local) + ", bound " + fmt(bound) + "; worst tail fraction " + fmt(tail));
}

Criterion c10_overlap() {
    std::size_t lo = SIZE_MAX, hi = 0;
    std::string detail;
    for (double H : {16.0, 32.0, 64.0}) {
        const OverlapSummary s = max_overlap(schrodinger, H);
        lo = std::min(lo, s.max_count);
        hi = std::max(hi, s.max_count);
        detail += (detail.empty() ? "" : ", ") + std::string("H = ") + fmt(H) + ": " + std::to_string(s.max_count);
    }
    const double spread = lo ? double(hi) / double(lo) : infinity;
    return make(spread <= overlap_spread_max, spread, "<=", overlap_spread_max, "max overlap " + detail);
}

Criterion c11_sparse() {
    ExperimentConfig c;
    c.name = "sparse";
    c.kind = ExperimentKind::sparse_audit;
    c.samples = 50;
    c.set_size = 128;
    c.box_width = 1000000;
    c.K = 3;
    const Report rep = run(c);
    return make(rep.pass(), rep.derived.at("max_family_ratio").get<double>(), "<=", double(default_c_cover),
                "50 sets: partition, cover, sparsity and family budget all hold; c_cover = " + std::to_string(default_c_cover) +
                    ", worst families / |E|^{1/3} = " + fmt(rep.derived.at("max_family_ratio").get<double>()));
}

Criterion c12_surface() {
    const SurfacePatch patch = SurfacePatch::make(schrodinger);
    const std::vector<double> nu = surface_normal(patch, {1.25});
    std::vector<std::pair<double, double>> s;
    for (double z : {16.0, 32.0, 64.0, 128.0, 256.0}) s.emplace_back(z, std::abs(surface_fourier(patch, {z * nu[0], z * nu[1]})));
    const double slope = loglog_slope(s);
    return make(std::abs(slope - surface_slope_target) <= slope_tol, slope, "within", surface_slope_target,
                "normal-direction slope " + fmt(slope) + " (target -0.5 +- 0.1)");
}

Criterion c13_decoupling() {
    const SurfacePatch patch = SurfacePatch::make(schrodinger);
    double worst = 0.0;
    for (std::uint64_t s = 0; s < 10; ++s) {
        const auto balls = random_sparse_balls(4, 8.0, 2, 1000 + s);
        const DecouplingResult r = decoupling_check(patch, balls, 8.0, 2.0);
        worst = std::max(worst, r.ratio / r.max_single);
    }
    return make(worst <= decoupling_factor, worst, "<=", decoupling_factor,
                "worst ratio / single-ball constant " + fmt(worst) + " over 10 configurations");
}

using CheckFn = Criterion (*)();
const CheckFn check_fns[] = {c1_energy,  c2_gaussian, c3_packets,  c4_orthogonality, c5_kernel,  c6_scaling,    c7_sharpness,
                             c8_maximal, c9_transfer, c10_overlap, c11_sparse,       c12_surface, c13_decoupling};

}  // namespace

const std::vector<AcceptanceCheck>& acceptance_checks() {
    static const std::vector<AcceptanceCheck> checks = {
        {1, "energy identity", 5},
        {2, "Gaussian propagation oracle", 5},
        {3, "wave-packet reconstruction and energy", 30},
        {4, "almost orthogonality", 60},
        {5, "kernel decay", 60},
        {6, "L2 scaling exponent", 600},
        {7, "sharpness direction", 600},
        {8, "maximal exponent", 600},
        {9, "local-to-global transfer", 900},
        {10, "tube overlap", 120},
        {11, "sparse decomposition audit", 120},
        {12, "surface-measure decay", 120},
        {13, "sparse decoupling", 300},
    };
    return checks;
}

Report verify_all(const VerifyOptions& opt) {
    Report rep;
    rep.name = "verify";
    rep.kind = "acceptance";
    rep.columns = {"criterion", "pass", "value", "seconds", "budget_seconds"};
    const auto t0 = std::chrono::steady_clock::now();
    {
        const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm tm{};
        gmtime_r(&t, &tm);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
        rep.started = buf;
    }
    for (const auto& chk : acceptance_checks()) {
        if (!opt.only.empty() && !opt.only.count(chk.number)) continue;
        const auto start = std::chrono::steady_clock::now();
        Criterion c;
        try {
            c = check_fns[chk.number - 1]();
        } catch (const std::exception& e) {
            c = make(false, std::nan(""), "error", 0.0, std::string("raised: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        c.id = "C" + std::to_string(chk.number);
        c.description = chk.title;
        if (c.relation == "within") c.tolerance = slope_tol;
        const bool in_time = secs < chk.budget_seconds;
        c.detail += "; " + fmt(secs) + " s (budget " + fmt(chk.budget_seconds) + " s)";
        if (!in_time) c.detail += ", over budget";
        c.pass = c.pass && in_time;
        rep.add_row({double(chk.number), c.pass ? 1.0 : 0.0, c.value, secs, chk.budget_seconds});
        rep.criteria.push_back(c);
        if (opt.on_result) opt.on_result(c);
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

std::string format_criterion(const Criterion& c) { return c.id + (c.pass ? " PASS " : " FAIL ") + c.description + ": " + c.detail; }

}  // namespace kato
