#include "kato/experiments.hpp"

#include "kato/exponents.hpp"
#include "kato/grid.hpp"
#include "kato/opnorm.hpp"
#include "kato/recipes.hpp"
#include "kato/sparse.hpp"
#include "kato/surface.hpp"
#include "kato/wavepackets.hpp"

#include <Eigen/Core>
#include <boost/version.hpp>
#include <fftw3.h>

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace kato {

bool Report::pass() const {
    for (const auto& c : criteria)
        if (!c.pass) return false;
    return true;
}

void Report::add_row(std::vector<double> row) {
    if (row.size() != columns.size()) throw std::logic_error("report row width differs from the column count");
    rows.push_back(std::move(row));
}

Criterion criterion_at_most(std::string id, std::string description, double value, double bound) {
    return {std::move(id), std::move(description), value <= bound, value, "<=", bound, 0.0, ""};
}

Criterion criterion_at_least(std::string id, std::string description, double value, double bound) {
    return {std::move(id), std::move(description), value >= bound, value, ">=", bound, 0.0, ""};
}

Criterion criterion_within(std::string id, std::string description, double value, double target, double tolerance) {
    return {std::move(id), std::move(description), std::abs(value - target) <= tolerance, value, "within", target, tolerance, ""};
}

namespace {

ordered_json number(double v) {
    if (std::isfinite(v)) return v;
    return format_number(v);  // JSON has no infinity
}

ordered_json fit_json(const ScalingFit& f) {
    ordered_json j;
    j["slope"] = f.slope;
    j["intercept"] = f.intercept;
    j["slope_stderr"] = number(f.slope_stderr);
    j["predicted"] = f.predicted ? ordered_json(*f.predicted) : ordered_json(nullptr);
    ordered_json s = ordered_json::array();
    for (const auto& [R, v] : f.samples) s.push_back({R, v});
    j["samples"] = s;
    return j;
}

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

SmoothingOperatorSpec base_spec(const ExperimentConfig& c) {
    SmoothingOperatorSpec s;
    s.sym = c.symbol;
    s.alpha = c.alpha;
    s.q = c.q;
    s.r = c.r;
    s.order = c.order;
    s.window = c.window;
    s.dx = c.dx;
    return s;
}

LowerBoundOptions ascent_options(const ExperimentConfig& c) {
    LowerBoundOptions o;
    o.ascent_steps = c.ascent_steps;
    o.restarts = c.ascent_restarts;
    return o;
}

struct Measured {
    double norm = 0.0;
    std::size_t iterations = 0, restarts = 0;
    bool converged = true;
    double plate = 0.0;
    cvec vector;
};

// The L2 operator norm by power iteration when q = r = 2, otherwise the mixed-norm lower bound.
Measured measure(const ExtensionSampler& A, const ExperimentConfig& c, double q, double r, std::size_t index, Report& rep) {
    Measured m;
    if (q == 2.0 && r == 2.0 && c.order == NormOrder::xt) {
        PowerOptions o;
        o.restarts = c.power_restarts;
        o.seed = c.seed + index;
        const PowerResult p = power_iteration(A, o);
        m.norm = p.norm;
        m.iterations = p.iterations;
        m.restarts = p.restarts;
        m.converged = p.converged;
        m.vector = p.vector;
        if (!p.converged)
            rep.log.push_back("R = " + format_number(A.R()) + ": power iteration stopped with relative gap " + format_number(p.gap));
        return m;
    }
    const LowerBound lb = lower_bound_mixed(A, q, r, c.order, ascent_options(c));
    m.norm = lb.value;
    m.iterations = lb.evaluations;
    m.restarts = c.ascent_restarts;
    m.converged = !lb.stagnated;
    m.plate = lb.plate_heuristic;
    m.vector = lb.maximizer;
    rep.log.push_back("R = " + format_number(A.R()) + ": lower bound seeded by " + lb.best + " (candidate value " +
                      format_number(lb.best_candidate) + ")" + (lb.stagnated ? ", ascent stagnated" : ""));
    return m;
}

void run_scaling(const ExperimentConfig& c, Report& rep) {
    rep.columns = {"R", "norm", "iterations", "restarts", "converged"};
    std::vector<std::pair<double, double>> samples;
    SmoothingOperatorSpec spec = base_spec(c);
    for (std::size_t i = 0; i < c.R.size(); ++i) {
        spec.R = c.R[i];
        const auto A = make_sampler(spec);
        const Measured m = measure(*A, c, c.q, c.r, i, rep);
        rep.add_row({c.R[i], m.norm, double(m.iterations), double(m.restarts), m.converged ? 1.0 : 0.0});
        samples.emplace_back(c.R[i], m.norm);
    }
    const double predicted = predicted_exponent(c.n, c.symbol.m(), c.q, c.r, c.alpha);
    const ScalingFit fit = fit_exponent(samples, predicted);
    rep.fits["norm"] = fit_json(fit);
    rep.criteria.push_back(criterion_within("slope", "fitted slope matches -alpha + n/q + m/r - n/2", fit.slope, predicted, c.tolerance));
}

void run_maximal(const ExperimentConfig& c, Report& rep) {
    rep.columns = {"R", "norm", "iterations", "restarts", "converged", "plate_heuristic", "lq_lrtilde_of_maximizer"};
    std::vector<std::pair<double, double>> samples;
    SmoothingOperatorSpec spec = base_spec(c);
    double worst_plate_margin = infinity;
    for (std::size_t i = 0; i < c.R.size(); ++i) {
        spec.R = c.R[i];
        const auto A = make_sampler(spec);
        const Measured m = measure(*A, c, c.q, c.r, i, rep);
        const double sob = A->mixed(m.vector, c.q, c.r_tilde, c.order);
        rep.add_row({c.R[i], m.norm, double(m.iterations), double(m.restarts), m.converged ? 1.0 : 0.0, m.plate, sob});
        samples.emplace_back(c.R[i], m.norm);
        worst_plate_margin = std::min(worst_plate_margin, m.norm - m.plate);
    }
    const double m = c.symbol.m();
    const double predicted = predicted_exponent(c.n, m, c.q, c.r, c.alpha);
    const ScalingFit fit = fit_exponent(samples, predicted);
    rep.fits["norm"] = fit_json(fit);
    // W^{1/r~, r~} in time embeds in L^infinity; a time derivative costs m space derivatives.
    const double beta = m / c.r_tilde;
    rep.derived["sobolev"] = {{"r_tilde", c.r_tilde},
                              {"beta", beta},
                              {"embedding_exponent", predicted_exponent(c.n, m, c.q, c.r_tilde, c.alpha + beta)},
                              {"maximal_exponent", predicted}};
    rep.criteria.push_back(criterion_within("slope", "fitted maximal slope matches -alpha + n/q - n/2", fit.slope, predicted, c.tolerance));
    rep.criteria.push_back(criterion_at_least("plate", "lower bound is at least the knapp plate value", worst_plate_margin, 0.0));
}

void run_transfer(const ExperimentConfig& c, Report& rep) {
    rep.columns = {"R", "local_norm", "global_norm", "global_T", "tail_fraction", "local_iterations", "global_iterations"};
    std::vector<std::pair<double, double>> local, global;
    SmoothingOperatorSpec spec = base_spec(c);
    for (std::size_t i = 0; i < c.R.size(); ++i) {
        spec.R = c.R[i];
        spec.window = WindowSpec{};
        const auto L = make_sampler(spec);
        const Measured ml = measure(*L, c, c.q, c.r, i, rep);
        spec.window = c.window;
        spec.window.global = true;
        const auto G = make_sampler(spec);
        const Measured mg = measure(*G, c, c.q, c.r_tilde, i, rep);
        const double tail = tail_fraction(*G, mg.vector, c.r_tilde);
        rep.add_row({c.R[i], ml.norm, mg.norm, G->window().second, tail, double(ml.iterations), double(mg.iterations)});
        local.emplace_back(c.R[i], ml.norm);
        global.emplace_back(c.R[i], mg.norm);
    }
    const double m = c.symbol.m();
    const ScalingFit fl = fit_exponent(local, predicted_exponent(c.n, m, c.q, c.r, c.alpha));
    const ScalingFit fg = fit_exponent(global, predicted_exponent(c.n, m, c.q, c.r_tilde, c.alpha));
    rep.fits["local"] = fit_json(fl);
    rep.fits["global"] = fit_json(fg);
    const TransferExponent t = transfer_exponent(c.n, c.r, c.r_tilde, c.alpha);
    rep.derived["transfer"] = {{"delta_inf", t.delta_inf}, {"alpha_global_sup", t.alpha_global_sup}};
    rep.criteria.push_back(criterion_at_most("transfer", "global slope <= local slope + n(1/r - 1/r_tilde) + tolerance", fg.slope,
                                             fl.slope + t.delta_inf + c.tolerance));
}

void run_wavepacket_audit(const ExperimentConfig& c, Report& rep) {
    rep.columns = {"R", "sample", "packets", "reconstruction_error", "energy_error", "frequency_spill", "spatial_spill"};
    const Grid g = Grid::make(c.n, c.grid_N, c.grid_L);
    double worst_rec = 0.0, worst_energy = 0.0, worst_orth = 0.0;
    ordered_json orth = ordered_json::array();
    for (double R : c.R) {
        Decomposition first;
        for (std::size_t i = 0; i < c.samples; ++i) {
            RandomBandlimitedRecipe recipe;
            recipe.seed = c.seed + i;
            const Field f = make_field(g, recipe);
            Decomposition d = decompose(f, R);
            const DecompositionAudit a = audit_decomposition(f, d);
            rep.add_row({R, double(i), double(d.packets.size()), a.reconstruction_error, a.energy_error, a.max_frequency_spill,
                         a.max_spatial_spill});
            worst_rec = std::max(worst_rec, a.reconstruction_error);
            worst_energy = std::max(worst_energy, a.energy_error);
            if (i == 0) first = std::move(d);
        }
        // Random subcollections of the first field's packets, each packet kept with probability 1/2.
        std::mt19937_64 rng(c.seed);
        std::bernoulli_distribution coin(0.5);
        double max_ratio = 0.0, sum_ratio = 0.0;
        std::size_t draws = 0;
        for (std::size_t s = 0; s < c.subcollections; ++s) {
            std::vector<std::size_t> sel;
            for (std::size_t p = 0; p < first.packets.size(); ++p)
                if (coin(rng)) sel.push_back(p);
            if (sel.empty()) continue;
            const double ratio = almost_orthogonality(first, sel);
            max_ratio = std::max(max_ratio, ratio);
            sum_ratio += ratio;
            ++draws;
        }
        worst_orth = std::max(worst_orth, max_ratio);
        const PsiSpill spill = psi_spillover(R, g);
        orth.push_back({{"R", R},
                        {"draws", draws},
                        {"max_ratio", max_ratio},
                        {"mean_ratio", draws ? sum_ratio / double(draws) : 0.0},
                        {"psi_outside_2R_over_3", spill.outside_fraction},
                        {"psi_radius_9999_over_R", spill.radius_9999}});
    }
    rep.derived["almost_orthogonality"] = orth;
    rep.criteria.push_back(criterion_at_most("reconstruction", "max relative reconstruction error", worst_rec, c.audit_tolerance));
    rep.criteria.push_back(criterion_at_most("energy", "max relative packet energy error", worst_energy, c.audit_tolerance));
    auto co = criterion_at_most("orthogonality", "max almost-orthogonality ratio", worst_orth, c.orthogonality_ceiling);
    co.detail = "calibrated constant " + format_number(worst_orth);
    rep.criteria.push_back(co);
}

void run_sparse_audit(const ExperimentConfig& c, Report& rep) {
    rep.columns = {"sample", "size", "max_families", "family_ratio", "partition", "cover", "sparse", "family_budget"};
    std::mt19937_64 rng(c.seed);
    std::uniform_int_distribution<std::size_t> size(1, c.set_size);
    std::size_t ok_partition = 0, ok_cover = 0, ok_sparse = 0, ok_budget = 0;
    double worst_ratio = 0.0;
    for (std::size_t i = 0; i < c.samples; ++i) {
        const CubeSet E = CubeSet::random(c.n + 1, size(rng), c.box_width, c.seed + i);
        const SparseDecomposition d = sparse_decompose(E, c.K);
        const SparseAudit a = audit_sparse(E, d);
        rep.add_row({double(i), double(E.size()), double(a.max_families), a.max_family_ratio, double(a.partition), double(a.cover),
                     double(a.sparse), double(a.family_budget)});
        ok_partition += a.partition;
        ok_cover += a.cover;
        ok_sparse += a.sparse;
        ok_budget += a.family_budget;
        worst_ratio = std::max(worst_ratio, a.max_family_ratio);
        if (i == 0) rep.derived["first_decomposition"] = ordered_json::parse(sparse_to_json(d, a));
    }
    rep.derived["c_cover"] = default_c_cover;
    rep.derived["max_family_ratio"] = worst_ratio;
    const double N = double(c.samples);
    rep.criteria.push_back(criterion_at_least("partition", "sets whose levels partition E", double(ok_partition), N));
    rep.criteria.push_back(criterion_at_least("cover", "sets whose balls cover every level", double(ok_cover), N));
    rep.criteria.push_back(criterion_at_least("sparse", "sets whose families are all exactly sparse", double(ok_sparse), N));
    auto cb = criterion_at_least("family_budget", "sets within c_cover |E|^{1/K} families per level", double(ok_budget), N);
    cb.detail = "c_cover = " + std::to_string(default_c_cover) + ", worst families / |E|^{1/K} = " + format_number(worst_ratio);
    rep.criteria.push_back(cb);
}

void run_decay_audit(const ExperimentConfig& c, Report& rep) {
    rep.columns = {"series", "R", "x", "value"};
    rep.derived["series"] = {"surface", "kernel"};
    const SurfacePatch patch = SurfacePatch::make(c.symbol);
    std::vector<double> xs(static_cast<std::size_t>(c.n), 0.0);
    xs[0] = c.xi_star;
    const std::vector<double> nu = surface_normal(patch, xs);
    std::vector<std::pair<double, double>> surf;
    for (double z : c.zeta) {
        std::vector<double> zeta(nu.size());
        for (std::size_t i = 0; i < nu.size(); ++i) zeta[i] = z * nu[i];
        const double v = std::abs(surface_fourier(patch, zeta));
        rep.add_row({0.0, 0.0, z, v});
        surf.emplace_back(z, v);
    }
    const Rational rho = surface_decay_rate(c.n);
    const double rate = double(rho.num) / double(rho.den);
    const double s_slope = loglog_slope(surf);
    rep.fits["surface"] = {{"slope", s_slope}, {"predicted", -rate}};
    rep.criteria.push_back(criterion_within("surface_decay", "normal-direction slope of |d sigma hat| matches -n/2", s_slope, -rate, c.tolerance));

    std::vector<double> v(static_cast<std::size_t>(c.n), 0.0);
    v[0] = 1.0;
    const double m = c.symbol.m();
    for (double R : c.R) {
        const double Rm = std::pow(R, m);
        const KernelDecay k = kernel_decay(v, R, c.symbol, {0.5 * Rm, Rm, 2.0 * Rm});
        for (const auto& [d, val] : k.samples) rep.add_row({1.0, R, d, val});
        rep.fits["kernel_R" + format_number(R)] = {{"slope", k.slope}, {"core_value", k.core_value}};
        rep.criteria.push_back(criterion_at_most("kernel_decay_R" + format_number(R), "log-log slope of |K_v| against core distance", k.slope, -3.0));
    }
}

}  // namespace

ordered_json environment_stamp() {
    ordered_json e;
#if defined(__clang__)
    e["compiler"] = std::string("clang ") + __clang_version__;
#elif defined(__GNUC__)
    e["compiler"] = std::string("gcc ") + __VERSION__;
#else
    e["compiler"] = "unknown";
#endif
    e["cxx_standard"] = static_cast<long>(__cplusplus);
    e["fftw"] = std::string(fftw_version);
    e["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." + std::to_string(EIGEN_MINOR_VERSION);
    e["boost"] = std::to_string(BOOST_VERSION / 100000) + "." + std::to_string(BOOST_VERSION / 100 % 1000) + "." +
                 std::to_string(BOOST_VERSION % 100);
#ifdef NDEBUG
    e["build"] = "release";
#else
    e["build"] = "debug";
#endif
    return e;
}

ordered_json to_json(const Report& r) {
    ordered_json j;
    j["name"] = r.name;
    j["kind"] = r.kind;
    ordered_json cfg = ordered_json::object();
    for (const auto& [k, v] : r.config) cfg[k] = v;
    j["config"] = cfg;
    j["columns"] = r.columns;
    ordered_json rows = ordered_json::array();
    for (const auto& row : r.rows) {
        ordered_json jr = ordered_json::array();
        for (double v : row) jr.push_back(number(v));
        rows.push_back(jr);
    }
    j["measurements"] = rows;
    j["fits"] = r.fits;
    j["derived"] = r.derived;
    ordered_json crit = ordered_json::array();
    for (const auto& c : r.criteria) {
        ordered_json jc;
        jc["id"] = c.id;
        jc["description"] = c.description;
        jc["pass"] = c.pass;
        jc["value"] = number(c.value);
        jc["relation"] = c.relation;
        jc["threshold"] = number(c.threshold);
        if (c.relation == "within") jc["tolerance"] = c.tolerance;
        jc["detail"] = c.detail;
        crit.push_back(jc);
    }
    j["criteria"] = crit;
    j["pass"] = r.pass();
    j["log"] = r.log;
    j["environment"] = environment_stamp();
    j["timing"] = {{"started", r.started}, {"wall_clock_seconds", r.seconds}};
    return j;
}

std::string to_csv(const Report& r) {
    std::ostringstream os;
    for (std::size_t i = 0; i < r.columns.size(); ++i) os << (i ? "," : "") << r.columns[i];
    os << "\n";
    for (const auto& row : r.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
        os << "\n";
    }
    return os.str();
}

std::string to_gnuplot(const Report& r) {
    std::ostringstream os;
    os << "# " << r.name << " (" << r.kind << ")\n#";
    for (const auto& c : r.columns) os << " " << c;
    os << "\n";
    for (const auto& row : r.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? " " : "") << format_number(row[i]);
        os << "\n";
    }
    for (const auto& [name, fit] : r.fits.items()) {
        if (!fit.contains("slope")) continue;
        os << "# fit " << name << ": slope " << format_number(fit["slope"].get<double>());
        if (fit.contains("intercept")) os << " intercept " << format_number(fit["intercept"].get<double>());
        os << "\n";
    }
    return os.str();
}

std::string write_report(const Report& r, const std::string& output_dir) {
    std::filesystem::create_directories(output_dir);
    const std::filesystem::path base = std::filesystem::path(output_dir) / r.name;
    auto put = [](const std::filesystem::path& p, const std::string& text) {
        std::ofstream out(p, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
        out << text;
    };
    put(base.string() + ".json", to_json(r).dump(2) + "\n");
    put(base.string() + ".csv", to_csv(r));
    put(base.string() + ".dat", to_gnuplot(r));
    return base.string() + ".json";
}

Report run(const ExperimentConfig& config) {
    validate(config);
    Report rep;
    rep.name = config.name;
    rep.kind = to_string(config.kind);
    rep.config = config_echo(config);
    rep.started = utc_now();
    const auto t0 = std::chrono::steady_clock::now();
    switch (config.kind) {
        case ExperimentKind::scaling: run_scaling(config, rep); break;
        case ExperimentKind::transfer: run_transfer(config, rep); break;
        case ExperimentKind::maximal: run_maximal(config, rep); break;
        case ExperimentKind::wavepacket_audit: run_wavepacket_audit(config, rep); break;
        case ExperimentKind::sparse_audit: run_sparse_audit(config, rep); break;
        case ExperimentKind::decay_audit: run_decay_audit(config, rep); break;
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace kato
