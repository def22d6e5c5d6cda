// kato: command-line front end for the propagator, norms, wave packets,
// operator norms, sparse decompositions, field recipes and the experiment runner.

#include "kato/acceptance.hpp"
#include "kato/config.hpp"
#include "kato/exponents.hpp"
#include "kato/experiments.hpp"
#include "kato/field_io.hpp"
#include "kato/norms.hpp"
#include "kato/opnorm.hpp"
#include "kato/propagator.hpp"
#include "kato/recipes.hpp"
#include "kato/sparse.hpp"
#include "kato/wavepackets.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace kato;

namespace {

std::vector<double> parse_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(parse_exponent(item));
        } catch (const std::exception&) {
            throw CLI::ValidationError(what, "bad number '" + item + "'");
        }
    }
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
}

std::string csv_number(double v) { return format_number(v); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dispersive smoothing laboratory"};
    app.require_subcommand(1);
    int status = 0;

    // field
    std::string symbol = "power,m=2,n=1", in, out;
    std::string recipe_text = "random:region=sector,seed=1";
    int dim = 1;
    std::size_t grid_N = 1024;
    double grid_L = 256.0;
    auto* fld = app.add_subcommand("field", "write a field from a recipe");
    fld->add_option("--recipe", recipe_text, "gaussian:w=1[,c=x:y] | random:region=sector|ball:2,seed=7 | knapp:R=16 | file:path");
    fld->add_option("--n", dim, "space dimension")->check(CLI::Range(1, 3));
    fld->add_option("--N", grid_N, "nodes per axis")->check(CLI::PositiveNumber);
    fld->add_option("--L", grid_L, "period")->check(CLI::PositiveNumber);
    fld->add_option("--out", out, "output field (KSLF)")->required();
    fld->callback([&] { write_field(out, make_field(Grid::make(dim, grid_N, grid_L), parse_recipe(recipe_text))); });

    // cubes
    std::size_t count = 64;
    std::int64_t width = 1000000;
    std::uint64_t cube_seed = 1;
    auto* cub = app.add_subcommand("cubes", "write a random cube set as CSV");
    cub->add_option("--dim", dim, "lattice dimension (n + 1)")->check(CLI::PositiveNumber);
    cub->add_option("--count", count, "number of distinct cubes")->check(CLI::PositiveNumber);
    cub->add_option("--width", width, "box width")->check(CLI::PositiveNumber);
    cub->add_option("--seed", cube_seed, "random seed");
    cub->add_option("--out", out, "output CSV")->required();
    cub->callback([&] { CubeSet::random(dim, count, width, cube_seed).write_csv(out); });

    // propagate
    double t0 = 0.0, t1 = 1.0;
    std::size_t steps = 16;
    bool sector = false;
    auto* prop = app.add_subcommand("propagate", "u(t) = e^{it Phi(D)} f on a uniform time grid");
    prop->add_option("--symbol", symbol, "symbol, e.g. power,m=2,n=1");
    prop->add_option("--t0", t0, "first time");
    prop->add_option("--t1", t1, "last time");
    prop->add_option("--steps", steps, "number of time steps")->check(CLI::PositiveNumber);
    prop->add_option("--in", in, "input field (KSLF)")->required();
    prop->add_option("--out", out, "output spacetime field (KSLF)")->required();
    prop->add_flag("--sector", sector, "apply the sector bump first");
    prop->callback([&] {
        const SymbolSpec sym = SymbolSpec::parse(symbol);
        const Field f = read_field(in);
        const rvec times = uniform_times(t0, t1, steps);
        const SpacetimeField u = sector ? apply_U(f, sym, SectorBump{}, times) : propagate(f, sym, times);
        write_spacetime(out, u);
    });

    // norm
    std::string q_text = "2", r_text = "2", order_text = "xt", ball_text, t_text;
    auto* norm = app.add_subcommand("norm", "mixed L^q_x L^r_t norm of a spacetime field");
    norm->add_option("--q", q_text, "spatial exponent (number or inf)");
    norm->add_option("--r", r_text, "temporal exponent (number or inf)");
    norm->add_option("--order", order_text, "xt or tx");
    norm->add_option("--ball", ball_text, "c1[,c2..],rho; all space when omitted");
    norm->add_option("--t", t_text, "a,b time window; all samples when omitted");
    norm->add_option("--in", in, "spacetime field (KSLF)")->required();
    norm->callback([&] {
        const SpacetimeField u = read_any(in);
        MixedNormSpec spec;
        spec.q = parse_exponent(q_text);
        spec.r = parse_exponent(r_text);
        spec.order = parse_order(order_text);
        if (!ball_text.empty()) {
            auto v = parse_list(ball_text, "--ball");
            if (v.size() != static_cast<std::size_t>(u.grid.n) + 1) throw CLI::ValidationError("--ball", "expects n centre coordinates and a radius");
            spec.region.radius = v.back();
            v.pop_back();
            spec.region.center = v;
        }
        if (!t_text.empty()) {
            const auto v = parse_list(t_text, "--t");
            if (v.size() != 2) throw CLI::ValidationError("--t", "expects a,b");
            spec.window = std::make_pair(v[0], v[1]);
        }
        std::printf("%.12g\n", mixed_norm(u, spec));
    });

    // wavepacket decompose
    double R = 8.0;
    std::string out_dir = "packets";
    auto* wp = app.add_subcommand("wavepacket", "wave-packet tools");
    wp->require_subcommand(1);
    auto* dec = wp->add_subcommand("decompose", "split a field into scale-R packets");
    dec->add_option("--R", R, "packet scale")->check(CLI::PositiveNumber);
    dec->add_option("--in", in, "input field (KSLF)")->required();
    dec->add_option("--out-dir", out_dir, "directory for packet files and manifest.csv");
    dec->callback([&] {
        const Field f = read_field(in);
        const Decomposition d = decompose(f, R);
        std::filesystem::create_directories(out_dir);
        std::ostringstream manifest;
        const int n = f.grid.n;
        manifest << "file";
        for (int i = 0; i < n; ++i) manifest << ",l" << i;
        for (int i = 0; i < n; ++i) manifest << ",v" << i;
        manifest << ",energy\n";
        for (std::size_t p = 0; p < d.packets.size(); ++p) {
            const WavePacket& w = d.packets[p];
            char name[32];
            std::snprintf(name, sizeof name, "packet_%06zu.kslf", p);
            write_field((std::filesystem::path(out_dir) / name).string(), w.field);
            manifest << name;
            for (double x : w.l) manifest << "," << csv_number(x);
            for (double x : w.v) manifest << "," << csv_number(x);
            manifest << "," << csv_number(w.energy) << "\n";
        }
        write_text((std::filesystem::path(out_dir) / "manifest.csv").string(), manifest.str());
        std::printf("%zu packets (%zu dropped below %g of the energy)\n", d.packets.size(), d.dropped, packet_drop_threshold);
    });

    // opnorm
    double alpha = 0.5;
    std::string window_text = "local", R_text = "8,16,32,64", opnorm_out;
    std::uint64_t seed = 1;
    std::size_t restarts = 3;
    auto* op = app.add_subcommand("opnorm", "operator norm (q = r = 2) or mixed-norm lower bound across scales");
    op->add_option("--symbol", symbol, "symbol (n = 1)");
    op->add_option("--alpha", alpha, "regularity");
    op->add_option("--q", q_text, "spatial exponent");
    op->add_option("--r", r_text, "temporal exponent");
    op->add_option("--order", order_text, "xt or tx");
    op->add_option("--window", window_text, "local | global | global:T");
    op->add_option("--R", R_text, "comma separated dyadic scales");
    op->add_option("--seed", seed, "power-iteration seed");
    op->add_option("--restarts", restarts, "power-iteration restarts")->check(CLI::PositiveNumber);
    op->add_option("--out-dir", opnorm_out, "write opnorm.csv and opnorm_fit.json here instead of stdout");
    op->callback([&] {
        SmoothingOperatorSpec spec;
        spec.sym = SymbolSpec::parse(symbol);
        spec.alpha = alpha;
        spec.q = parse_exponent(q_text);
        spec.r = parse_exponent(r_text);
        spec.order = parse_order(order_text);
        spec.window = parse_window(window_text);
        std::ostringstream csv;
        csv << "R,norm,iterations,restarts\n";
        std::vector<std::pair<double, double>> samples;
        bool l2 = spec.q == 2.0 && spec.r == 2.0;
        for (double Rv : parse_list(R_text, "--R")) {
            spec.R = Rv;
            double value = 0.0;
            std::size_t its = 0, rs = 0;
            if (l2) {
                PowerOptions o;
                o.seed = seed;
                o.restarts = restarts;
                const PowerResult p = operator_norm_l2(spec, o);
                value = p.norm;
                its = p.iterations;
                rs = p.restarts;
                if (!p.converged) std::fprintf(stderr, "R = %g: not converged, gap %g\n", Rv, p.gap);
            } else {
                const LowerBound lb = lower_bound_mixed(spec);
                value = lb.value;
                its = lb.evaluations;
                rs = LowerBoundOptions{}.restarts;
            }
            csv << csv_number(Rv) << "," << csv_number(value) << "," << its << "," << rs << "\n";
            samples.emplace_back(Rv, value);
        }
        const double pred = predicted_exponent(spec.sym.n(), spec.sym.m(), spec.q, spec.r, spec.alpha);
        nlohmann::ordered_json j;
        j["method"] = l2 ? "power_iteration" : "lower_bound";
        if (samples.size() >= 3) {
            const ScalingFit fit = fit_exponent(samples, pred);
            j["slope"] = fit.slope;
            j["intercept"] = fit.intercept;
            j["slope_stderr"] = fit.slope_stderr;
        } else {
            j["slope"] = nullptr;
            j["intercept"] = nullptr;
            j["slope_stderr"] = nullptr;
        }
        j["predicted"] = pred;
        if (opnorm_out.empty()) {
            std::cout << csv.str() << "\n" << j.dump(2) << "\n";
        } else {
            std::filesystem::create_directories(opnorm_out);
            write_text((std::filesystem::path(opnorm_out) / "opnorm.csv").string(), csv.str());
            write_text((std::filesystem::path(opnorm_out) / "opnorm_fit.json").string(), j.dump(2) + "\n");
        }
    });

    // sparse decompose
    unsigned K = 3;
    auto* sp = app.add_subcommand("sparse", "sparse decomposition of a cube set");
    sp->add_option("--in", in, "CSV of integer coordinates")->required();
    sp->add_option("--K", K, "number of levels")->check(CLI::PositiveNumber);
    sp->add_option("--out", out, "JSON tree (stdout when omitted)");
    sp->callback([&] {
        const CubeSet E = CubeSet::read_csv(in);
        const SparseDecomposition d = sparse_decompose(E, K);
        const SparseAudit a = audit_sparse(E, d);
        const std::string json = sparse_to_json(d, a);
        if (out.empty())
            std::cout << json << "\n";
        else
            write_text(out, json + "\n");
        if (!a.pass()) status = 1;
    });

    // run
    std::string config_path, run_out;
    auto* runc = app.add_subcommand("run", "run an experiment from a key = value config");
    runc->add_option("config", config_path, "config file")->required();
    runc->add_option("--out-dir", run_out, "overrides the config's output directory");
    bool dry_run = false;
    runc->add_flag("--dry-run", dry_run, "validate and print the resolved config without running");
    runc->callback([&] {
        ExperimentConfig c = read_config(config_path);
        if (!run_out.empty()) c.output = run_out;
        if (dry_run) {
            validate(c);
            for (const auto& [k, v] : config_echo(c)) std::cout << k << " = " << v << "\n";
            return;
        }
        const Report rep = run(c);
        const std::string path = write_report(rep, c.output);
        for (const auto& cr : rep.criteria) {
            std::cout << cr.id << (cr.pass ? " PASS " : " FAIL ") << cr.description << ": " << format_number(cr.value) << " "
                      << cr.relation << " " << format_number(cr.threshold);
            if (cr.relation == "within") std::cout << " +- " << format_number(cr.tolerance);
            std::cout << "\n";
        }
        std::cout << "report: " << path << "\n";
        if (!rep.pass()) status = 1;
    });

    // verify
    std::string only_text, report_path;
    auto* ver = app.add_subcommand("verify", "run the acceptance checks");
    ver->add_option("--only", only_text, "comma separated check numbers");
    ver->add_option("--report", report_path, "write the report JSON here");
    ver->callback([&] {
        VerifyOptions o;
        for (double v : parse_list(only_text.empty() ? "" : only_text, "--only")) o.only.insert(static_cast<int>(v));
        o.on_result = [](const Criterion& c) { std::cout << format_criterion(c) << std::endl; };
        const Report rep = verify_all(o);
        if (!report_path.empty()) write_text(report_path, to_json(rep).dump(2) + "\n");
        if (!rep.pass()) status = 1;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return status;
}
