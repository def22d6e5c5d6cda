#include "kato/config.hpp"

#include "kato/grid.hpp"
#include "kato/wavepackets.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace kato {

ConfigError::ConfigError(std::string field, const std::string& message)
    : std::invalid_argument("config field '" + field + "': " + message), field_(std::move(field)) {}

std::string to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::scaling: return "scaling";
        case ExperimentKind::transfer: return "transfer";
        case ExperimentKind::maximal: return "maximal";
        case ExperimentKind::wavepacket_audit: return "wavepacket-audit";
        case ExperimentKind::sparse_audit: return "sparse-audit";
        case ExperimentKind::decay_audit: return "decay-audit";
    }
    return "?";
}

std::string format_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        return parse_exponent(v);
    } catch (const std::exception&) {
        throw ConfigError(key, "expected a number, got '" + v + "'");
    }
}

template <typename T>
T to_unsigned(const std::string& key, const std::string& v) {
    T out{};
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) throw ConfigError(key, "expected a non-negative integer, got '" + v + "'");
    return out;
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
    if (out.empty()) throw ConfigError(key, "expected a comma separated list");
    return out;
}

std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_number(v[i]);
    return s;
}

ExperimentKind to_kind(const std::string& v) {
    for (auto k : {ExperimentKind::scaling, ExperimentKind::transfer, ExperimentKind::maximal, ExperimentKind::wavepacket_audit,
                   ExperimentKind::sparse_audit, ExperimentKind::decay_audit})
        if (to_string(k) == v) return k;
    throw ConfigError("kind", "unknown experiment kind '" + v + "'");
}

bool is_power_of_two(double R) {
    int e = 0;
    return R >= 1.0 && std::frexp(R, &e) == 0.5;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig c;
    using Setter = std::function<void(const std::string&, const std::string&)>;
    const std::map<std::string, Setter> setters = {
        {"name", [&](auto&, auto& v) { c.name = v; }},
        {"kind", [&](auto&, auto& v) { c.kind = to_kind(v); }},
        {"symbol",
         [&](auto& k, auto& v) {
             try {
                 c.symbol = SymbolSpec::parse(v);
             } catch (const std::exception& e) {
                 throw ConfigError(k, e.what());
             }
             c.symbol_text = v;
             c.n = c.symbol.n();
         }},
        {"n", [&](auto& k, auto& v) { c.n = static_cast<int>(to_unsigned<unsigned>(k, v)); }},
        {"grid.N", [&](auto& k, auto& v) { c.grid_N = to_unsigned<std::size_t>(k, v); }},
        {"grid.L", [&](auto& k, auto& v) { c.grid_L = to_double(k, v); }},
        {"R", [&](auto& k, auto& v) { c.R = to_list(k, v); }},
        {"q", [&](auto& k, auto& v) { c.q = to_double(k, v); }},
        {"r", [&](auto& k, auto& v) { c.r = to_double(k, v); }},
        {"r_tilde", [&](auto& k, auto& v) { c.r_tilde = to_double(k, v); }},
        {"alpha", [&](auto& k, auto& v) { c.alpha = to_double(k, v); }},
        {"order",
         [&](auto& k, auto& v) {
             try {
                 c.order = parse_order(v);
             } catch (const std::exception& e) {
                 throw ConfigError(k, e.what());
             }
         }},
        {"window",
         [&](auto& k, auto& v) {
             try {
                 c.window = parse_window(v);
             } catch (const std::exception& e) {
                 throw ConfigError(k, e.what());
             }
         }},
        {"dx", [&](auto& k, auto& v) { c.dx = to_double(k, v); }},
        {"seed", [&](auto& k, auto& v) { c.seed = to_unsigned<std::uint64_t>(k, v); }},
        {"samples", [&](auto& k, auto& v) { c.samples = to_unsigned<std::size_t>(k, v); }},
        {"subcollections", [&](auto& k, auto& v) { c.subcollections = to_unsigned<std::size_t>(k, v); }},
        {"K", [&](auto& k, auto& v) { c.K = to_unsigned<unsigned>(k, v); }},
        {"set_size", [&](auto& k, auto& v) { c.set_size = to_unsigned<std::size_t>(k, v); }},
        {"box_width", [&](auto& k, auto& v) { c.box_width = to_unsigned<std::int64_t>(k, v); }},
        {"zeta", [&](auto& k, auto& v) { c.zeta = to_list(k, v); }},
        {"xi_star", [&](auto& k, auto& v) { c.xi_star = to_double(k, v); }},
        {"tolerance", [&](auto& k, auto& v) { c.tolerance = to_double(k, v); }},
        {"audit_tolerance", [&](auto& k, auto& v) { c.audit_tolerance = to_double(k, v); }},
        {"orthogonality_ceiling", [&](auto& k, auto& v) { c.orthogonality_ceiling = to_double(k, v); }},
        {"ascent_steps", [&](auto& k, auto& v) { c.ascent_steps = to_unsigned<std::size_t>(k, v); }},
        {"ascent_restarts", [&](auto& k, auto& v) { c.ascent_restarts = to_unsigned<std::size_t>(k, v); }},
        {"power_restarts", [&](auto& k, auto& v) { c.power_restarts = to_unsigned<std::size_t>(k, v); }},
        {"output", [&](auto&, auto& v) { c.output = v; }},
    };

    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    bool explicit_n = false;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno), "expected key = value");
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end()) throw ConfigError(key, "unknown key");
        if (!seen.insert(key).second) throw ConfigError(key, "given more than once");
        if (value.empty()) throw ConfigError(key, "empty value");
        if (key == "n") explicit_n = true;
        it->second(key, value);
    }
    if (explicit_n && seen.count("symbol") && c.n != c.symbol.n()) throw ConfigError("n", "differs from the symbol's dimension");
    if (!seen.count("symbol")) c.symbol = SymbolSpec::power(2.0, c.n), c.symbol_text = "power,m=2,n=" + std::to_string(c.n);
    return c;
}

ExperimentConfig read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("path", "cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::vector<std::pair<std::string, std::string>> config_echo(const ExperimentConfig& c) {
    std::string window = c.window.global ? "global" : "local";
    if (c.window.global && c.window.T > 0.0) window += ":" + format_number(c.window.T);
    return {
        {"name", c.name},
        {"kind", to_string(c.kind)},
        {"symbol", c.symbol_text},
        {"n", std::to_string(c.n)},
        {"grid.N", std::to_string(c.grid_N)},
        {"grid.L", format_number(c.grid_L)},
        {"R", join(c.R)},
        {"q", format_number(c.q)},
        {"r", format_number(c.r)},
        {"r_tilde", format_number(c.r_tilde)},
        {"alpha", format_number(c.alpha)},
        {"order", c.order == NormOrder::xt ? "xt" : "tx"},
        {"window", window},
        {"dx", format_number(c.dx)},
        {"seed", std::to_string(c.seed)},
        {"samples", std::to_string(c.samples)},
        {"subcollections", std::to_string(c.subcollections)},
        {"K", std::to_string(c.K)},
        {"set_size", std::to_string(c.set_size)},
        {"box_width", std::to_string(c.box_width)},
        {"zeta", join(c.zeta)},
        {"xi_star", format_number(c.xi_star)},
        {"tolerance", format_number(c.tolerance)},
        {"audit_tolerance", format_number(c.audit_tolerance)},
        {"orthogonality_ceiling", format_number(c.orthogonality_ceiling)},
        {"ascent_steps", std::to_string(c.ascent_steps)},
        {"ascent_restarts", std::to_string(c.ascent_restarts)},
        {"power_restarts", std::to_string(c.power_restarts)},
        {"output", c.output},
    };
}

void validate(const ExperimentConfig& c) {
    if (c.name.empty() || c.name.find('/') != std::string::npos) throw ConfigError("name", "must be a plain file stem");
    if (c.symbol.n() != c.n) throw ConfigError("n", "differs from the symbol's dimension");
    if (!(c.tolerance > 0.0)) throw ConfigError("tolerance", "must be positive");
    if (c.R.empty()) throw ConfigError("R", "needs at least one scale");
    for (double R : c.R)
        if (!(R > 0.0)) throw ConfigError("R", "scales must be positive");

    const bool opnorm_kind =
        c.kind == ExperimentKind::scaling || c.kind == ExperimentKind::transfer || c.kind == ExperimentKind::maximal;
    if (opnorm_kind) {
        if (c.n != 1) throw ConfigError("symbol", "operator-norm experiments are implemented for n = 1");
        if (c.R.size() < 3) throw ConfigError("R", "a scaling fit needs at least three scales");
        for (std::size_t i = 0; i < c.R.size(); ++i) {
            if (!is_power_of_two(c.R[i])) throw ConfigError("R", "scales must be powers of two");
            if (i > 0 && !(c.R[i] > c.R[i - 1])) throw ConfigError("R", "scales must increase");
        }
        if (!(c.q >= 1.0)) throw ConfigError("q", "must be >= 1");
        if (!(c.r >= 1.0)) throw ConfigError("r", "must be >= 1");
        if (!(c.dx > 0.0) || c.dx > 1.0) throw ConfigError("dx", "must lie in (0, 1]");
        if (c.power_restarts < 1) throw ConfigError("power_restarts", "must be >= 1");
        if (c.ascent_restarts < 1) throw ConfigError("ascent_restarts", "must be >= 1");
    }
    if (c.kind == ExperimentKind::transfer) {
        if (!(c.q >= 2.0) || std::isinf(c.q)) throw ConfigError("q", "transfer needs 2 <= q < infinity");
        if (!(c.r >= 2.0) || std::isinf(c.r)) throw ConfigError("r", "transfer needs 2 <= r < infinity");
        if (!(c.r_tilde > c.r)) throw ConfigError("r_tilde", "transfer needs r_tilde > r");
    }
    if (c.kind == ExperimentKind::maximal) {
        if (!std::isinf(c.r)) throw ConfigError("r", "the maximal experiment needs r = inf");
        if (!(c.r_tilde > 1.0) || std::isinf(c.r_tilde)) throw ConfigError("r_tilde", "the Sobolev display needs a finite r_tilde > 1");
    }
    if (c.kind == ExperimentKind::wavepacket_audit) {
        if (c.samples < 1) throw ConfigError("samples", "needs at least one random field");
        if (c.grid_N < 2 || (c.grid_N & (c.grid_N - 1)) != 0) throw ConfigError("grid.N", "must be a power of two");
        if (!(c.grid_L > 0.0)) throw ConfigError("grid.L", "must be positive");
        const Grid g = Grid::make(c.n, c.grid_N, c.grid_L);
        for (double R : c.R) {
            try {
                (void)PartitionPair::build(R, g);
            } catch (const std::exception& e) {
                throw ConfigError("R", e.what());
            }
        }
    }
    if (c.kind == ExperimentKind::sparse_audit) {
        if (c.samples < 1) throw ConfigError("samples", "needs at least one cube set");
        if (c.K < 1) throw ConfigError("K", "must be >= 1");
        if (c.set_size < 1) throw ConfigError("set_size", "must be >= 1");
        if (c.box_width < 1) throw ConfigError("box_width", "must be >= 1");
        double cells = 1.0;
        for (int i = 0; i <= c.n; ++i) cells *= static_cast<double>(c.box_width);
        if (cells < static_cast<double>(c.set_size)) throw ConfigError("set_size", "exceeds the number of cubes in the box");
    }
    if (c.kind == ExperimentKind::decay_audit) {
        if (c.n > 2) throw ConfigError("symbol", "surface quadrature supports n <= 2");
        if (c.zeta.size() < 2) throw ConfigError("zeta", "needs at least two frequencies");
        for (double z : c.zeta)
            if (!(z > 0.0)) throw ConfigError("zeta", "frequencies must be positive");
        if (!(c.xi_star > Sector::r_inner && c.xi_star < Sector::r_outer)) throw ConfigError("xi_star", "must lie inside the sector");
    }
}

}  // namespace kato
