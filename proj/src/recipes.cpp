#include "kato/recipes.hpp"

#include "kato/fft.hpp"
#include "kato/field_io.hpp"
#include "kato/mollifier.hpp"
#include "kato/symbols.hpp"

#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

namespace kato {

namespace {

void normalise(Field& f) {
    const double nrm = l2_norm(f);
    if (nrm == 0.0) throw std::runtime_error("recipe produced an identically zero field on this grid");
    for (auto& z : f.data) z /= nrm;
}

Field gaussian(const Grid& g, const GaussianRecipe& r) {
    if (!(r.width > 0.0)) throw std::invalid_argument("gaussian width must be positive");
    std::vector<double> c = r.center;
    if (c.empty()) c.assign(g.n, 0.0);
    if (static_cast<int>(c.size()) != g.n) throw std::invalid_argument("gaussian centre has wrong dimension");
    Field f(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto x = g.point(i);
        double d2 = 0.0;
        for (int a = 0; a < g.n; ++a) d2 += (x[a] - c[a]) * (x[a] - c[a]);
        f[i] = std::exp(-d2 / (2.0 * r.width * r.width));
    }
    return f;
}

Field random_bandlimited(const Grid& g, const RandomBandlimitedRecipe& r) {
    std::mt19937_64 rng(r.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    SectorBump bump;
    Field fh(g, Domain::frequency);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        const auto xi = g.frequency(i);
        double w;
        if (r.region.kind == BandRegion::Kind::sector) {
            w = bump(xi.data(), g.n);
        } else {
            double s = 0.0;
            for (double v : xi) s += v * v;
            w = std::sqrt(s) <= r.region.radius ? 1.0 : 0.0;
        }
        fh[i] = w * cplx(re, im);
    }
    Field f = idft(fh);
    normalise(f);
    return f;
}

Field knapp(const Grid& g, const KnappRecipe& k) {
    if (!(k.R >= 1.0)) throw std::invalid_argument("knapp scale R must be >= 1");
    const double along = 1.0 / k.R;
    const double across = 1.0 / (k.R * k.R);
    const double needed = g.n == 1 ? along : across;
    if (g.dxi() > needed / 4.0)
        throw std::invalid_argument("grid frequency spacing " + std::to_string(g.dxi()) + " cannot resolve a knapp plate of width " +
                                    std::to_string(needed) + "; increase L");
    Field fh(g, Domain::frequency);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto xi = g.frequency(i);
        double w = mollifier((xi[0] - 1.0) / (0.5 * along));
        for (int a = 1; a < g.n && w != 0.0; ++a) w *= mollifier(xi[a] / (0.5 * across));
        fh[i] = w;
    }
    Field f = idft(fh);
    normalise(f);
    return f;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

Field make_field(const Grid& grid, const FieldRecipe& recipe) {
    return std::visit(
        [&](const auto& r) -> Field {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, GaussianRecipe>) return gaussian(grid, r);
            if constexpr (std::is_same_v<T, RandomBandlimitedRecipe>) return random_bandlimited(grid, r);
            if constexpr (std::is_same_v<T, KnappRecipe>) return knapp(grid, r);
            if constexpr (std::is_same_v<T, FileRecipe>) {
                Field f = read_field(r.path);
                if (!(f.grid == grid)) throw std::invalid_argument("field file " + r.path + " is on a different grid");
                return f;
            }
        },
        recipe);
}

FieldRecipe parse_recipe(const std::string& text) {
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (kind == "file") return FileRecipe{rest};
    std::map<std::string, std::string> kv;
    if (!rest.empty())
        for (const auto& part : split(rest, ',')) {
            const auto eq = part.find('=');
            if (eq == std::string::npos) throw std::invalid_argument("recipe parameter without '=': " + part);
            kv[part.substr(0, eq)] = part.substr(eq + 1);
        }
    if (kind == "gaussian") {
        GaussianRecipe g;
        if (kv.count("w")) g.width = std::stod(kv["w"]);
        if (kv.count("c"))
            for (const auto& s : split(kv["c"], ':')) g.center.push_back(std::stod(s));
        return g;
    }
    if (kind == "random") {
        RandomBandlimitedRecipe r;
        if (kv.count("seed")) r.seed = std::stoull(kv["seed"]);
        if (kv.count("region")) {
            const auto parts = split(kv["region"], ':');
            if (parts[0] == "sector") {
                r.region.kind = BandRegion::Kind::sector;
            } else if (parts[0] == "ball") {
                r.region.kind = BandRegion::Kind::ball;
                if (parts.size() > 1) r.region.radius = std::stod(parts[1]);
            } else {
                throw std::invalid_argument("unknown band region " + parts[0]);
            }
        }
        return r;
    }
    if (kind == "knapp") {
        KnappRecipe k;
        if (kv.count("R")) k.R = std::stod(kv["R"]);
        return k;
    }
    throw std::invalid_argument("unknown field recipe '" + kind + "'");
}

double sector_mass_fraction(const Field& f) {
    const Field fh = f.domain == Domain::frequency ? f : dft(f);
    double in = 0.0, all = 0.0;
    for (std::size_t i = 0; i < fh.size(); ++i) {
        const auto xi = fh.grid.frequency(i);
        const double m = std::norm(fh[i]);
        all += m;
        if (Sector::contains(xi.data(), fh.grid.n)) in += m;
    }
    return all > 0.0 ? in / all : 0.0;
}

}  // namespace kato
