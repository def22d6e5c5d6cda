#include "kato/sparse.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace kato {

//==============================================================================
// CubeSet
//==============================================================================

CubeSet CubeSet::make(int dim, std::vector<LatticePoint> points) {
    if (dim < 1) throw std::invalid_argument("cube set dimension must be >= 1");
    if (points.empty()) throw std::invalid_argument("cube set must contain at least one cube");
    std::set<LatticePoint> seen;
    for (const auto& p : points) {
        if (static_cast<int>(p.size()) != dim)
            throw std::invalid_argument("cube set point has " + std::to_string(p.size()) + " coordinates, expected " + std::to_string(dim));
        if (!seen.insert(p).second) throw std::invalid_argument("cube set contains a repeated point");
    }
    CubeSet c;
    c.dim_ = dim;
    c.points_ = std::move(points);
    return c;
}

CubeSet CubeSet::parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<LatticePoint> pts;
    int dim = -1;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        LatticePoint p;
        std::istringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) {
            std::size_t used = 0;
            long long v;
            try {
                v = std::stoll(cell, &used);
            } catch (const std::exception&) {
                throw std::invalid_argument("cube set line " + std::to_string(lineno) + ": '" + cell + "' is not an integer");
            }
            if (cell.find_first_not_of(" \t\r", used) != std::string::npos)
                throw std::invalid_argument("cube set line " + std::to_string(lineno) + ": '" + cell + "' is not an integer");
            p.push_back(v);
        }
        if (dim < 0) dim = static_cast<int>(p.size());
        if (static_cast<int>(p.size()) != dim)
            throw std::invalid_argument("cube set line " + std::to_string(lineno) + " has " + std::to_string(p.size()) + " coordinates");
        pts.push_back(std::move(p));
    }
    if (pts.empty()) throw std::invalid_argument("cube set file has no points");
    return make(dim, std::move(pts));
}

CubeSet CubeSet::read_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open cube set file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_csv(ss.str());
}

CubeSet CubeSet::random(int dim, std::size_t count, std::int64_t width, std::uint64_t seed) {
    if (width < 1) throw std::invalid_argument("cube set width must be >= 1");
    if (dim < 1) throw std::invalid_argument("cube set dimension must be >= 1");
    double room = 1.0;
    for (int a = 0; a < dim; ++a) room *= static_cast<double>(width);
    if (static_cast<double>(count) > room)
        throw std::invalid_argument("cannot place " + std::to_string(count) + " distinct cubes in a box of width " + std::to_string(width));
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::int64_t> coord(0, width - 1);
    std::set<LatticePoint> pts;
    while (pts.size() < count) {
        LatticePoint p(dim);
        for (auto& c : p) c = coord(rng);
        pts.insert(p);
    }
    std::vector<LatticePoint> v(pts.begin(), pts.end());
    std::shuffle(v.begin(), v.end(), rng);
    return make(dim, std::move(v));
}

std::string CubeSet::to_csv() const {
    std::ostringstream out;
    for (const auto& p : points_) {
        for (std::size_t a = 0; a < p.size(); ++a) out << (a ? "," : "") << p[a];
        out << '\n';
    }
    return out.str();
}

void CubeSet::write_csv(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write cube set file " + path);
    f << to_csv();
}

BigInt distance_sq(const LatticePoint& a, const LatticePoint& b) {
    BigInt s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const BigInt d = BigInt(a[i]) - BigInt(b[i]);
        s += d * d;
    }
    return s;
}

//==============================================================================
// Exponent bookkeeping
//==============================================================================

Rational gamma_from_rho(int n, Rational rho) {
    if (rho.num <= 0 || rho.den <= 0) throw std::invalid_argument("decay rate rho must be positive");
    std::int64_t num = static_cast<std::int64_t>(n) * rho.den, den = rho.num;
    const std::int64_t g = std::gcd(num, den);
    return {num / g, den / g};
}

Rational surface_decay_rate(int n) {
    const std::int64_t g = std::gcd<std::int64_t>(n, 2);
    return {n / g, 2 / g};
}

EpsilonBudget epsilon_budget(double eps, double C_gamma, double gamma) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
    if (!(C_gamma > std::log(gamma))) throw std::invalid_argument("C_gamma must exceed log(gamma)");
    EpsilonBudget b;
    b.K = std::max(1u, static_cast<unsigned>(std::ceil(std::log(1.0 / eps) / C_gamma)));
    b.delta = 1.0 / b.K + eps * std::pow(gamma, static_cast<double>(b.K));
    return b;
}

//==============================================================================
// Sparse families
//==============================================================================

BigInt sparsity_separation(std::size_t count, const BigInt& H, unsigned gamma) {
    return boost::multiprecision::pow(BigInt(count) * H, gamma);
}

bool is_sparse(const SparseFamily& family) {
    const std::size_t N = family.centers.size();
    if (N <= 1) return true;
    const BigInt sep = sparsity_separation(N, family.radius, family.gamma);
    const BigInt sep2 = sep * sep;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i + 1; j < N; ++j)
            if (distance_sq(family.centers[i], family.centers[j]) < sep2) return false;
    return true;
}

namespace {

bool within(const LatticePoint& a, const LatticePoint& b, const BigInt& r2) { return distance_sq(a, b) <= r2; }

BigInt ipow(const BigInt& b, std::size_t e) { return boost::multiprecision::pow(b, static_cast<unsigned>(e)); }

}  // namespace

SparseDecomposition sparse_decompose(const CubeSet& E, unsigned K, unsigned gamma) {
    if (K < 1) throw std::invalid_argument("K must be >= 1");
    if (gamma < 1) throw std::invalid_argument("gamma must be >= 1");
    const std::size_t card = E.size();
    SparseDecomposition d;
    d.K = K;
    d.gamma = gamma;
    d.cardinality = card;

    std::vector<bool> assigned(card, false);
    BigInt H_prev = 1;
    const BigInt cardB(card);
    for (unsigned k = 1; k <= K; ++k) {
        const BigInt H = boost::multiprecision::pow(cardB * H_prev, gamma);
        if (boost::multiprecision::msb(H) + 1 > scale_bit_cap)
            throw ScaleError("scale H_" + std::to_string(k) + " exceeds " + std::to_string(scale_bit_cap) + " bits");
        SparseLevel level;
        level.k = k;
        level.H = H;
        level.cover_radius = H_prev;

        // count^K <= |E|^k
        const BigInt H2 = H * H;
        const BigInt budget = ipow(cardB, k);
        for (std::size_t i = 0; i < card; ++i) {
            if (assigned[i]) continue;
            std::size_t count = 0;
            for (std::size_t j = 0; j < card; ++j)
                if (within(E[i], E[j], H2)) ++count;
            if (ipow(BigInt(count), K) <= budget) level.members.push_back(i);
        }
        for (auto i : level.members) assigned[i] = true;

        // Maximal H_{k-1}-separated centres among the members.
        const BigInt r2 = H_prev * H_prev;
        std::vector<LatticePoint> centers;
        for (auto i : level.members) {
            bool covered = false;
            for (const auto& c : centers)
                if (within(E[i], c, r2)) {
                    covered = true;
                    break;
                }
            if (!covered) centers.push_back(E[i]);
        }

        // First-fit into families that stay sparse at their new size.
        for (const auto& c : centers) {
            bool placed = false;
            for (auto& fam : level.families) {
                const BigInt sep = sparsity_separation(fam.centers.size() + 1, H_prev, gamma);
                const BigInt sep2 = sep * sep;
                bool ok = true;
                for (std::size_t a = 0; a < fam.centers.size() && ok; ++a) {
                    if (distance_sq(fam.centers[a], c) < sep2) ok = false;
                    for (std::size_t b = a + 1; b < fam.centers.size() && ok; ++b)
                        if (distance_sq(fam.centers[a], fam.centers[b]) < sep2) ok = false;
                }
                if (ok) {
                    fam.centers.push_back(c);
                    placed = true;
                    break;
                }
            }
            if (!placed) {
                SparseFamily f;
                f.centers.push_back(c);
                f.radius = H_prev;
                f.gamma = gamma;
                level.families.push_back(std::move(f));
            }
        }
        d.levels.push_back(std::move(level));
        H_prev = H;
    }
    return d;
}

SparseAudit audit_sparse(const CubeSet& E, const SparseDecomposition& d, unsigned c_cover) {
    SparseAudit a;
    a.c_cover = c_cover;
    std::vector<int> hits(E.size(), 0);
    a.cover = true;
    a.sparse = true;
    a.family_budget = true;
    for (const auto& lvl : d.levels) {
        for (auto i : lvl.members) {
            if (i < hits.size()) ++hits[i];
            const BigInt r2 = lvl.cover_radius * lvl.cover_radius;
            bool covered = false;
            for (const auto& fam : lvl.families) {
                for (const auto& c : fam.centers)
                    if (within(E[i], c, r2)) {
                        covered = true;
                        break;
                    }
                if (covered) break;
            }
            if (!covered) a.cover = false;
        }
        for (const auto& fam : lvl.families)
            if (fam.radius != lvl.cover_radius || !is_sparse(fam)) a.sparse = false;
        const std::size_t F = lvl.families.size();
        a.max_families = std::max(a.max_families, F);
        // F <= c |E|^{1/K}  <=>  F^K <= c^K |E|
        if (ipow(BigInt(F), d.K) > ipow(BigInt(c_cover), d.K) * BigInt(d.cardinality)) a.family_budget = false;
        a.max_family_ratio = std::max(a.max_family_ratio, static_cast<double>(F) / std::pow(static_cast<double>(d.cardinality), 1.0 / d.K));
    }
    a.partition = std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }) && d.cardinality == E.size();
    return a;
}

std::string sparse_to_json(const SparseDecomposition& d, const SparseAudit& audit) {
    using nlohmann::json;
    json root;
    root["K"] = d.K;
    root["gamma"] = d.gamma;
    root["cardinality"] = d.cardinality;
    json levels = json::array();
    for (const auto& lvl : d.levels) {
        json l;
        l["k"] = lvl.k;
        l["H"] = lvl.H.str();
        l["cover_radius"] = lvl.cover_radius.str();
        l["members"] = lvl.members;
        json fams = json::array();
        for (const auto& f : lvl.families) {
            json jf;
            jf["radius"] = f.radius.str();
            jf["separation"] = sparsity_separation(f.centers.size(), f.radius, f.gamma).str();
            jf["centers"] = f.centers;
            fams.push_back(std::move(jf));
        }
        l["families"] = std::move(fams);
        levels.push_back(std::move(l));
    }
    root["levels"] = std::move(levels);
    root["audit"] = {{"partition", audit.partition},
                     {"cover", audit.cover},
                     {"sparse", audit.sparse},
                     {"family_budget", audit.family_budget},
                     {"max_families", audit.max_families},
                     {"max_family_ratio", audit.max_family_ratio},
                     {"c_cover", audit.c_cover},
                     {"pass", audit.pass()}};
    return root.dump(2);
}

std::map<std::size_t, std::vector<std::size_t>> columns_by_height(const CubeSet& E, int time_axis) {
    if (time_axis < 0 || time_axis >= E.dim()) throw std::invalid_argument("time axis out of range");
    std::map<LatticePoint, std::vector<std::size_t>> columns;
    for (std::size_t i = 0; i < E.size(); ++i) {
        LatticePoint base = E[i];
        base.erase(base.begin() + time_axis);
        columns[base].push_back(i);
    }
    std::map<std::size_t, std::vector<std::size_t>> out;
    for (const auto& [base, idx] : columns) {
        std::size_t h = 1;
        while (2 * h <= idx.size()) h *= 2;
        auto& bucket = out[h];
        bucket.insert(bucket.end(), idx.begin(), idx.end());
    }
    for (auto& [h, v] : out) std::sort(v.begin(), v.end());
    return out;
}

}  // namespace kato
