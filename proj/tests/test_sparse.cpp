#include "kato/sparse.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <numeric>
#include <random>
#include <set>

using namespace kato;

namespace {

SparseFamily family(std::vector<LatticePoint> centers, std::int64_t H, unsigned gamma = 2) {
    SparseFamily f;
    f.centers = std::move(centers);
    f.radius = H;
    f.gamma = gamma;
    return f;
}

// Independent check of the cover: every member lies in some ball of its level.
bool covered(const CubeSet& E, const SparseLevel& lvl) {
    for (std::size_t i : lvl.members) {
        bool in = false;
        for (const auto& f : lvl.families)
            for (const auto& c : f.centers)
                if (distance_sq(E[i], c) <= lvl.cover_radius * lvl.cover_radius) in = true;
        if (!in) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("sparsity threshold (3 * 10)^2 = 900") {
    CHECK(sparsity_separation(3, 10, 2) == 900);
    CHECK(is_sparse(family({{0, 0}, {900, 0}, {0, 900}}, 10)));
    CHECK_FALSE(is_sparse(family({{0, 0}, {899, 0}, {0, 900}}, 10)));
    CHECK(is_sparse(family({{0, 0}, {540, 720}, {-900, 0}}, 10)));  // 3-4-5 triangle: exactly 900
}

TEST_CASE("singletons are always sparse") {
    CHECK(is_sparse(family({{5, -7}}, 1000000)));
}

TEST_CASE("two centres one short of (2H)^gamma are not sparse") {
    const std::int64_t H = 10, need = 400;
    CHECK_FALSE(is_sparse(family({{0, 0}, {need - 1, 0}}, H)));
    CHECK(is_sparse(family({{0, 0}, {need, 0}}, H)));
}

TEST_CASE("gamma comes from the decay rate") {
    const Rational rho = surface_decay_rate(1);
    CHECK(rho.num == 1);
    CHECK(rho.den == 2);
    const Rational g = gamma_from_rho(1, rho);
    CHECK(g.num == 2);
    CHECK(g.den == 1);
    const Rational g2 = gamma_from_rho(2, surface_decay_rate(2));
    CHECK(g2.num == 2);
    CHECK(g2.den == 1);
    CHECK_THROWS(gamma_from_rho(1, {0, 1}));
}

TEST_CASE("single cube decomposes into one singleton family") {
    const CubeSet E = CubeSet::make(2, {{3, 4}});
    const SparseDecomposition d = sparse_decompose(E, 3);
    std::size_t nonempty = 0;
    for (const auto& l : d.levels)
        if (!l.members.empty()) {
            ++nonempty;
            CHECK(l.k == 1);
            CHECK(l.families.size() == 1);
            CHECK(l.families[0].centers.size() == 1);
        }
    CHECK(nonempty == 1);
    CHECK(audit_sparse(E, d).pass());
}

TEST_CASE("K = 1 puts everything in E_1") {
    const CubeSet E = CubeSet::random(2, 40, 1000, 2);
    const SparseDecomposition d = sparse_decompose(E, 1);
    REQUIRE(d.levels.size() == 1);
    CHECK(d.levels[0].members.size() == E.size());
    CHECK(d.levels[0].H == BigInt(E.size()) * BigInt(E.size()));
    CHECK(audit_sparse(E, d).pass());
}

TEST_CASE("random 64-cube sets in a 10^6 box pass the exhaustive audit") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const CubeSet E = CubeSet::random(2, 64, 1000000, seed);
        const SparseDecomposition d = sparse_decompose(E, 3);
        const SparseAudit a = audit_sparse(E, d);
        CHECK(a.partition);
        CHECK(a.cover);
        CHECK(a.sparse);
        CHECK(a.family_budget);
        // independent re-audit
        std::vector<int> seen(E.size(), 0);
        for (const auto& l : d.levels) {
            for (std::size_t i : l.members) ++seen[i];
            CHECK(covered(E, l));
            for (const auto& f : l.families) CHECK(is_sparse(f));
        }
        for (int s : seen) CHECK(s == 1);
    }
}

TEST_CASE("clustered sets use the higher levels") {
    std::vector<LatticePoint> pts;
    for (std::int64_t i = 0; i < 8; ++i)
        for (std::int64_t j = 0; j < 8; ++j) pts.push_back({i, j});
    pts.push_back({5000000, 0});
    const CubeSet E = CubeSet::make(2, pts);
    const SparseDecomposition d = sparse_decompose(E, 3);
    CHECK(d.levels[0].members.size() == 1);
    CHECK(audit_sparse(E, d).pass());
}

TEST_CASE("scale overflow names the level") {
    const CubeSet E = CubeSet::random(2, 128, 1000, 4);
    try {
        sparse_decompose(E, 20);
        FAIL("expected a scale error");
    } catch (const ScaleError& e) {
        CHECK(std::string(e.what()).find("H_") != std::string::npos);
    }
}

TEST_CASE("columns by height") {
    const CubeSet two = CubeSet::make(2, {{0, 0}, {0, 5}, {1, 5}, {2, 5}, {3, 5}});
    const auto c = columns_by_height(two);
    REQUIRE(c.size() == 2);
    CHECK(c.count(1) == 1);
    CHECK(c.count(4) == 1);

    std::vector<LatticePoint> box;
    for (std::int64_t t = 0; t < 8; ++t)
        for (std::int64_t x = 0; x < 5; ++x) box.push_back({t, x});
    const auto b = columns_by_height(CubeSet::make(2, box));
    REQUIRE(b.size() == 1);
    CHECK(b.begin()->first == 8);
    CHECK(b.begin()->second.size() == 40);

    const CubeSet E = CubeSet::random(3, 300, 8, 8);
    std::size_t total = 0;
    std::set<std::size_t> all;
    for (const auto& [h, members] : columns_by_height(E)) {
        total += members.size();
        all.insert(members.begin(), members.end());
        std::map<std::vector<std::int64_t>, std::size_t> count;
        for (std::size_t i : members) count[{E[i][1], E[i][2]}]++;
        for (const auto& [base, n] : count) {
            CHECK(n >= h);
            CHECK(n < 2 * h);
        }
    }
    CHECK(total == E.size());
    CHECK(all.size() == E.size());
    CHECK_THROWS(CubeSet::random(3, 300, 6, 8));
}

TEST_CASE("epsilon budget") {
    const EpsilonBudget b = epsilon_budget(0.01, 1.0, 2.0);
    CHECK(b.K == static_cast<unsigned>(std::ceil(std::log(100.0))));
    CHECK(b.delta == doctest::Approx(1.0 / b.K + 0.01 * std::pow(2.0, b.K)));
    CHECK_THROWS(epsilon_budget(0.01, 0.5, 2.0));
}

TEST_CASE("cube set CSV round trip and errors") {
    const CubeSet E = CubeSet::random(2, 20, 100, 3);
    const CubeSet F = CubeSet::parse_csv(E.to_csv());
    CHECK(F.points() == E.points());
    CHECK_THROWS(CubeSet::parse_csv("1,2\n1,x\n"));
    CHECK_THROWS(CubeSet::parse_csv("1,2\n1,2\n"));
    CHECK_THROWS(CubeSet::parse_csv("1,2\n3\n"));
}

TEST_CASE("JSON tree carries levels, families and the audit") {
    const CubeSet E = CubeSet::random(2, 30, 100000, 6);
    const SparseDecomposition d = sparse_decompose(E, 3);
    const auto j = nlohmann::json::parse(sparse_to_json(d, audit_sparse(E, d)));
    CHECK(j.at("K") == 3);
    CHECK(j.at("levels").size() == 3);
    CHECK(j.at("audit").at("partition") == true);
    std::size_t members = 0;
    for (const auto& l : j.at("levels")) members += l.at("members").size();
    CHECK(members == 30);
}
