#include "kato/exponents.hpp"
#include "kato/sparse.hpp"
#include "kato/surface.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace kato;

namespace {

const SymbolSpec schrodinger = SymbolSpec::power(2.0, 1);
const SurfacePatch patch = SurfacePatch::make(schrodinger);

SpacetimeField windowed(const Grid& g, const rvec& times, const std::function<cplx(double, double)>& u) {
    SpacetimeField f(g, times);
    for (std::size_t s = 0; s < times.size(); ++s)
        for (std::size_t j = 0; j < g.N; ++j) f.slice(s)[j] = u(times[s], g.x(j));
    return f;
}

}  // namespace

TEST_CASE("surface weight is at least one") {
    for (double xi = 0.5; xi <= 2.0; xi += 0.01) CHECK(patch.weight(&xi) >= 1.0);
}

TEST_CASE("surface measure at zeta = 0") {
    // int_{1/2}^{2} sqrt(1 + 4 xi^2) d xi in closed form
    auto F = [](double x) { return 0.5 * x * std::sqrt(1.0 + 4.0 * x * x) + 0.25 * std::asinh(2.0 * x); };
    const double exact = F(2.0) - F(0.5);
    CHECK(std::abs(surface_measure(patch) - exact) <= 1e-8 * exact);
    CHECK(std::abs(surface_fourier(patch, {0.0, 0.0}) - exact) <= 1e-8 * exact);
    CHECK(std::abs(surface_measure(patch, 64) - surface_measure(patch, 8)) <= 1e-12 * exact);
}

TEST_CASE("surface Fourier transform is conjugate symmetric") {
    for (double a : {3.0, 17.0, 120.0}) {
        const cplx p = surface_fourier(patch, {a, -0.4 * a});
        const cplx m = surface_fourier(patch, {-a, 0.4 * a});
        CHECK(std::abs(p - std::conj(m)) <= 1e-12 * std::max(1.0, std::abs(p)));
    }
}

TEST_CASE("decay along the normal at a stationary direction is |zeta|^{-1/2}") {
    const std::vector<double> nu = surface_normal(patch, {1.25});
    std::vector<std::pair<double, double>> s;
    for (double z : {16.0, 32.0, 64.0, 128.0, 256.0}) s.emplace_back(z, std::abs(surface_fourier(patch, {z * nu[0], z * nu[1]})));
    const double slope = loglog_slope(s);
    MESSAGE("normal-direction slope " << slope);
    CHECK(std::abs(slope + 0.5) <= 0.1);
}

TEST_CASE("restriction of a windowed plane wave peaks at the matching surface point") {
    const Grid g = Grid::make(1, 256, 128.0);
    const std::size_t k0 = 30;  // xi = 30 * 2 pi / 128
    const double xi0 = g.xi(k0), tau0 = xi0 * xi0;
    const SpacetimeField f = windowed(g, uniform_times(-30.0, 30.0, 240), [&](double t, double x) {
        return std::exp(-t * t / 200.0 - x * x / 400.0) * std::exp(cplx(0.0, x * xi0 + t * tau0));
    });
    const Restriction r = restriction(f, patch);
    std::size_t arg = 0;
    for (std::size_t i = 0; i < r.values.size(); ++i)
        if (std::abs(r.values[i]) > std::abs(r.values[arg])) arg = i;
    CHECK(r.nodes[arg] == k0);
}

TEST_CASE("restriction and extension are adjoint") {
    const Grid g = Grid::make(1, 128, 64.0);
    const rvec times = uniform_times(-8.0, 8.0, 64);
    std::mt19937_64 rng(23);
    std::normal_distribution<double> nd;
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const double a = nd(rng), b = nd(rng), c = 0.5 + std::abs(nd(rng));
        const SpacetimeField f = windowed(g, times, [&](double t, double x) {
            return std::exp(-(x - a) * (x - a) / 20.0 - t * t / 8.0) * std::exp(cplx(0.0, c * x + b * t));
        });
        const Restriction r = restriction(f, patch);
        cvec h(r.nodes.size());
        for (auto& z : h) z = cplx(nd(rng), nd(rng));
        const cplx lhs = surface_pairing(r, h);
        const cplx rhs = spacetime_pairing(f, extension(r, h, schrodinger, times));
        worst = std::max(worst, std::abs(lhs - rhs) / std::abs(lhs));
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("restriction of real even data is real") {
    const Grid g = Grid::make(1, 128, 64.0);
    const SpacetimeField f = windowed(g, uniform_times(-6.0, 6.0, 48), [](double t, double x) {
        return cplx(std::exp(-t * t / 4.0 - x * x / 9.0) * (1.0 + 0.3 * std::cos(t * x)), 0.0);
    });
    const Restriction r = restriction(f, patch);
    double scale = 0.0, imag = 0.0;
    for (const cplx& z : r.values) {
        scale = std::max(scale, std::abs(z));
        imag = std::max(imag, std::abs(z.imag()));
    }
    CHECK(imag <= 1e-12 * scale);
}

TEST_CASE("leakage warning for data touching the box edge") {
    const Grid g = Grid::make(1, 64, 32.0);
    const SpacetimeField f = windowed(g, uniform_times(0.0, 1.0, 8), [](double, double) { return cplx(1.0, 0.0); });
    CHECK(restriction(f, patch).leaking);
}

TEST_CASE("decoupling: single ball") {
    const auto balls = random_sparse_balls(1, 8.0, 2, 3);
    const DecouplingResult r = decoupling_check(patch, balls, 8.0, 2.0);
    MESSAGE("single-ball constant " << r.ratio);
    CHECK(r.ratio > 0.0);
    CHECK(r.ratio == doctest::Approx(r.max_single).epsilon(1e-12));
}

TEST_CASE("decoupling at p = 1 is bounded by the worst single ball") {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const auto balls = random_sparse_balls(4, 8.0, 2, seed);
        const DecouplingResult r = decoupling_check(patch, balls, 8.0, 1.0);
        CHECK(r.ratio <= r.max_single * (1.0 + 1e-12));
    }
}

TEST_CASE("decoupling over 10 sparse configurations at p = 2") {
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto balls = random_sparse_balls(4, 8.0, 2, 1000 + seed);
        const DecouplingResult r = decoupling_check(patch, balls, 8.0, 2.0);
        worst = std::max(worst, r.ratio / r.max_single);
    }
    MESSAGE("worst ratio / single-ball constant " << worst);
    CHECK(worst <= 2.0);
}

TEST_CASE("non-sparse balls are refused") {
    std::vector<DecouplingBall> balls = {{{0.0, 0.0}, 1}, {{100.0, 0.0}, 2}};
    CHECK_THROWS_AS(decoupling_check(patch, balls, 8.0, 2.0), PreconditionError);
    CHECK_THROWS_AS(decoupling_check(patch, balls, 8.0, 3.0), std::invalid_argument);
}

TEST_CASE("random sparse balls are sparse") {
    const auto balls = random_sparse_balls(4, 8.0, 2, 9);
    SparseFamily fam;
    fam.radius = 8;
    for (const auto& b : balls) fam.centers.push_back({std::int64_t(b.center[0]), std::int64_t(b.center[1])});
    CHECK(is_sparse(fam));
}
