#include "kato/fft.hpp"
#include "kato/propagator.hpp"
#include "kato/recipes.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>

using namespace kato;
using kato::testing::max_abs_diff;
using kato::testing::noise_field;
using kato::testing::rel_l2_diff;

namespace {

const SymbolSpec schrodinger = SymbolSpec::power(2.0, 1);

Field gaussian(const Grid& g, double w) {
    Field f(g);
    for (std::size_t j = 0; j < g.N; ++j) f[j] = std::exp(-g.x(j) * g.x(j) / (2.0 * w * w));
    return f;
}

}  // namespace

// The oracle itself first: closed form against direct oscillatory quadrature.
TEST_CASE("closed-form Gaussian matches oscillatory quadrature") {
    const double w = 1.0, t = 0.5;
    auto fhat = [w](double xi) { return cplx(w * std::sqrt(2.0 * std::numbers::pi) * std::exp(-0.5 * w * w * xi * xi), 0.0); };
    double worst = 0.0;
    for (double x = -20.0; x <= 20.0; x += 0.37)
        worst = std::max(worst, std::abs(oscillatory_quadrature(fhat, schrodinger, x, t, -40.0, 40.0) - gaussian_solution(x, t, w)));
    CHECK(worst <= 1e-10);
    CHECK(std::abs(gaussian_solution(0.3, 0.0, w) - std::exp(-0.045)) <= 1e-15);
}

TEST_CASE("spectral propagation of a unit Gaussian at t = 0.5") {
    const Grid g = Grid::make(1, 1024, 64.0);
    const SpacetimeField u = propagate(gaussian(g, 1.0), schrodinger, {0.5});
    double worst = 0.0;
    for (std::size_t j = 0; j < g.N; ++j) worst = std::max(worst, std::abs(u.slice(0)[j] - gaussian_solution(g.x(j), 0.5, 1.0)));
    CHECK(worst <= 1e-6);
}

TEST_CASE("t = 0 reproduces the input") {
    const Grid g = Grid::make(1, 256, 32.0);
    const Field f = noise_field(g, 1);
    const SpacetimeField u = propagate(f, schrodinger, {0.0});
    CHECK(max_abs_diff(cvec(u.slice(0), u.slice(0) + g.N), f.data) <= 1e-13);
}

TEST_CASE("energy identity at every time") {
    const Grid g = Grid::make(1, 1024, 256.0);
    const Field f = noise_field(g, 2);
    const double e0 = l2_norm(f);
    const SpacetimeField u = propagate(f, schrodinger, uniform_times(-50.0, 400.0, 64));
    double worst = 0.0;
    for (std::size_t s = 0; s < u.slices(); ++s) worst = std::max(worst, std::abs(l2_norm(u.slice_field(s)) - e0) / e0);
    CHECK(worst <= 1e-12);
}

TEST_CASE("propagation commutes with grid translations") {
    const Grid g = Grid::make(1, 256, 64.0);
    const Field f = make_field(g, RandomBandlimitedRecipe{{BandRegion::Kind::ball, 3.0}, 4});
    Field fs(g);
    const std::size_t shift = 17;
    for (std::size_t j = 0; j < g.N; ++j) fs[(j + shift) % g.N] = f[j];
    const rvec times = {0.3, 2.0, 11.0};
    const SpacetimeField u = propagate(f, schrodinger, times), us = propagate(fs, schrodinger, times);
    double worst = 0.0;
    for (std::size_t s = 0; s < times.size(); ++s)
        for (std::size_t j = 0; j < g.N; ++j) worst = std::max(worst, std::abs(us.slice(s)[(j + shift) % g.N] - u.slice(s)[j]));
    CHECK(worst <= 1e-13);
}

TEST_CASE("U vanishes on data away from the sector") {
    const Grid g = Grid::make(1, 512, 128.0);
    const Field f = make_field(g, RandomBandlimitedRecipe{{BandRegion::Kind::ball, 0.25}, 9});
    const SpacetimeField u = apply_U(f, schrodinger, SectorBump{}, {0.0, 5.0});
    CHECK(max_abs_diff(u.data, cvec(u.data.size())) <= 1e-15);
}

TEST_CASE("U with fhat = phi matches quadrature at t = 0") {
    const Grid g = Grid::make(1, 8192, 2048.0);
    const SectorBump bump;
    Field fh(g, Domain::frequency);
    for (std::size_t k = 0; k < g.N; ++k) {
        const double xi = g.xi(k);
        fh[k] = bump(&xi, 1);
    }
    const Field f = idft(fh);
    const SpacetimeField u = apply_U(f, schrodinger, bump, {0.0});
    auto phi_sq = [&](double xi) { return cplx(bump(&xi, 1) * bump(&xi, 1), 0.0); };
    double worst = 0.0;
    for (std::size_t j = 0; j < g.N; j += 3) {
        if (std::abs(g.x(j)) > 40.0) continue;
        worst = std::max(worst, std::abs(u.slice(0)[j] - oscillatory_quadrature(phi_sq, schrodinger, g.x(j), 0.0, 0.5, 2.0)));
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("U is linear") {
    const Grid g = Grid::make(1, 256, 64.0);
    const rvec times = {0.0, 1.5, 7.0};
    std::mt19937_64 rng(12);
    std::normal_distribution<double> nd;
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const Field f = noise_field(g, 200 + trial), h = noise_field(g, 300 + trial);
        const cplx a(nd(rng), nd(rng)), b(nd(rng), nd(rng));
        Field c(g);
        for (std::size_t j = 0; j < g.N; ++j) c[j] = a * f[j] + b * h[j];
        const SpacetimeField uc = apply_U(c, schrodinger, SectorBump{}, times);
        const SpacetimeField uf = apply_U(f, schrodinger, SectorBump{}, times), uh = apply_U(h, schrodinger, SectorBump{}, times);
        cvec lin(uc.data.size());
        for (std::size_t i = 0; i < lin.size(); ++i) lin[i] = a * uf.data[i] + b * uh.data[i];
        worst = std::max(worst, rel_l2_diff(uc.data, lin));
    }
    CHECK(worst <= 1e-13);
}

TEST_CASE("U slices keep their spectrum inside the sector") {
    const Grid g = Grid::make(2, 64, 64.0);
    const Field f = noise_field(g, 21);
    const SpacetimeField u = apply_U(f, SymbolSpec::power(2.0, 2), SectorBump{}, {0.0, 3.0, 20.0});
    for (std::size_t s = 0; s < u.slices(); ++s) CHECK(sector_mass_fraction(u.slice_field(s)) >= 1.0 - 1e-12);
}

TEST_CASE("Bessel multipliers") {
    const Grid g = Grid::make(1, 128, 20.0);
    const Field f = noise_field(g, 3);
    CHECK(max_abs_diff(bessel(f, 0.0).data, f.data) <= 1e-12);
    CHECK(rel_l2_diff(bessel(bessel(f, 1.0), -1.0).data, f.data) <= 1e-12);
    CHECK(rel_l2_diff(bessel(bessel(f, 0.7), -1.9).data, bessel(f, -1.2).data) <= 1e-12);

    Field wave(g);
    const double xi0 = g.xi(6);
    for (std::size_t j = 0; j < g.N; ++j) wave[j] = std::exp(cplx(0.0, xi0 * g.x(j)));
    const Field b = bessel(wave, 1.5);
    const double factor = std::pow(1.0 + xi0 * xi0, 0.75);
    for (std::size_t j = 0; j < g.N; ++j) CHECK(std::abs(b[j] - factor * wave[j]) <= 1e-12);
}

TEST_CASE("Littlewood-Paley shells") {
    const Grid g = Grid::make(1, 512, 64.0);
    const Field f = noise_field(g, 4);
    const int top = lp_top_shell(g);
    Field sum(g);
    for (int k = 0; k <= top; ++k) {
        const Field p = lp_project(f, k);
        for (std::size_t j = 0; j < g.N; ++j) sum[j] += p[j];
    }
    CHECK(rel_l2_diff(sum.data, f.data) <= 1e-10);
    CHECK_THROWS_AS(lp_project(f, top + 2), RangeError);

    Field one(g);
    for (auto& z : one.data) z = 1.0;
    CHECK(rel_l2_diff(lp_project(one, 0).data, one.data) <= 1e-12);
    CHECK(l2_norm(lp_project(one, 1)) <= 1e-12);

    // psi_3 equals 1 only at |xi| = 8, so a wave there sits entirely in shell 3.
    const Grid h = Grid::make(1, 1024, 16.0 * std::numbers::pi);
    Field wave(h);
    for (std::size_t j = 0; j < h.N; ++j) wave[j] = std::exp(cplx(0.0, 8.0 * h.x(j)));
    CHECK(rel_l2_diff(lp_project(wave, 3).data, wave.data) <= 1e-12);
    for (int k : {0, 1, 2, 4, 5}) CHECK(l2_norm(lp_project(wave, k)) <= 1e-12 * l2_norm(wave));
}

TEST_CASE("rescaling identity") {
    const Grid g = Grid::make(1, 1024, 256.0);
    const Field f = make_field(g, RandomBandlimitedRecipe{{}, 5});
    const rvec times = {0.0, 1.0, 4.0};
    const RescaleResult r0 = rescale_check(f, schrodinger, 0, times);
    CHECK(r0.mismatch <= 1e-12);
    const RescaleResult r1 = rescale_check(f, schrodinger, 1, times);
    CHECK(r1.mismatch <= 1e-6);
    CHECK(r1.space_scale == 0.5);
    const RescaleResult r2 = rescale_check(f, schrodinger, 2, times);
    CHECK(r2.time_scale == doctest::Approx(1.0 / 16.0).epsilon(1e-15));
    CHECK(r2.mismatch <= 1e-6);
    CHECK_THROWS_AS(rescale_check(make_field(Grid::make(1, 16, 64.0), GaussianRecipe{}), schrodinger, 1, times), RangeError);
}

TEST_CASE("time sampling resolves the fastest phase") {
    const double rate = 4.0;
    const double dt = time_step_rule(rate);
    CHECK(rate * dt < std::numbers::pi / 4.0);
    const TimeSampling s = sample_window(32.0, 128.0, rate);
    CHECK(s.times.front() == 32.0);
    CHECK(s.times.back() == doctest::Approx(128.0));
    CHECK(rate * s.dt < std::numbers::pi / 4.0);
    CHECK_FALSE(s.capped);
    CHECK(sample_window(0.0, 1e6, rate, 1000).capped);
    const auto w = local_window(8.0, 2.0);
    CHECK(w.first == 32.0);
    CHECK(w.second == 128.0);
}
