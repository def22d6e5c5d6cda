#include "kato/symbols.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace kato;

TEST_CASE("phase of |xi|^2 at 2") {
    const Phase p = phase(SymbolSpec::power(2.0, 1), {2.0});
    CHECK(p.value == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(p.gradient[0] == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("phase of |xi|^3 at 1") {
    const Phase p = phase(SymbolSpec::power(3.0, 1), {1.0});
    CHECK(p.value == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p.gradient[0] == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("scaling xi by 2 multiplies |xi|^2 by 4") {
    const SymbolSpec s = SymbolSpec::power(2.0, 1);
    CHECK(phase(s, {2.0}).value / phase(s, {1.0}).value == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("phase at the origin is zero") {
    const Phase p = phase(SymbolSpec::power(2.0, 2), {0.0, 0.0});
    CHECK(p.value == 0.0);
    CHECK(p.gradient[0] == 0.0);
    CHECK(p.gradient[1] == 0.0);
}

TEST_CASE("phase rejects a vector of the wrong length") {
    CHECK_THROWS_AS(phase(SymbolSpec::power(2.0, 2), {1.0}), std::invalid_argument);
}

TEST_CASE("constructors reject m <= 1 and bad dimensions") {
    CHECK_THROWS(SymbolSpec::power(1.0, 1));
    CHECK_THROWS(SymbolSpec::power(2.0, 0));
    CHECK_THROWS(SymbolSpec::anisotropic(2.0, {1.0, -1.0}));
}

TEST_CASE("validate |xi|^2 with 1000 samples") {
    const ValidationReport r = validate_symbol(SymbolSpec::power(2.0, 1), 1000);
    CHECK(r.pass);
    CHECK_FALSE(r.used_ratio_form);
    CHECK(r.homogeneity_deviation <= 1e-10);
    CHECK(r.min_grad_sector == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("validate |xi|^3 with 1000 samples") {
    const ValidationReport r = validate_symbol(SymbolSpec::power(3.0, 1), 1000);
    CHECK(r.pass);
    CHECK(r.homogeneity_deviation <= 1e-10);
}

TEST_CASE("a critical point on the sector fails validation") {
    // |xi|^2 (w_2)^2 vanishes to second order along the e1 ray.
    const SymbolSpec s = SymbolSpec::angular(2.0, 2, {{1.0, {0, 2}}});
    const ValidationReport r = validate_symbol(s, 1000);
    CHECK_FALSE(r.pass);
    CHECK(r.min_grad_sector == 0.0);
}

TEST_CASE("a sign-changing symbol falls back to the ratio form") {
    // |xi|^2 w_1 is negative on the left half plane but still exactly homogeneous.
    const ValidationReport r = validate_symbol(SymbolSpec::angular(2.0, 2, {{1.0, {1, 0}}}), 1000);
    CHECK(r.used_ratio_form);
    CHECK(r.homogeneity_deviation <= 1e-10);
    CHECK(r.pass);
}

TEST_CASE("every shipped family validates at 10^4 samples") {
    const char* shipped[] = {"power,m=2,n=1", "power,m=3,n=1", "power,m=1.5,n=1", "power,m=2,n=2", "power,m=4,n=3",
                             "aniso,m=2,c=1:3", "aniso,m=3,c=2:1:1", "angular,m=2,n=2,P=1*0:0+0.25*2:0"};
    for (const char* text : shipped) {
        CAPTURE(text);
        const ValidationReport r = validate_symbol(SymbolSpec::parse(text), 10000);
        CHECK(r.pass);
        CHECK(r.homogeneity_deviation <= 1e-10);
        CHECK(r.min_grad_sector > 0.0);
    }
}

TEST_CASE("gradient agrees with central differences on 1/4 <= |xi| <= 4") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const char* text : {"power,m=2,n=2", "aniso,m=3,c=1:2", "angular,m=2.5,n=2,P=1*0:0+0.3*1:1"}) {
        const SymbolSpec s = SymbolSpec::parse(text);
        double worst = 0.0;
        for (int k = 0; k < 100; ++k) {
            const double r = 0.25 * std::pow(16.0, u(rng));
            const double th = 2.0 * M_PI * u(rng);
            std::vector<double> xi = {r * std::cos(th), r * std::sin(th)};
            const Phase p = phase(s, xi);
            const double h = 1e-6 * r;
            double err = 0.0, gn = 0.0;
            for (int i = 0; i < 2; ++i) {
                auto a = xi, b = xi;
                a[i] += h;
                b[i] -= h;
                const double fd = (phase(s, a).value - phase(s, b).value) / (2.0 * h);
                err += (fd - p.gradient[i]) * (fd - p.gradient[i]);
                gn += p.gradient[i] * p.gradient[i];
            }
            worst = std::max(worst, std::sqrt(err / gn));
        }
        CAPTURE(text);
        CHECK(worst <= 1e-6);
    }
}

TEST_CASE("homogeneity holds for the anisotropic family") {
    const SymbolSpec s = SymbolSpec::anisotropic(3.0, {1.0, 2.0});
    const std::vector<double> xi = {0.7, -1.3};
    for (double lam : {0.1, 0.5, 3.0, 17.0}) {
        const double lhs = phase(s, {lam * xi[0], lam * xi[1]}).value;
        CHECK(lhs == doctest::Approx(std::pow(lam, 3.0) * phase(s, xi).value).epsilon(1e-12));
    }
}

TEST_CASE("parse round-trips through describe") {
    for (const char* text : {"power,m=2,n=1", "aniso,m=2,c=1:3", "angular,m=2,n=2,P=1*0:0+0.5*0:2"}) {
        const SymbolSpec a = SymbolSpec::parse(text);
        const SymbolSpec b = SymbolSpec::parse(a.describe());
        CHECK(a.describe() == b.describe());
        CHECK(a.m() == b.m());
        CHECK(a.n() == b.n());
    }
    CHECK_THROWS(SymbolSpec::parse("bessel,m=2"));
}

TEST_CASE("sector membership") {
    const double in[2] = {1.0, 0.0}, rim[2] = {0.5, 0.0}, wide[2] = {0.0, 1.0}, small[2] = {0.3, 0.0};
    CHECK(Sector::contains(in, 2));
    CHECK(Sector::contains(rim, 2));
    CHECK_FALSE(Sector::contains(wide, 2));
    CHECK_FALSE(Sector::contains(small, 2));
    for (const auto& xi : sector_lattice(2, 9, 9)) CHECK(Sector::contains(xi.data(), 2));
}
