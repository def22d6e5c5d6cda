#include "kato/fft.hpp"
#include "kato/field_io.hpp"
#include "kato/grid.hpp"
#include "kato/recipes.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <numbers>

using namespace kato;
using kato::testing::noise_field;

TEST_CASE("grid construction checks") {
    CHECK_THROWS(Grid::make(1, 6, 1.0));
    CHECK_THROWS(Grid::make(1, 4, 1.0));
    CHECK_THROWS(Grid::make(1, 64, 0.0));
    CHECK_THROWS(Grid::make(4, 8, 1.0));
    const Grid g = Grid::make(1, 16, 8.0);
    CHECK(g.dx() == 0.5);
    // symmetric nodes plus a single Nyquist node at -N/2
    long lo = 0, hi = 0;
    for (std::size_t k = 0; k < g.N; ++k) {
        lo = std::min(lo, g.signed_index(k));
        hi = std::max(hi, g.signed_index(k));
    }
    CHECK(lo == -8);
    CHECK(hi == 7);
    CHECK(g.xi(1) == doctest::Approx(2.0 * std::numbers::pi / 8.0));
}

TEST_CASE("constant field transforms to a single node at zero") {
    const Grid g = Grid::make(1, 64, 16.0);
    Field f(g);
    for (auto& z : f.data) z = 1.0;
    const Field F = dft(f);
    CHECK(std::abs(F[0] - cplx(16.0, 0.0)) <= 1e-12);
    for (std::size_t k = 1; k < g.N; ++k) CHECK(std::abs(F[k]) <= 1e-12);
}

TEST_CASE("plane wave transforms to its node") {
    const Grid g = Grid::make(2, 32, 10.0);
    const std::size_t target = 5 * g.N + 3;  // (k1, k2) = (5, 3)
    const auto xi0 = g.frequency(target);
    Field f(g);
    for (std::size_t j = 0; j < g.size(); ++j) {
        const auto x = g.point(j);
        f[j] = std::exp(cplx(0.0, x[0] * xi0[0] + x[1] * xi0[1]));
    }
    const Field F = dft(f);
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (k == target)
            CHECK(std::abs(F[k]) == doctest::Approx(g.L * g.L).epsilon(1e-12));
        else
            CHECK(std::abs(F[k]) <= 1e-10);
    }
}

TEST_CASE("dft round trip") {
    for (int n = 1; n <= 3; ++n) {
        const Grid g = Grid::make(n, n == 3 ? 16 : 64, 12.0);
        const Field f = noise_field(g, 11 + n);
        const Field back = idft(dft(f));
        CHECK(kato::testing::rel_l2_diff(back.data, f.data) <= 1e-12);
    }
}

TEST_CASE("Parseval on 100 random fields") {
    double worst = 0.0;
    for (int s = 0; s < 100; ++s) {
        const Grid g = Grid::make(1 + s % 2, s % 2 ? 32 : 256, 7.0 + s);
        const Field f = noise_field(g, 100 + s);
        const double a = l2_norm_sq(f), b = l2_norm_sq(dft(f));
        worst = std::max(worst, std::abs(a - b) / a);
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("translation by a grid vector is a phase") {
    const Grid g = Grid::make(1, 128, 32.0);
    const Field f = noise_field(g, 5);
    const long shift = 9;
    Field fs(g);
    for (std::size_t j = 0; j < g.N; ++j) fs[(j + shift) % g.N] = f[j];
    const double a = shift * g.dx();
    const Field F = dft(f), Fs = dft(fs);
    double err = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < g.N; ++k) {
        err = std::max(err, std::abs(Fs[k] - std::exp(cplx(0.0, -a * g.xi(k))) * F[k]));
        scale = std::max(scale, std::abs(F[k]));
    }
    CHECK(err <= 1e-13 * scale);
}

TEST_CASE("gaussian recipe is real, positive and peaks at the origin") {
    const Grid g = Grid::make(1, 128, 20.0);
    const Field f = make_field(g, GaussianRecipe{{}, 1.0});
    std::size_t arg = 0;
    for (std::size_t j = 0; j < g.N; ++j) {
        CHECK(f[j].imag() == 0.0);
        CHECK(f[j].real() > 0.0);
        if (f[j].real() > f[arg].real()) arg = j;
    }
    CHECK(std::abs(g.x(arg)) <= 0.5 * g.dx() + 1e-12);
}

TEST_CASE("random band-limited fields are deterministic") {
    const Grid g = Grid::make(1, 512, 128.0);
    const FieldRecipe r = RandomBandlimitedRecipe{{}, 7};
    const Field a = make_field(g, r), b = make_field(g, r);
    REQUIRE(a.data.size() == b.data.size());
    CHECK(std::memcmp(a.data.data(), b.data.data(), a.data.size() * sizeof(cplx)) == 0);
    CHECK(l2_norm(a) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sector_mass_fraction(a) >= 1.0 - 1e-12);
    const Field c = make_field(g, RandomBandlimitedRecipe{{}, 8});
    CHECK(kato::testing::max_abs_diff(a.data, c.data) > 0.0);
}

TEST_CASE("knapp plates keep their frequency mass in the sector") {
    const Grid g = Grid::make(1, 4096, 4096.0);
    CHECK(sector_mass_fraction(make_field(g, KnappRecipe{16.0})) >= 0.999);
    const Grid g2 = Grid::make(2, 256, 512.0);
    CHECK(sector_mass_fraction(make_field(g2, KnappRecipe{4.0})) >= 0.999);
    CHECK_THROWS(make_field(Grid::make(2, 256, 1024.0), KnappRecipe{16.0}));
}

TEST_CASE("recipe strings") {
    CHECK(std::holds_alternative<GaussianRecipe>(parse_recipe("gaussian:w=2")));
    CHECK(std::get<RandomBandlimitedRecipe>(parse_recipe("random:region=ball:2,seed=7")).seed == 7);
    CHECK(std::get<KnappRecipe>(parse_recipe("knapp:R=32")).R == 32.0);
    CHECK_THROWS(parse_recipe("noise:seed=1"));
}

TEST_CASE("KSLF field layout is bit exact") {
    const Grid g = Grid::make(1, 8, 2.5);
    Field f(g);
    for (std::size_t j = 0; j < 8; ++j) f[j] = cplx(double(j), -0.5 * double(j));
    const std::string b = encode_field(f);
    REQUIRE(b.size() == 4 + 4 + 4 + 4 + 8 + 8 * 16);
    CHECK(b.compare(0, 4, "KSLF") == 0);
    std::uint32_t version, n, N;
    double L, re3, im3;
    std::memcpy(&version, b.data() + 4, 4);
    std::memcpy(&n, b.data() + 8, 4);
    std::memcpy(&N, b.data() + 12, 4);
    std::memcpy(&L, b.data() + 16, 8);
    std::memcpy(&re3, b.data() + 24 + 3 * 16, 8);
    std::memcpy(&im3, b.data() + 24 + 3 * 16 + 8, 8);
    CHECK(version == kslf_field_version);
    CHECK(n == 1);
    CHECK(N == 8);
    CHECK(L == 2.5);
    CHECK(re3 == 3.0);
    CHECK(im3 == -1.5);
    const Field back = decode_field(b);
    CHECK(back.grid == g);
    CHECK(std::memcmp(back.data.data(), f.data.data(), 8 * sizeof(cplx)) == 0);
}

TEST_CASE("KSLF spacetime round trip through a file") {
    const Grid g = Grid::make(2, 8, 3.0);
    SpacetimeField u(g, uniform_times(0.0, 1.0, 3));
    for (std::size_t i = 0; i < u.data.size(); ++i) u.data[i] = cplx(std::sin(double(i)), std::cos(double(i)));
    const auto path = (std::filesystem::temp_directory_path() / "kato_test_u.kslf").string();
    write_spacetime(path, u);
    const SpacetimeField v = read_spacetime(path);
    CHECK(v.grid == g);
    CHECK(v.times == u.times);
    CHECK(std::memcmp(v.data.data(), u.data.data(), u.data.size() * sizeof(cplx)) == 0);
    CHECK(read_any(path).slices() == 4);
    std::filesystem::remove(path);
}

TEST_CASE("malformed KSLF payloads name the byte offset") {
    const Grid g = Grid::make(1, 8, 1.0);
    const std::string good = encode_field(Field(g));
    auto offset_of = [](const std::string& bytes) -> std::int64_t {
        try {
            decode_field(bytes);
        } catch (const FormatError& e) {
            return static_cast<std::int64_t>(e.offset());
        }
        return -1;
    };
    CHECK(offset_of("KSLX" + good.substr(4)) == 0);
    CHECK(offset_of(good.substr(0, good.size() - 5)) == 24);
    CHECK(offset_of(good + "x") == static_cast<std::int64_t>(good.size()));
    std::string bad_version = good;
    bad_version[4] = 9;
    CHECK(offset_of(bad_version) == 4);
    CHECK(offset_of(encode_spacetime(SpacetimeField(g, {0.0}))) == 4);
}

TEST_CASE("spacetime time spacing") {
    const Grid g = Grid::make(1, 8, 1.0);
    CHECK(SpacetimeField(g, uniform_times(0.0, 2.0, 64)).uniform());
    CHECK_FALSE(SpacetimeField(g, {0.0, 1.0, 2.5}).uniform());
}
