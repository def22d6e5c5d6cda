#include "kato/exponents.hpp"
#include "kato/opnorm.hpp"
#include "kato/propagator.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace kato;

namespace {

const SymbolSpec schrodinger = SymbolSpec::power(2.0, 1);

cvec random_vector(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    cvec v(n);
    for (auto& z : v) z = cplx(nd(rng), nd(rng));
    return v;
}

cplx dot(const cvec& a, const cvec& b) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

double norm2(const cvec& a) { return std::sqrt(dot(a, a).real()); }

class Diagonal : public LinearOperator {
public:
    explicit Diagonal(cvec d) : d_(std::move(d)) {}
    std::size_t input_size() const override { return d_.size(); }
    std::size_t output_size() const override { return d_.size(); }
    void apply(const cvec& in, cvec& out) const override {
        out.resize(d_.size());
        for (std::size_t i = 0; i < d_.size(); ++i) out[i] = d_[i] * in[i];
    }
    void adjoint(const cvec& out, cvec& in) const override {
        in.resize(d_.size());
        for (std::size_t i = 0; i < d_.size(); ++i) in[i] = std::conj(d_[i]) * out[i];
    }

private:
    cvec d_;
};

SmoothingOperatorSpec spec_at(double R, double alpha = 0.5, double q = 2.0, double r = 2.0) {
    SmoothingOperatorSpec s;
    s.R = R;
    s.alpha = alpha;
    s.q = q;
    s.r = r;
    return s;
}

}  // namespace

TEST_CASE("predicted exponents") {
    CHECK(predicted_exponent(1, 2, 2, 2, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(std::abs(predicted_exponent(2, 2, 3, infinity, -1.0 / 3.0)) <= 1e-15);
    CHECK(predicted_exponent(1, 2, 2, infinity, -0.25) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK_THROWS_AS(predicted_exponent(1, 2, 0.5, 2, 0.0), DomainError);
}

TEST_CASE("transfer exponents") {
    const TransferExponent a = transfer_exponent(1, 2, 4, 0.5);
    CHECK(a.delta_inf == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(a.alpha_global_sup == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(transfer_exponent(1, 2, 2.0 + 1e-9, 0.5).delta_inf <= 1e-9);
    const double eps = 0.1;
    CHECK(transfer_exponent(2, 1.0 / eps, 2.0 / eps, 0.0).delta_inf == doctest::Approx(0.1).epsilon(1e-12));
    CHECK_THROWS_AS(transfer_exponent(1, 4, 4, 0.5), DomainError);
    CHECK_THROWS_AS(transfer_exponent(1, 4, 3, 0.5), DomainError);
}

TEST_CASE("exponent fits") {
    std::vector<std::pair<double, double>> pow_law, flat;
    for (double R : {8.0, 16.0, 32.0}) {
        pow_law.emplace_back(R, 3.0 * std::sqrt(R));
        flat.emplace_back(R, 2.0);
    }
    const ScalingFit f = fit_exponent(pow_law, 0.5);
    CHECK(std::abs(f.slope - 0.5) <= 1e-12);
    CHECK(std::abs(f.intercept - std::log(3.0)) <= 1e-12);
    CHECK(f.slope_stderr <= 1e-12);
    CHECK(f.predicted.value() == 0.5);
    CHECK(std::abs(fit_exponent(flat).slope) <= 1e-15);
    CHECK_THROWS_AS(fit_exponent({{8, 1}, {16, 2}}), DomainError);
    CHECK_THROWS_AS(fit_exponent({{8, 1}, {16, 0}, {32, 1}}), DomainError);
    CHECK_THROWS_AS(fit_exponent({{8, 1}, {12, 2}, {32, 1}}), DomainError);
    CHECK_THROWS_AS(fit_exponent({{16, 1}, {8, 2}, {32, 1}}), DomainError);
}

TEST_CASE("power iteration on an identity and a diagonal multiplier") {
    CHECK(power_iteration(Diagonal(cvec(50, 1.0))).norm == doctest::Approx(1.0).epsilon(1e-12));
    cvec d(64);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::polar(1.0 + std::sin(0.3 * double(i)), 0.1 * double(i));
    double top = 0.0;
    for (const auto& z : d) top = std::max(top, std::abs(z));
    PowerOptions o;
    o.tol = 1e-12;
    o.max_iterations = 2000;
    CHECK(power_iteration(Diagonal(d), o).norm == doctest::Approx(top).epsilon(1e-5));
    CHECK(dense_operator_norm(Diagonal(d)) == doctest::Approx(top).epsilon(1e-12));
}

TEST_CASE("sampler adjoint and normal operator") {
    const auto A = make_sampler(spec_at(8.0));
    const cvec y = random_vector(A->input_size(), 1), z = random_vector(A->output_size(), 2);
    cvec Ay, Asz, N, AsAy;
    A->apply(y, Ay);
    A->adjoint(z, Asz);
    CHECK(std::abs(dot(z, Ay) - dot(Asz, y)) <= 1e-12 * norm2(z) * norm2(Ay));
    A->normal(y, N);
    A->adjoint(Ay, AsAy);
    double err = 0.0;
    for (std::size_t i = 0; i < N.size(); ++i) err = std::max(err, std::abs(N[i] - AsAy[i]));
    CHECK(err <= 1e-12 * norm2(N));
    CHECK(A->mixed(y, 2.0, 2.0, NormOrder::xt) == doctest::Approx(norm2(Ay)).epsilon(1e-12));
}

TEST_CASE("mixed norm gradient matches finite differences") {
    const auto A = make_sampler(spec_at(8.0));
    const cvec y = random_vector(A->input_size(), 3), dy = random_vector(A->input_size(), 4);
    for (auto [q, r, o] : {std::tuple{2.0, 2.0, NormOrder::xt}, {2.0, 4.0, NormOrder::xt}, {3.0, 2.0, NormOrder::tx}, {4.0, 6.0, NormOrder::tx}}) {
        cvec grad;
        A->mixed(y, q, r, o, &grad);
        const double h = 1e-6;
        cvec yp = y, ym = y;
        for (std::size_t i = 0; i < y.size(); ++i) {
            yp[i] += h * dy[i];
            ym[i] -= h * dy[i];
        }
        const double fd = (A->mixed(yp, q, r, o) - A->mixed(ym, q, r, o)) / (2.0 * h);
        const double an = dot(grad, dy).real();
        CAPTURE(q);
        CAPTURE(r);
        CHECK(std::abs(fd - an) <= 1e-5 * std::abs(an));
    }
}

TEST_CASE("mixed norms are homogeneous of degree one") {
    const auto A = make_sampler(spec_at(8.0));
    const cvec y = random_vector(A->input_size(), 5);
    cvec y3 = y;
    for (auto& z : y3) z *= cplx(0.0, 3.0);
    for (double r : {2.0, 4.0, infinity})
        CHECK(A->mixed(y3, 2.0, r, NormOrder::xt) == doctest::Approx(3.0 * A->mixed(y, 2.0, r, NormOrder::xt)).epsilon(1e-13));
}

TEST_CASE("dense and power iteration agree on the sampler at R = 4") {
    const auto A = make_sampler(spec_at(4.0));
    const double dense = dense_operator_norm(*A);
    const PowerResult p = power_iteration(*A);
    CHECK(p.converged);
    CHECK(std::abs(p.norm - dense) <= 0.01 * dense);
    CHECK(p.norm <= dense * (1.0 + 1e-12));
}

TEST_CASE("periodic-grid operator at N = 256 agrees with the sampler") {
    const double R = 4.0;
    const Grid g = Grid::make(1, 256, 256.0);
    const auto w = local_window(R, 2.0);
    const TimeSampling ts = sample_window(w.first, w.second, 4.0);
    const TorusSmoothingOperator T(g, schrodinger, 0.5, SectorBump{}, R, ts.times);
    const cvec y = random_vector(T.input_size(), 6), z = random_vector(T.output_size(), 7);
    cvec Ty, Tsz;
    T.apply(y, Ty);
    T.adjoint(z, Tsz);
    CHECK(std::abs(dot(z, Ty) - dot(Tsz, y)) <= 1e-12 * norm2(z) * norm2(Ty));
    const double dense = dense_operator_norm(T);
    CHECK(std::abs(power_iteration(T).norm - dense) <= 0.01 * dense);
    const double sampler = dense_operator_norm(*make_sampler(spec_at(R)));
    MESSAGE("torus " << dense << ", sampler " << sampler);
    CHECK(std::abs(dense - sampler) <= 0.02 * dense);
}

TEST_CASE("operator_norm_l2 needs q = r = 2") {
    CHECK_THROWS_AS(operator_norm_l2(spec_at(8.0, 0.5, 2.0, 4.0)), DomainError);
}

TEST_CASE("global window never decreases the norm") {
    PowerOptions o;
    o.restarts = 2;
    const WindowComparison c = compare_windows(spec_at(8.0), o);
    MESSAGE("local " << c.local.norm << ", global " << c.global.norm);
    CHECK(c.global.norm >= c.local.norm * (1.0 - 1e-10));
}

TEST_CASE("lower bound at q = r = 2 is within 5% of the operator norm") {
    const SmoothingOperatorSpec s = spec_at(8.0);
    const double op = operator_norm_l2(s).norm;
    LowerBoundOptions o;
    o.ascent_steps = 30;
    o.restarts = 2;
    const LowerBound lb = lower_bound_mixed(s, o);
    MESSAGE("operator norm " << op << ", lower bound " << lb.value << " from " << lb.best);
    CHECK(lb.value <= op * 1.05);
    CHECK(lb.value >= op * 0.95);
    CHECK(lb.value >= lb.best_candidate);
    CHECK(norm2(lb.maximizer) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("lower bound is unchanged by scaling its input") {
    const auto A = make_sampler(spec_at(8.0, -0.25, 2.0, infinity));
    const LowerBound lb = lower_bound_mixed(*A, 2.0, infinity, NormOrder::xt, {0, 1, 1e-4, false});
    cvec big = lb.maximizer;
    for (auto& z : big) z *= 7.5;
    CHECK(A->mixed(big, 2.0, infinity, NormOrder::xt) / norm2(big) == doctest::Approx(lb.value).epsilon(1e-12));
}

TEST_CASE("argmax over candidate inputs is scale invariant") {
    const auto A = make_sampler(spec_at(8.0, -0.25, 2.0, infinity));
    std::vector<cvec> ys;
    for (std::uint64_t s = 0; s < 6; ++s) ys.push_back(random_vector(A->input_size(), 40 + s));
    auto best = [&](double c) {
        std::size_t arg = 0;
        double top = -1.0;
        for (std::size_t i = 0; i < ys.size(); ++i) {
            cvec y = ys[i];
            for (auto& z : y) z *= c;
            const double v = A->mixed(y, 2.0, infinity, NormOrder::xt) / norm2(y);
            if (v > top) {
                top = v;
                arg = i;
            }
        }
        return arg;
    };
    CHECK(best(1.0) == best(1e-3));
    CHECK(best(1.0) == best(250.0));
}

TEST_CASE("knapp input reaches the plate heuristic for the maximal norm") {
    const LowerBound lb = lower_bound_mixed(spec_at(16.0, -0.25, 2.0, infinity), {10, 1, 1e-4, true});
    MESSAGE("plate heuristic " << lb.plate_heuristic << ", lower bound " << lb.value);
    CHECK(lb.plate_heuristic > 0.0);
    CHECK(lb.value >= lb.plate_heuristic);
}

TEST_CASE("tail fraction is zero on a local window and small on a long global one") {
    const auto A = make_sampler(spec_at(8.0));
    const cvec y = random_vector(A->input_size(), 9);
    CHECK(tail_fraction(*A, y, 2.0) == 0.0);
    SmoothingOperatorSpec g = spec_at(8.0);
    g.window = parse_window("global");
    const auto B = make_sampler(g);
    const LowerBound lb = lower_bound_mixed(*B, 2.0, 4.0, NormOrder::xt, {0, 1, 1e-4, false});
    const double tail = tail_fraction(*B, lb.maximizer, 4.0);
    CHECK(tail >= 0.0);
    CHECK(tail <= 1e-6);
}

TEST_CASE("window parsing") {
    CHECK_FALSE(parse_window("local").global);
    CHECK(parse_window("global").global);
    CHECK(parse_window("global:500").T == 500.0);
    CHECK_THROWS(parse_window("forever"));
    const auto w = time_window(spec_at(8.0));
    CHECK(w.first == 32.0);
    CHECK(w.second == 128.0);
    SmoothingOperatorSpec g = spec_at(8.0);
    g.window = parse_window("global");
    CHECK(time_window(g).second == 8.0 * 64.0);
    CHECK(time_window(g).first == -8.0 * 64.0);
}
