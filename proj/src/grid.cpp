#include "kato/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace kato {

Grid Grid::make(int n, std::size_t N, double L) {
    if (n < 1 || n > 3) throw std::invalid_argument("grid dimension must be 1, 2 or 3, got " + std::to_string(n));
    if (N < 8 || (N & (N - 1)) != 0)
        throw std::invalid_argument("grid points per axis must be a power of two >= 8, got " + std::to_string(N));
    if (!(L > 0.0) || !std::isfinite(L)) throw std::invalid_argument("grid period must be positive");
    Grid g;
    g.n = n;
    g.N = N;
    g.L = L;
    return g;
}

double Grid::dxi() const { return 2.0 * std::numbers::pi / L; }

std::size_t Grid::size() const {
    std::size_t s = 1;
    for (int a = 0; a < n; ++a) s *= N;
    return s;
}

double Grid::cell_volume() const { return std::pow(dx(), n); }

long Grid::signed_index(std::size_t k) const {
    const long kk = static_cast<long>(k);
    const long half = static_cast<long>(N / 2);
    return kk < half ? kk : kk - static_cast<long>(N);
}

double Grid::xi(std::size_t k) const { return dxi() * static_cast<double>(signed_index(k)); }

void Grid::unravel(std::size_t flat, std::size_t* idx) const {
    for (int a = n - 1; a >= 0; --a) {
        idx[a] = flat % N;
        flat /= N;
    }
}

std::vector<double> Grid::point(std::size_t flat) const {
    std::size_t idx[3];
    unravel(flat, idx);
    std::vector<double> p(n);
    for (int a = 0; a < n; ++a) p[a] = x(idx[a]);
    return p;
}

std::vector<double> Grid::frequency(std::size_t flat) const {
    std::size_t idx[3];
    unravel(flat, idx);
    std::vector<double> p(n);
    for (int a = 0; a < n; ++a) p[a] = xi(idx[a]);
    return p;
}

double Grid::max_frequency() const {
    return std::sqrt(static_cast<double>(n)) * std::numbers::pi * static_cast<double>(N) / L;
}

Field::Field(const Grid& g, cvec v, Domain d) : grid(g), data(std::move(v)), domain(d) {
    if (data.size() != g.size()) throw std::invalid_argument("field sample count does not match grid");
}

double l2_norm_sq(const Field& f) {
    double s = 0.0;
    for (const auto& z : f.data) s += std::norm(z);
    const double w = f.domain == Domain::space ? f.grid.cell_volume() : std::pow(1.0 / f.grid.L, f.grid.n);
    return s * w;
}

double l2_norm(const Field& f) { return std::sqrt(l2_norm_sq(f)); }

cplx inner(const Field& f, const Field& g) {
    if (!(f.grid == g.grid) || f.domain != g.domain) throw std::invalid_argument("inner product of incompatible fields");
    cplx s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * std::conj(g[i]);
    const double w = f.domain == Domain::space ? f.grid.cell_volume() : std::pow(1.0 / f.grid.L, f.grid.n);
    return s * w;
}

SpacetimeField::SpacetimeField(const Grid& g, rvec t) : grid(g), times(std::move(t)), data(g.size() * times.size()) {}

Field SpacetimeField::slice_field(std::size_t s) const {
    Field f(grid);
    std::copy(slice(s), slice(s) + grid.size(), f.data.begin());
    return f;
}

double SpacetimeField::dt() const {
    if (times.size() < 2) return 0.0;
    return (times.back() - times.front()) / static_cast<double>(times.size() - 1);
}

bool SpacetimeField::uniform(double rel_tol) const {
    if (times.size() < 3) return true;
    const double h = dt();
    for (std::size_t s = 1; s < times.size(); ++s) {
        const double expect = times.front() + h * static_cast<double>(s);
        const double scale = std::abs(times.front()) + std::abs(h) * static_cast<double>(s);
        if (std::abs(times[s] - expect) > rel_tol * scale) return false;
    }
    return true;
}

rvec uniform_times(double t0, double t1, std::size_t steps) {
    if (steps == 0) return {t0};
    rvec t(steps + 1);
    const double h = (t1 - t0) / static_cast<double>(steps);
    for (std::size_t s = 0; s <= steps; ++s) t[s] = t0 + h * static_cast<double>(s);
    t.back() = t1;
    return t;
}

}  // namespace kato
