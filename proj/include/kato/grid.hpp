#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace kato {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;
using rvec = std::vector<double>;

// Periodic box [-L/2, L/2)^n with N cell-centred samples per axis:
// x_j = -L/2 + (j + 1/2) dx.  Frequency nodes xi_k = 2 pi k / L with k in
// [-N/2, N/2), stored in FFT order.
struct Grid {
    int n = 1;
    std::size_t N = 0;
    double L = 0.0;

    static Grid make(int n, std::size_t N, double L);

    double dx() const { return L / static_cast<double>(N); }
    double dxi() const;
    std::size_t size() const;
    double cell_volume() const;
    double x(std::size_t j) const { return -0.5 * L + (static_cast<double>(j) + 0.5) * dx(); }
    long signed_index(std::size_t k) const;
    double xi(std::size_t k) const;
    // Unravel a flat row-major index into per-axis indices.
    void unravel(std::size_t flat, std::size_t* idx) const;
    std::vector<double> point(std::size_t flat) const;
    std::vector<double> frequency(std::size_t flat) const;
    double max_frequency() const;

    bool operator==(const Grid& o) const { return n == o.n && N == o.N && L == o.L; }
};

enum class Domain { space, frequency };

struct Field {
    Grid grid;
    cvec data;
    Domain domain = Domain::space;

    Field() = default;
    Field(const Grid& g, Domain d = Domain::space) : grid(g), data(g.size()), domain(d) {}
    Field(const Grid& g, cvec v, Domain d = Domain::space);

    std::size_t size() const { return data.size(); }
    cplx& operator[](std::size_t i) { return data[i]; }
    const cplx& operator[](std::size_t i) const { return data[i]; }
};

// Weighted L2 norm: dx^n per point in space, (1/L)^n per node in frequency.
double l2_norm(const Field& f);
double l2_norm_sq(const Field& f);
cplx inner(const Field& f, const Field& g);

struct SpacetimeField {
    Grid grid;
    rvec times;
    cvec data;  // slice-major: data[s * grid.size() + j]

    SpacetimeField() = default;
    SpacetimeField(const Grid& g, rvec t);

    std::size_t slices() const { return times.size(); }
    cplx* slice(std::size_t s) { return data.data() + s * grid.size(); }
    const cplx* slice(std::size_t s) const { return data.data() + s * grid.size(); }
    Field slice_field(std::size_t s) const;
    double dt() const;
    bool uniform(double rel_tol = 1e-12) const;
};

rvec uniform_times(double t0, double t1, std::size_t steps);

}  // namespace kato
