#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace kato {

using BigInt = boost::multiprecision::cpp_int;
using LatticePoint = std::vector<std::int64_t>;

class ScaleError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Finite set of unit-cube corners in Z^d (d = n + 1; axis 0 is time).
class CubeSet {
public:
    static CubeSet make(int dim, std::vector<LatticePoint> points);
    static CubeSet read_csv(const std::string& path);
    static CubeSet parse_csv(const std::string& text);
    static CubeSet random(int dim, std::size_t count, std::int64_t width, std::uint64_t seed);

    int dim() const { return dim_; }
    std::size_t size() const { return points_.size(); }
    const std::vector<LatticePoint>& points() const { return points_; }
    const LatticePoint& operator[](std::size_t i) const { return points_[i]; }

    std::string to_csv() const;
    void write_csv(const std::string& path) const;

private:
    int dim_ = 2;
    std::vector<LatticePoint> points_;
};

// Exact squared Euclidean distance.
BigInt distance_sq(const LatticePoint& a, const LatticePoint& b);

struct Rational {
    std::int64_t num = 0, den = 1;
};
// gamma = n / rho, reduced.
Rational gamma_from_rho(int n, Rational rho);
// Decay rate of the surface measure of a curved hypersurface graph: rho = n/2.
Rational surface_decay_rate(int n);

// Balls B(z_i, H); (N, H)-sparse when the centres are pairwise (N H)^gamma separated, N = #centres.
struct SparseFamily {
    std::vector<LatticePoint> centers;
    BigInt radius = 1;
    unsigned gamma = 2;
};

BigInt sparsity_separation(std::size_t count, const BigInt& H, unsigned gamma);
bool is_sparse(const SparseFamily& family);

struct SparseLevel {
    unsigned k = 0;
    BigInt H;                       // H_k, the membership radius
    BigInt cover_radius;            // H_{k-1}, the radius of the covering balls
    std::vector<std::size_t> members;
    std::vector<SparseFamily> families;
};

struct SparseDecomposition {
    unsigned K = 1;
    unsigned gamma = 2;
    std::size_t cardinality = 0;
    std::vector<SparseLevel> levels;  // k = 1..K
};

constexpr std::size_t scale_bit_cap = 65536;

// E = E_1 u ... u E_K with H_0 = 1, H_k = (|E| H_{k-1})^gamma and
// x in E_k when |E n B(x, H_k)| <= |E|^{k/K}.  Each E_k is covered by balls of
// radius H_{k-1} grouped first-fit into sparse families.
SparseDecomposition sparse_decompose(const CubeSet& E, unsigned K, unsigned gamma = 2);

struct SparseAudit {
    bool partition = false;
    bool cover = false;
    bool sparse = false;
    bool family_budget = false;
    std::size_t max_families = 0;
    double max_family_ratio = 0.0;  // families / |E|^{1/K}
    unsigned c_cover = 0;
    bool pass() const { return partition && cover && sparse && family_budget; }
};

constexpr unsigned default_c_cover = 4;

SparseAudit audit_sparse(const CubeSet& E, const SparseDecomposition& d, unsigned c_cover = default_c_cover);

// JSON tree (levels -> families -> centres, radii) plus the audit summary.
std::string sparse_to_json(const SparseDecomposition& d, const SparseAudit& audit);

// Group columns (points sharing all non-time coordinates) by dyadic height h:
// a column with c points lands in E(h) with h <= c < 2h.
std::map<std::size_t, std::vector<std::size_t>> columns_by_height(const CubeSet& E, int time_axis = 0);

struct EpsilonBudget {
    unsigned K = 1;
    double delta = 0.0;
};
// K = ceil(log(1/eps) / C_gamma), delta = 1/K + eps gamma^K; requires C_gamma > log gamma.
EpsilonBudget epsilon_budget(double eps, double C_gamma, double gamma);

}  // namespace kato
