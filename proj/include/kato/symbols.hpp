#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace kato {

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Homogeneous dispersion symbol Phi of degree m on R^n.
//   power:       |xi|^m
//   anisotropic: sum_i c_i |xi_i|^m          (c_i > 0)
//   angular:     |xi|^m * P(xi / |xi|)       (P a polynomial in the direction)
enum class SymbolKind { power, anisotropic, angular };

struct Monomial {
    double coef = 0.0;
    std::vector<int> exps;  // one exponent per axis
};

class SymbolSpec {
public:
    static SymbolSpec power(double m, int n);
    static SymbolSpec anisotropic(double m, std::vector<double> c);
    static SymbolSpec angular(double m, int n, std::vector<Monomial> poly);
    // "power,m=2,n=1" | "aniso,m=2,c=1:3" | "angular,m=2,n=2,P=1*0:0+0.5*0:2"
    static SymbolSpec parse(const std::string& text);

    SymbolKind kind() const { return kind_; }
    double m() const { return m_; }
    int n() const { return n_; }
    const std::vector<double>& coefficients() const { return c_; }
    const std::vector<Monomial>& polynomial() const { return poly_; }
    std::string describe() const;

    double value(const double* xi) const;
    // Writes the gradient into grad; returns the value.
    double value_gradient(const double* xi, double* grad) const;

private:
    SymbolKind kind_ = SymbolKind::power;
    double m_ = 2.0;
    int n_ = 1;
    std::vector<double> c_;
    std::vector<Monomial> poly_;

    double poly_value(const double* w) const;
    void poly_gradient(const double* w, double* g) const;
};

struct Phase {
    double value = 0.0;
    std::vector<double> gradient;
};

// Phi(xi) and its gradient.  Phi(0) = 0 with zero gradient for all families.
Phase phase(const SymbolSpec& sym, const std::vector<double>& xi);

// The frequency sector {1/2 <= |xi| <= 2, |xi/|xi| - e1| <= pi/4}.
struct Sector {
    static constexpr double r_inner = 0.5;
    static constexpr double r_outer = 2.0;
    static constexpr double cap = 0.78539816339744830962;  // pi/4, chordal
    // |w - e1| <= cap  <=>  w_1 >= 1 - cap^2 / 2
    static double min_cos() { return 1.0 - cap * cap / 2.0; }
    static double max_angle();
    static bool contains(const double* xi, int n);
};

struct ValidationReport {
    std::size_t samples = 0;
    double homogeneity_deviation = 0.0;  // max |log(Phi(l xi)/Phi(xi))/log l - m|, or ratio form
    bool used_ratio_form = false;
    double min_grad_sector = 0.0;
    double min_grad_annulus = 0.0;
    double gradient_fd_error = 0.0;  // max relative error vs central differences
    bool pass = false;
};

ValidationReport validate_symbol(const SymbolSpec& sym, std::size_t sample_count, std::uint64_t seed = 1);

// Deterministic lattice over the closed sector (includes r = 1/2, r = 2 and the cap rim).
std::vector<std::vector<double>> sector_lattice(int n, std::size_t radial, std::size_t angular);

}  // namespace kato
