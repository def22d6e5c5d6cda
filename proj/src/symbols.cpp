#include "kato/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

namespace kato {

namespace {

double norm(const double* x, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += x[i] * x[i];
    return std::sqrt(s);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

double to_double(const std::string& s, const std::string& key) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("symbol parameter " + key + " is not a number: '" + s + "'");
    }
}

void check_degree(double m) {
    if (!(m > 1.0) || !std::isfinite(m)) throw std::invalid_argument("symbol degree m must exceed 1");
}

void check_dim(int n) {
    if (n < 1 || n > 3) throw std::invalid_argument("symbol dimension must be 1, 2 or 3");
}

}  // namespace

//==============================================================================
// Construction
//==============================================================================

SymbolSpec SymbolSpec::power(double m, int n) {
    check_degree(m);
    check_dim(n);
    SymbolSpec s;
    s.kind_ = SymbolKind::power;
    s.m_ = m;
    s.n_ = n;
    return s;
}

SymbolSpec SymbolSpec::anisotropic(double m, std::vector<double> c) {
    check_degree(m);
    check_dim(static_cast<int>(c.size()));
    for (double ci : c)
        if (!(ci > 0.0)) throw std::invalid_argument("anisotropic coefficients must be positive");
    SymbolSpec s;
    s.kind_ = SymbolKind::anisotropic;
    s.m_ = m;
    s.n_ = static_cast<int>(c.size());
    s.c_ = std::move(c);
    return s;
}

SymbolSpec SymbolSpec::angular(double m, int n, std::vector<Monomial> poly) {
    check_degree(m);
    check_dim(n);
    if (poly.empty()) throw std::invalid_argument("angular symbol needs at least one monomial");
    for (const auto& t : poly) {
        if (static_cast<int>(t.exps.size()) != n) throw std::invalid_argument("monomial exponent count must equal n");
        for (int e : t.exps)
            if (e < 0) throw std::invalid_argument("monomial exponents must be nonnegative");
    }
    SymbolSpec s;
    s.kind_ = SymbolKind::angular;
    s.m_ = m;
    s.n_ = n;
    s.poly_ = std::move(poly);
    return s;
}

SymbolSpec SymbolSpec::parse(const std::string& text) {
    auto parts = split(text, ',');
    const std::string kind = parts.front();
    std::map<std::string, std::string> kv;
    for (std::size_t i = 1; i < parts.size(); ++i) {
        const auto eq = parts[i].find('=');
        if (eq == std::string::npos) throw std::invalid_argument("symbol parameter without '=': " + parts[i]);
        kv[parts[i].substr(0, eq)] = parts[i].substr(eq + 1);
    }
    auto take = [&](const std::string& key, double dflt) {
        auto it = kv.find(key);
        return it == kv.end() ? dflt : to_double(it->second, key);
    };
    const double m = take("m", 2.0);
    if (kind == "power") return power(m, static_cast<int>(take("n", 1)));
    if (kind == "aniso" || kind == "anisotropic") {
        auto it = kv.find("c");
        if (it == kv.end()) throw std::invalid_argument("anisotropic symbol needs c=c1:c2:...");
        std::vector<double> c;
        for (const auto& s : split(it->second, ':')) c.push_back(to_double(s, "c"));
        return anisotropic(m, c);
    }
    if (kind == "angular") {
        const int n = static_cast<int>(take("n", 2));
        auto it = kv.find("P");
        if (it == kv.end()) throw std::invalid_argument("angular symbol needs P=coef*e1:e2+...");
        std::vector<Monomial> poly;
        for (const auto& term : split(it->second, '+')) {
            const auto star = term.find('*');
            if (star == std::string::npos) throw std::invalid_argument("monomial must read coef*e1:e2:...: " + term);
            Monomial mono;
            mono.coef = to_double(term.substr(0, star), "P");
            for (const auto& e : split(term.substr(star + 1), ':')) mono.exps.push_back(static_cast<int>(to_double(e, "P")));
            poly.push_back(mono);
        }
        return angular(m, n, poly);
    }
    throw std::invalid_argument("unknown symbol kind '" + kind + "' (power | aniso | angular)");
}

std::string SymbolSpec::describe() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind_) {
        case SymbolKind::power:
            os << "power,m=" << m_ << ",n=" << n_;
            break;
        case SymbolKind::anisotropic:
            os << "aniso,m=" << m_ << ",c=";
            for (std::size_t i = 0; i < c_.size(); ++i) os << (i ? ":" : "") << c_[i];
            break;
        case SymbolKind::angular:
            os << "angular,m=" << m_ << ",n=" << n_ << ",P=";
            for (std::size_t t = 0; t < poly_.size(); ++t) {
                os << (t ? "+" : "") << poly_[t].coef << "*";
                for (std::size_t i = 0; i < poly_[t].exps.size(); ++i) os << (i ? ":" : "") << poly_[t].exps[i];
            }
            break;
    }
    return os.str();
}

//==============================================================================
// Evaluation
//==============================================================================

double SymbolSpec::poly_value(const double* w) const {
    double s = 0.0;
    for (const auto& t : poly_) {
        double p = t.coef;
        for (int i = 0; i < n_; ++i) p *= std::pow(w[i], t.exps[i]);
        s += p;
    }
    return s;
}

void SymbolSpec::poly_gradient(const double* w, double* g) const {
    for (int i = 0; i < n_; ++i) g[i] = 0.0;
    for (const auto& t : poly_) {
        for (int i = 0; i < n_; ++i) {
            if (t.exps[i] == 0) continue;
            double p = t.coef * t.exps[i] * std::pow(w[i], t.exps[i] - 1);
            for (int j = 0; j < n_; ++j)
                if (j != i) p *= std::pow(w[j], t.exps[j]);
            g[i] += p;
        }
    }
}

double SymbolSpec::value(const double* xi) const {
    double g[3];
    return value_gradient(xi, g);
}

double SymbolSpec::value_gradient(const double* xi, double* grad) const {
    const double r = norm(xi, n_);
    if (r == 0.0) {
        for (int i = 0; i < n_; ++i) grad[i] = 0.0;
        return 0.0;
    }
    switch (kind_) {
        case SymbolKind::power: {
            const double rm2 = std::pow(r, m_ - 2.0);
            for (int i = 0; i < n_; ++i) grad[i] = m_ * rm2 * xi[i];
            return rm2 * r * r;
        }
        case SymbolKind::anisotropic: {
            double v = 0.0;
            for (int i = 0; i < n_; ++i) {
                const double a = std::abs(xi[i]);
                const double am1 = a > 0.0 ? std::pow(a, m_ - 1.0) : 0.0;
                v += c_[i] * am1 * a;
                grad[i] = c_[i] * m_ * am1 * (xi[i] < 0.0 ? -1.0 : 1.0);
            }
            return v;
        }
        case SymbolKind::angular: {
            double w[3] = {0, 0, 0}, gp[3] = {0, 0, 0};
            for (int i = 0; i < n_; ++i) w[i] = xi[i] / r;
            const double P = poly_value(w);
            poly_gradient(w, gp);
            double wg = 0.0;
            for (int i = 0; i < n_; ++i) wg += w[i] * gp[i];
            const double rm1 = std::pow(r, m_ - 1.0);
            for (int i = 0; i < n_; ++i) grad[i] = rm1 * (m_ * w[i] * P + gp[i] - w[i] * wg);
            return rm1 * r * P;
        }
    }
    return 0.0;
}

Phase phase(const SymbolSpec& sym, const std::vector<double>& xi) {
    if (static_cast<int>(xi.size()) != sym.n()) throw std::invalid_argument("frequency vector has wrong dimension");
    Phase p;
    p.gradient.assign(xi.size(), 0.0);
    p.value = sym.value_gradient(xi.data(), p.gradient.data());
    return p;
}

//==============================================================================
// Sector and validation
//==============================================================================

double Sector::max_angle() { return std::acos(min_cos()); }

bool Sector::contains(const double* xi, int n) {
    const double r = norm(xi, n);
    if (r < r_inner || r > r_outer) return false;
    return xi[0] / r >= min_cos();
}

std::vector<std::vector<double>> sector_lattice(int n, std::size_t radial, std::size_t angular) {
    radial = std::max<std::size_t>(radial, 2);
    angular = std::max<std::size_t>(angular, 3) | 1;  // odd, so the e1 ray is included
    std::vector<std::vector<double>> pts;
    const double amax = Sector::max_angle();
    for (std::size_t i = 0; i < radial; ++i) {
        const double r = Sector::r_inner + (Sector::r_outer - Sector::r_inner) * static_cast<double>(i) / static_cast<double>(radial - 1);
        if (n == 1) {
            pts.push_back({r});
            continue;
        }
        for (std::size_t j = 0; j < angular; ++j) {
            const double th = -amax + 2.0 * amax * static_cast<double>(j) / static_cast<double>(angular - 1);
            if (n == 2) {
                pts.push_back({r * std::cos(th), r * std::sin(th)});
            } else {
                const double pol = std::abs(th);
                for (std::size_t k = 0; k < angular; ++k) {
                    const double az = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(angular);
                    pts.push_back({r * std::cos(pol), r * std::sin(pol) * std::cos(az), r * std::sin(pol) * std::sin(az)});
                }
            }
        }
    }
    return pts;
}

ValidationReport validate_symbol(const SymbolSpec& sym, std::size_t sample_count, std::uint64_t seed) {
    if (sample_count < 1) throw std::invalid_argument("validate_symbol needs at least one sample");
    const int n = sym.n();
    const double m = sym.m();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    auto random_direction = [&](double* w) {
        double r = 0.0;
        do {
            r = 0.0;
            for (int i = 0; i < n; ++i) {
                w[i] = gauss(rng);
                r += w[i] * w[i];
            }
        } while (r < 1e-20);
        r = std::sqrt(r);
        for (int i = 0; i < n; ++i) w[i] /= r;
    };

    ValidationReport rep;
    rep.samples = sample_count;

    struct Pair {
        std::vector<double> xi, lxi;
        double lambda;
    };
    std::vector<Pair> pairs(sample_count);
    bool nonpositive = false;
    for (auto& p : pairs) {
        double w[3];
        random_direction(w);
        const double r = std::exp(std::log(0.25) + unit(rng) * std::log(16.0));
        double loglam = std::log(2.0) + unit(rng) * (std::log(8.0) - std::log(2.0));
        if (unit(rng) < 0.5) loglam = -loglam;
        p.lambda = std::exp(loglam);
        p.xi.resize(n);
        p.lxi.resize(n);
        for (int i = 0; i < n; ++i) {
            p.xi[i] = r * w[i];
            p.lxi[i] = p.lambda * p.xi[i];
        }
        if (sym.value(p.xi.data()) <= 0.0 || sym.value(p.lxi.data()) <= 0.0) nonpositive = true;
    }
    rep.used_ratio_form = nonpositive;
    for (const auto& p : pairs) {
        const double a = sym.value(p.xi.data());
        const double b = sym.value(p.lxi.data());
        double dev;
        if (!nonpositive) {
            dev = std::abs(std::log(b / a) / std::log(p.lambda) - m);
        } else {
            const double lm = std::pow(p.lambda, m);
            dev = std::abs(b - lm * a) / (lm * std::pow(norm(p.xi.data(), n), m));
        }
        rep.homogeneity_deviation = std::max(rep.homogeneity_deviation, dev);
    }

    // Gradient against central differences on 1/4 <= |xi| <= 4.
    for (const auto& p : pairs) {
        double g[3], gp[3], gm[3], x[3];
        sym.value_gradient(p.xi.data(), g);
        const double r = norm(p.xi.data(), n);
        const double h = 1e-5 * r;
        double err = 0.0, gn = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) x[j] = p.xi[j];
            x[i] += h;
            const double fp = sym.value_gradient(x, gp);
            x[i] -= 2.0 * h;
            const double fm = sym.value_gradient(x, gm);
            const double fd = (fp - fm) / (2.0 * h);
            err = std::max(err, std::abs(fd - g[i]));
            gn = std::max(gn, std::abs(g[i]));
        }
        const double scale = std::max(gn, std::pow(r, m - 1.0) * 1e-3);
        rep.gradient_fd_error = std::max(rep.gradient_fd_error, err / scale);
    }

    auto grad_norm = [&](const double* xi) {
        double g[3];
        sym.value_gradient(xi, g);
        return norm(g, n);
    };

    double min_sector = std::numeric_limits<double>::infinity();
    for (const auto& xi : sector_lattice(n, 33, 33)) min_sector = std::min(min_sector, grad_norm(xi.data()));
    double min_annulus = min_sector;
    for (std::size_t s = 0; s < sample_count; ++s) {
        double w[3], xi[3];
        random_direction(w);
        const double r = Sector::r_inner + unit(rng) * (Sector::r_outer - Sector::r_inner);
        for (int i = 0; i < n; ++i) xi[i] = r * w[i];
        const double gnorm = grad_norm(xi);
        min_annulus = std::min(min_annulus, gnorm);
        if (Sector::contains(xi, n)) min_sector = std::min(min_sector, gnorm);
    }
    // Lattice over the whole annulus: rotate the sector lattice onto each axis direction.
    for (int axis = 0; axis < n; ++axis) {
        for (double sgn : {1.0, -1.0}) {
            for (const auto& xi : sector_lattice(n, 17, 17)) {
                double y[3];
                for (int i = 0; i < n; ++i) y[i] = xi[(i + n - axis) % n];
                for (int i = 0; i < n; ++i) y[i] *= (i == axis ? sgn : 1.0);
                min_annulus = std::min(min_annulus, grad_norm(y));
            }
        }
    }
    rep.min_grad_sector = min_sector;
    rep.min_grad_annulus = min_annulus;
    rep.pass = rep.homogeneity_deviation <= 1e-10 && min_sector > 0.0 && min_annulus > 0.0;
    return rep;
}

}  // namespace kato
