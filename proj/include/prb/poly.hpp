#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "prb/dyadic.hpp"
#include "prb/rational.hpp"

namespace prb {

/// Dense univariate polynomial over Q, coefficients in increasing degree.
/// The zero polynomial has an empty coefficient vector and degree -1.
class Poly {
  public:
    Poly() = default;
    explicit Poly(Rational c) { if (c != 0) coeffs_.push_back(std::move(c)); }
    explicit Poly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

    static Poly zero() { return Poly(); }
    static Poly one() { return Poly(Rational(1)); }
    /// c * x^k
    static Poly monomial(Rational c, std::size_t k) {
        if (c == 0) return Poly();
        std::vector<Rational> v(k + 1, Rational(0));
        v[k] = std::move(c);
        return Poly(std::move(v));
    }
    static Poly variable() { return monomial(Rational(1), 1); }

    long degree() const { return static_cast<long>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::vector<Rational>& coeffs() const { return coeffs_; }

    const Rational& leading() const {
        if (is_zero()) throw std::domain_error("leading coefficient of zero polynomial");
        return coeffs_.back();
    }

    Rational coeff(std::size_t k) const {
        return k < coeffs_.size() ? coeffs_[k] : Rational(0);
    }

    void set_coeff(std::size_t k, Rational c) {
        if (k >= coeffs_.size()) coeffs_.resize(k + 1, Rational(0));
        coeffs_[k] = std::move(c);
        trim();
    }

    bool operator==(const Poly& o) const { return coeffs_ == o.coeffs_; }

    Poly operator+(const Poly& o) const {
        std::vector<Rational> v(std::max(coeffs_.size(), o.coeffs_.size()), Rational(0));
        for (std::size_t i = 0; i < coeffs_.size(); ++i) v[i] = coeffs_[i];
        for (std::size_t i = 0; i < o.coeffs_.size(); ++i) v[i] += o.coeffs_[i];
        return Poly(std::move(v));
    }
    Poly operator-(const Poly& o) const {
        std::vector<Rational> v(std::max(coeffs_.size(), o.coeffs_.size()), Rational(0));
        for (std::size_t i = 0; i < coeffs_.size(); ++i) v[i] = coeffs_[i];
        for (std::size_t i = 0; i < o.coeffs_.size(); ++i) v[i] -= o.coeffs_[i];
        return Poly(std::move(v));
    }
    Poly operator-() const {
        std::vector<Rational> v(coeffs_);
        for (auto& c : v) c = -c;
        return Poly(std::move(v));
    }
    Poly operator*(const Poly& o) const {
        if (is_zero() || o.is_zero()) return Poly();
        std::vector<Rational> v(coeffs_.size() + o.coeffs_.size() - 1, Rational(0));
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            for (std::size_t j = 0; j < o.coeffs_.size(); ++j) v[i + j] += coeffs_[i] * o.coeffs_[j];
        return Poly(std::move(v));
    }
    Poly operator*(const Rational& c) const {
        if (c == 0) return Poly();
        std::vector<Rational> v(coeffs_);
        for (auto& a : v) a *= c;
        return Poly(std::move(v));
    }
    Poly& operator+=(const Poly& o) { return *this = *this + o; }
    Poly& operator-=(const Poly& o) { return *this = *this - o; }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    /// Euclidean division: returns (quotient, remainder) with deg r < deg o.
    std::pair<Poly, Poly> divmod(const Poly& o) const {
        if (o.is_zero()) throw std::domain_error("polynomial division by zero");
        Poly r = *this;
        std::vector<Rational> q(degree() >= o.degree() ? degree() - o.degree() + 1 : 0, Rational(0));
        while (!r.is_zero() && r.degree() >= o.degree()) {
            std::size_t k = static_cast<std::size_t>(r.degree() - o.degree());
            Rational c = r.leading() / o.leading();
            q[k] = c;
            r -= monomial(c, k) * o;
        }
        return {Poly(std::move(q)), std::move(r)};
    }
    Poly operator/(const Poly& o) const { return divmod(o).first; }
    Poly operator%(const Poly& o) const { return divmod(o).second; }

    /// Exact division; throws if the remainder is nonzero.
    Poly exact_div(const Poly& o) const {
        auto [q, r] = divmod(o);
        if (!r.is_zero()) throw std::logic_error("inexact polynomial division");
        return q;
    }

    Poly derivative() const {
        if (coeffs_.size() <= 1) return Poly();
        std::vector<Rational> v(coeffs_.size() - 1);
        for (std::size_t i = 1; i < coeffs_.size(); ++i) v[i - 1] = coeffs_[i] * Rational(static_cast<long>(i));
        return Poly(std::move(v));
    }

    Rational eval(const Rational& x) const {
        Rational r(0);
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) r = r * x + *it;
        return r;
    }

    GaussianRational eval(const GaussianRational& x) const {
        GaussianRational r{Rational(0)};
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) r = r * x + GaussianRational(*it);
        return r;
    }

    IvQ eval(const IvQ& x) const {
        IvQ r{Rational(0)};
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) r = r * x + IvQ(*it);
        return r;
    }

    Poly eval(const Poly& x) const {
        Poly r;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) r = r * x + Poly(*it);
        return r;
    }

    /// Multiplicity of the root 0, i.e. the index of the lowest nonzero term.
    std::size_t valuation() const {
        if (is_zero()) throw std::domain_error("valuation of zero polynomial");
        std::size_t v = 0;
        while (coeffs_[v] == 0) ++v;
        return v;
    }

    /// Quotient by x^k; requires valuation >= k.
    Poly shift_down(std::size_t k) const {
        if (is_zero()) return Poly();
        if (valuation() < k) throw std::logic_error("shift_down below valuation");
        return Poly(std::vector<Rational>(coeffs_.begin() + static_cast<long>(k), coeffs_.end()));
    }

    /// x^deg * p(1/x).
    Poly reversed() const {
        std::vector<Rational> v(coeffs_.rbegin(), coeffs_.rend());
        return Poly(std::move(v));
    }

    /// p(x + a) by Horner on the shifted basis.
    Poly taylor_shift(const Rational& a) const {
        Poly r;
        Poly lin(std::vector<Rational>{a, Rational(1)});
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) r = r * lin + Poly(*it);
        return r;
    }

    /// p(c x).
    Poly scale_arg(const Rational& c) const {
        std::vector<Rational> v(coeffs_);
        Rational p(1);
        for (std::size_t i = 1; i < v.size(); ++i) {
            p *= c;
            v[i] *= p;
        }
        return Poly(std::move(v));
    }

    Poly monic() const {
        if (is_zero()) return Poly();
        return *this * (Rational(1) / leading());
    }

    /// Coefficient-wise absolute values.
    Poly abs() const {
        std::vector<Rational> v(coeffs_);
        for (auto& c : v) c = ::abs(c);
        return Poly(std::move(v));
    }

    std::string to_string(const std::string& var = "x") const {
        if (is_zero()) return "0";
        std::string s;
        for (long i = degree(); i >= 0; --i) {
            const Rational& c = coeffs_[static_cast<std::size_t>(i)];
            if (c == 0) continue;
            if (!s.empty()) s += (c > 0) ? " + " : " - ";
            else if (c < 0) s += "-";
            Rational a = ::abs(c);
            bool show_coeff = (a != 1) || (i == 0);
            if (show_coeff) s += a.get_str();
            if (i > 0) {
                if (show_coeff) s += "*";
                s += var;
                if (i > 1) s += "^" + std::to_string(i);
            }
        }
        return s;
    }

  private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    }

    std::vector<Rational> coeffs_;
};

inline Poly operator*(const Rational& c, const Poly& p) { return p * c; }

/// Positive-rational rescale to a primitive integer polynomial (signs kept).
inline Poly primitive_positive(const Poly& p) {
    if (p.is_zero()) return p;
    mpz_class l(1);
    for (const auto& c : p.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    mpz_class g(0);
    for (const auto& c : p.coeffs()) {
        mpz_class t = c.get_num() * l / c.get_den();
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.get_mpz_t());
    }
    Rational scale(l, g);
    scale.canonicalize();
    return p * scale;
}

/// Monic gcd over Q; primitive remainders keep coefficient sizes in check.
inline Poly poly_gcd(Poly a, Poly b) {
    a = primitive_positive(a);
    b = primitive_positive(b);
    while (!b.is_zero()) {
        Poly r = primitive_positive(a % b);
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

/// Extended Euclid: returns (g, u, v) with u a + v b = g, g = gcd monic.
inline std::tuple<Poly, Poly, Poly> poly_ext_gcd(const Poly& a, const Poly& b) {
    Poly r0 = a, r1 = b;
    Poly u0 = Poly::one(), u1 = Poly::zero();
    Poly v0 = Poly::zero(), v1 = Poly::one();
    while (!r1.is_zero()) {
        auto [q, r] = r0.divmod(r1);
        Poly u2 = u0 - q * u1, v2 = v0 - q * v1;
        r0 = std::move(r1); r1 = std::move(r);
        u0 = std::move(u1); u1 = std::move(u2);
        v0 = std::move(v1); v1 = std::move(v2);
    }
    if (r0.is_zero()) return {Poly(), Poly(), Poly()};
    Rational inv = Rational(1) / r0.leading();
    return {r0 * inv, u0 * inv, v0 * inv};
}

/// Product of the distinct irreducible factors (monic).
inline Poly squarefree_part(const Poly& p) {
    if (p.is_zero()) return Poly();
    if (p.degree() == 0) return Poly::one();
    return p.exact_div(poly_gcd(p, p.derivative())).monic();
}

/// Yun squarefree decomposition: p = lc * prod F_i^i with the F_i monic,
/// squarefree and pairwise coprime. Entry i-1 of the result is F_i.
inline std::vector<Poly> squarefree_factorization(const Poly& p) {
    if (p.is_zero()) throw std::domain_error("squarefree factorization of zero polynomial");
    std::vector<Poly> factors;
    if (p.degree() == 0) return factors;
    Poly q = p.monic();
    Poly g = poly_gcd(q, q.derivative());
    Poly w = q.exact_div(g);
    Poly y = q.derivative().exact_div(g);
    while (true) {
        Poly z = y - w.derivative();
        if (z.is_zero()) {
            factors.push_back(w.monic());
            break;
        }
        Poly f = poly_gcd(w, z);
        factors.push_back(f.monic());
        w = w.exact_div(f);
        y = z.exact_div(f);
    }
    return factors;
}

/// Squarefree factorization as (factor, multiplicity) pairs, constant
/// factors dropped, multiplicities increasing.
inline std::vector<std::pair<Poly, int>> squarefree_factorize(const Poly& p) {
    std::vector<Poly> raw = squarefree_factorization(p);
    std::vector<std::pair<Poly, int>> out;
    for (std::size_t i = 0; i < raw.size(); ++i)
        if (raw[i].degree() >= 1) out.emplace_back(raw[i], static_cast<int>(i) + 1);
    return out;
}

/// Resultant of a and b via the Euclidean remainder sequence.
inline Rational resultant(Poly a, Poly b) {
    if (a.is_zero() || b.is_zero()) return Rational(0);
    Rational r(1);
    while (b.degree() > 0) {
        Poly rem = a % b;
        long da = a.degree(), db = b.degree();
        long dr = rem.is_zero() ? -1 : rem.degree();
        if (rem.is_zero()) return Rational(0);
        // res(a, b) = (-1)^(da db) lc(b)^(da - dr) res(b, rem)
        Rational lc = b.leading();
        mpz_class num, den;
        mpz_pow_ui(num.get_mpz_t(), lc.get_num_mpz_t(), static_cast<unsigned long>(da - dr));
        mpz_pow_ui(den.get_mpz_t(), lc.get_den_mpz_t(), static_cast<unsigned long>(da - dr));
        Rational f(num, den);
        f.canonicalize();
        r *= f;
        if ((da & 1) && (db & 1)) r = -r;
        a = std::move(b);
        b = std::move(rem);
    }
    // deg b == 0: res(a, c) = c^deg(a)
    Rational c = b.coeff(0);
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), c.get_num_mpz_t(), static_cast<unsigned long>(a.degree()));
    mpz_pow_ui(den.get_mpz_t(), c.get_den_mpz_t(), static_cast<unsigned long>(a.degree()));
    Rational f(num, den);
    f.canonicalize();
    return r * f;
}

/// Unique interpolating polynomial of degree < points.size() through the
/// given (x, y) pairs; Newton divided differences.
inline Poly interpolate(const std::vector<std::pair<Rational, Rational>>& points) {
    std::size_t n = points.size();
    if (n == 0) return Poly();
    std::vector<Rational> dd(n);
    for (std::size_t i = 0; i < n; ++i) dd[i] = points[i].second;
    for (std::size_t level = 1; level < n; ++level)
        for (std::size_t i = n - 1; i >= level; --i) {
            Rational dx = points[i].first - points[i - level].first;
            if (dx == 0) throw std::invalid_argument("repeated interpolation node");
            dd[i] = (dd[i] - dd[i - 1]) / dx;
        }
    Poly r(dd[n - 1]);
    for (std::size_t i = n - 1; i-- > 0;) {
        Poly lin(std::vector<Rational>{-points[i].first, Rational(1)});
        r = r * lin + Poly(dd[i]);
    }
    return r;
}

/// Binomial coefficient C(n, k) as an exact rational (integer-valued).
inline Rational binomial(unsigned long n, unsigned long k) {
    if (k > n) return Rational(0);
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    return Rational(b);
}

}  // namespace prb
