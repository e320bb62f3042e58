#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace prb {

/// Exact rational numbers. mpq_class already maintains the canonical form
/// (denominator > 0, gcd(num, den) = 1) after canonicalize().
using Rational = mpq_class;

inline Rational rational_of(long num, long den = 1) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

/// a/b with arbitrary-precision parts, parsed from decimal strings.
inline Rational rational_from_string(const std::string& s) {
    Rational q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
    q.canonicalize();
    return q;
}

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

/// Element of Q[i]; the imaginary unit shows up in initial values of
/// sequences arising from evaluations of D-finite functions at complex points.
struct GaussianRational {
    Rational re, im;

    GaussianRational() = default;
    GaussianRational(Rational r) : re(std::move(r)), im(0) {}
    GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }

    GaussianRational operator+(const GaussianRational& o) const { return {re + o.re, im + o.im}; }
    GaussianRational operator-(const GaussianRational& o) const { return {re - o.re, im - o.im}; }
    GaussianRational operator-() const { return {-re, -im}; }
    GaussianRational operator*(const GaussianRational& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    GaussianRational operator*(const Rational& c) const { return {re * c, im * c}; }
    GaussianRational operator/(const Rational& c) const {
        if (c == 0) throw std::domain_error("division by zero");
        return {re / c, im / c};
    }
    GaussianRational operator/(const GaussianRational& o) const {
        Rational n = o.re * o.re + o.im * o.im;
        if (n == 0) throw std::domain_error("division by zero");
        return {(re * o.re + im * o.im) / n, (im * o.re - re * o.im) / n};
    }
    bool operator==(const GaussianRational& o) const { return re == o.re && im == o.im; }

    /// |.|^2, exact.
    Rational norm() const { return re * re + im * im; }
};

}  // namespace prb
