#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "prb/poly.hpp"

namespace prb {

/// Rational function num/den over Q, kept in lowest terms with monic
/// denominator. Used both as a function of the series variable z and as an
/// element of Q(n) in recurrence-operator arithmetic.
class RatFun {
  public:
    RatFun() : num_(), den_(Poly::one()) {}
    RatFun(Poly num) : num_(std::move(num)), den_(Poly::one()) {}
    RatFun(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) throw std::domain_error("zero denominator");
        normalize();
    }

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.degree() == 0; }

    bool operator==(const RatFun& o) const { return num_ == o.num_ && den_ == o.den_; }

    RatFun operator+(const RatFun& o) const { return RatFun(num_ * o.den_ + o.num_ * den_, den_ * o.den_); }
    RatFun operator-(const RatFun& o) const { return RatFun(num_ * o.den_ - o.num_ * den_, den_ * o.den_); }
    RatFun operator-() const { RatFun r = *this; r.num_ = -r.num_; return r; }
    RatFun operator*(const RatFun& o) const { return RatFun(num_ * o.num_, den_ * o.den_); }
    RatFun operator/(const RatFun& o) const {
        if (o.is_zero()) throw std::domain_error("division by zero rational function");
        return RatFun(num_ * o.den_, den_ * o.num_);
    }
    RatFun& operator+=(const RatFun& o) { return *this = *this + o; }
    RatFun& operator-=(const RatFun& o) { return *this = *this - o; }
    RatFun& operator*=(const RatFun& o) { return *this = *this * o; }

    /// Value at a rational point; throws if the point is a pole.
    Rational eval(const Rational& x) const {
        Rational d = den_.eval(x);
        if (d == 0) throw std::domain_error("evaluation at a pole");
        return num_.eval(x) / d;
    }

    bool is_pole(const Rational& x) const { return den_.eval(x) == 0; }

    RatFun derivative() const {
        return RatFun(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
    }

    /// First `count` Taylor coefficients at 0; requires den(0) != 0.
    std::vector<Rational> series_coefficients(std::size_t count) const {
        Rational d0 = den_.coeff(0);
        if (d0 == 0) throw std::domain_error("series expansion at a pole");
        std::vector<Rational> c(count, Rational(0));
        for (std::size_t n = 0; n < count; ++n) {
            Rational s = num_.coeff(n);
            for (std::size_t j = 1; j <= n; ++j) s -= den_.coeff(j) * c[n - j];
            c[n] = s / d0;
        }
        return c;
    }

  private:
    void normalize() {
        if (num_.is_zero()) {
            den_ = Poly::one();
            return;
        }
        Poly g = poly_gcd(num_, den_);
        num_ = num_.exact_div(g);
        den_ = den_.exact_div(g);
        Rational lc = den_.leading();
        num_ = num_ * (Rational(1) / lc);
        den_ = den_ * (Rational(1) / lc);
    }

    Poly num_, den_;
};

}  // namespace prb
