#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <string>
#include <utility>

#include "prb/rational.hpp"

// Directed-rounding scalar kernel. All certified quantities in this library
// are rationals; irrational functions (sqrt, exp, log, Gamma, powers) enter
// through the helpers below, which evaluate in MPFR at a requested precision
// and convert the result back to an exact rational bound on the requested
// side. Every dyadic float is a rational, so no information is lost in the
// conversion.

namespace prb {

/// RAII wrapper around a single mpfr_t.
class Mpfr {
  public:
    explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(x_, prec); }
    ~Mpfr() { mpfr_clear(x_); }
    Mpfr(const Mpfr&) = delete;
    Mpfr& operator=(const Mpfr&) = delete;
    mpfr_ptr get() { return x_; }
    mpfr_srcptr get() const { return x_; }

  private:
    mpfr_t x_;
};

/// Exact conversion mpfr -> mpq (every finite mpfr value is dyadic).
inline Rational mpfr_to_rational(mpfr_srcptr x) {
    if (!mpfr_number_p(x)) throw std::domain_error("non-finite value in bound computation");
    if (mpfr_zero_p(x)) return Rational(0);
    mpz_class m;
    mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x);
    Rational q(m);
    if (e >= 0) {
        mpz_class p;
        mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e));
        q *= Rational(p);
    } else {
        mpz_class p;
        mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(-e));
        q /= Rational(p);
    }
    q.canonicalize();
    return q;
}

/// Closed rational interval [lo, hi]; the workhorse for outward-rounded
/// enclosures. Arithmetic is exact; use shrink() to keep endpoint sizes
/// under control on long computations.
struct IvQ {
    Rational lo, hi;

    IvQ() : lo(0), hi(0) {}
    IvQ(Rational point) : lo(point), hi(std::move(point)) {}
    IvQ(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
        if (lo > hi) throw std::logic_error("inverted interval");
    }

    bool contains_zero() const { return lo <= 0 && hi >= 0; }
    bool is_point() const { return lo == hi; }
    Rational width() const { return hi - lo; }

    IvQ operator+(const IvQ& o) const { return {lo + o.lo, hi + o.hi}; }
    IvQ operator-(const IvQ& o) const { return {lo - o.hi, hi - o.lo}; }
    IvQ operator-() const { return {-hi, -lo}; }
    IvQ operator*(const IvQ& o) const {
        Rational a = lo * o.lo, b = lo * o.hi, c = hi * o.lo, d = hi * o.hi;
        return {std::min(std::min(a, b), std::min(c, d)), std::max(std::max(a, b), std::max(c, d))};
    }
    IvQ operator/(const IvQ& o) const {
        if (o.contains_zero()) throw std::domain_error("interval division by zero");
        Rational a = lo / o.lo, b = lo / o.hi, c = hi / o.lo, d = hi / o.hi;
        return {std::min(std::min(a, b), std::min(c, d)), std::max(std::max(a, b), std::max(c, d))};
    }
    IvQ& operator+=(const IvQ& o) { return *this = *this + o; }
    IvQ& operator*=(const IvQ& o) { return *this = *this * o; }

    IvQ abs() const {
        if (lo >= 0) return *this;
        if (hi <= 0) return -*this;
        return {Rational(0), std::max(static_cast<Rational>(-lo), hi)};
    }

    IvQ pow(unsigned long e) const {
        IvQ r{Rational(1)};
        IvQ b = *this;
        while (e) {
            if (e & 1) r = r * b;
            // even powers of intervals straddling zero tighten at zero
            b = (e > 1) ? b * b : b;
            e >>= 1;
            if (e && b.contains_zero() && b.lo < 0) b = IvQ(Rational(0), std::max(static_cast<Rational>(-b.lo), b.hi) * std::max(static_cast<Rational>(-b.lo), b.hi));
        }
        return r;
    }

    /// Round endpoints outward to `prec`-bit dyadics.
    IvQ shrink(mpfr_prec_t prec) const {
        Mpfr t(prec);
        mpfr_set_q(t.get(), lo.get_mpq_t(), MPFR_RNDD);
        Rational l = mpfr_to_rational(t.get());
        mpfr_set_q(t.get(), hi.get_mpq_t(), MPFR_RNDU);
        Rational h = mpfr_to_rational(t.get());
        return {l, h};
    }

    static IvQ hull(const IvQ& a, const IvQ& b) {
        return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
    }
};

inline IvQ pow_int(const IvQ& x, long e) {
    if (e >= 0) return x.pow(static_cast<unsigned long>(e));
    return IvQ(Rational(1)) / x.pow(static_cast<unsigned long>(-e));
}

namespace detail {

using unary_mpfr = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t);

/// Enclosure of f over the exact rational point x; valid for any continuous
/// f because both rounding directions are taken on both roundings of x.
inline IvQ iv_unary(unary_mpfr f, const Rational& x, mpfr_prec_t prec) {
    Mpfr a(prec), b(prec), r(prec);
    mpfr_set_q(a.get(), x.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(b.get(), x.get_mpq_t(), MPFR_RNDU);
    Rational lo, hi;
    bool first = true;
    for (mpfr_srcptr arg : {static_cast<mpfr_srcptr>(a.get()), static_cast<mpfr_srcptr>(b.get())}) {
        f(r.get(), arg, MPFR_RNDD);
        Rational l = mpfr_to_rational(r.get());
        f(r.get(), arg, MPFR_RNDU);
        Rational h = mpfr_to_rational(r.get());
        if (first) {
            lo = l; hi = h; first = false;
        } else {
            lo = std::min(lo, l); hi = std::max(hi, h);
        }
    }
    return {lo, hi};
}

}  // namespace detail

inline IvQ iv_sqrt(const Rational& x, mpfr_prec_t prec = 192) {
    if (x < 0) throw std::domain_error("sqrt of negative");
    // exact when x is a perfect square of a rational
    if (mpz_perfect_square_p(x.get_num_mpz_t()) && mpz_perfect_square_p(x.get_den_mpz_t())) {
        mpz_class n, d;
        mpz_sqrt(n.get_mpz_t(), x.get_num_mpz_t());
        mpz_sqrt(d.get_mpz_t(), x.get_den_mpz_t());
        Rational r(n, d);
        r.canonicalize();
        return IvQ(r);
    }
    return detail::iv_unary(mpfr_sqrt, x, prec);
}

inline IvQ iv_sqrt(const IvQ& x, mpfr_prec_t prec = 192) {
    return IvQ(iv_sqrt(std::max(Rational(0), x.lo), prec).lo, iv_sqrt(x.hi, prec).hi);
}

inline IvQ iv_exp(const Rational& x, mpfr_prec_t prec = 192) {
    return detail::iv_unary(mpfr_exp, x, prec);
}

inline IvQ iv_exp(const IvQ& x, mpfr_prec_t prec = 192) {
    return IvQ(iv_exp(x.lo, prec).lo, iv_exp(x.hi, prec).hi);
}

inline IvQ iv_log(const Rational& x, mpfr_prec_t prec = 192) {
    if (x <= 0) throw std::domain_error("log of nonpositive");
    if (x == 1) return IvQ(Rational(0));
    return detail::iv_unary(mpfr_log, x, prec);
}

inline IvQ iv_log(const IvQ& x, mpfr_prec_t prec = 192) {
    return IvQ(iv_log(x.lo, prec).lo, iv_log(x.hi, prec).hi);
}

/// Gamma over an exact rational argument > 0. Not monotone near 1.46, so
/// both endpoint images are hulled; for straddling enclosures we also mix in
/// a safe lower constant below the global minimum of Gamma on (1, 2).
inline IvQ iv_gamma(const Rational& x, mpfr_prec_t prec = 192) {
    if (x <= 0) throw std::domain_error("gamma argument must be positive here");
    return detail::iv_unary(mpfr_gamma, x, prec);
}

/// x^e for rational e and positive x, as an enclosure.
inline IvQ iv_pow(const Rational& x, const Rational& e, mpfr_prec_t prec = 192) {
    if (x <= 0) {
        if (x == 0 && e > 0) return IvQ(Rational(0));
        throw std::domain_error("pow base must be positive");
    }
    if (is_integer(e)) {
        long k = static_cast<long>(e.get_num().get_si());
        Rational r;
        mpz_class num, den;
        mpz_pow_ui(num.get_mpz_t(), x.get_num_mpz_t(), static_cast<unsigned long>(std::abs(k)));
        mpz_pow_ui(den.get_mpz_t(), x.get_den_mpz_t(), static_cast<unsigned long>(std::abs(k)));
        r = (k >= 0) ? Rational(num, den) : Rational(den, num);
        r.canonicalize();
        return IvQ(r);
    }
    // exp(e log x), outward
    IvQ l = iv_log(x, prec);
    IvQ prod = l * IvQ(e);
    return iv_exp(prod, prec);
}

inline IvQ iv_pow(const IvQ& x, const Rational& e, mpfr_prec_t prec = 192) {
    IvQ a = iv_pow(x.lo, e, prec), b = iv_pow(x.hi, e, prec);
    return IvQ::hull(a, b);
}

/// k-th root of a nonnegative rational.
inline IvQ iv_rootn(const Rational& x, unsigned long k, mpfr_prec_t prec = 192) {
    if (x < 0) throw std::domain_error("rootn of negative");
    if (k == 1) return IvQ(x);
    if (x == 0) return IvQ(Rational(0));
    return iv_pow(x, Rational(1, static_cast<long>(k)), prec);
}

inline IvQ iv_pi(mpfr_prec_t prec = 192) {
    Mpfr lo(prec), hi(prec);
    mpfr_const_pi(lo.get(), MPFR_RNDD);
    mpfr_const_pi(hi.get(), MPFR_RNDU);
    return IvQ(mpfr_to_rational(lo.get()), mpfr_to_rational(hi.get()));
}

/// Decimal string rendering, rounded up (for displayed certified constants).
inline std::string decimal_upper(const Rational& q, int digits = 6) {
    Mpfr t(256);
    mpfr_set_q(t.get(), q.get_mpq_t(), MPFR_RNDU);
    char* s = nullptr;
    mpfr_asprintf(&s, "%.*RUg", digits, t.get());
    std::string out(s);
    mpfr_free_str(s);
    return out;
}

/// Lossless hex-float rendering of the 256-bit upward rounding of q.
inline std::string hexfloat_upper(const Rational& q) {
    Mpfr t(256);
    mpfr_set_q(t.get(), q.get_mpq_t(), MPFR_RNDU);
    char* s = nullptr;
    mpfr_asprintf(&s, "%Ra", t.get());
    std::string out(s);
    mpfr_free_str(s);
    return out;
}

inline double to_double_up(const Rational& q) {
    Mpfr t(64);
    mpfr_set_q(t.get(), q.get_mpq_t(), MPFR_RNDU);
    return mpfr_get_d(t.get(), MPFR_RNDU);
}

}  // namespace prb
