#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "prb/dyadic.hpp"
#include "prb/poly.hpp"

// The dominant-root-modulus engine. For a nonzero P in Q[z], delta(P) is the
// smallest modulus of a nonzero root and ord is the largest multiplicity
// attained on that circle. delta(P)^2 is always a real algebraic number: it
// is the smallest positive real root of the composed-product polynomial
// N(y) = Res_x(P(x), x^d P(y/x)), whose roots are all pairwise products of
// roots of P (the product of a dominant root with its conjugate realizes
// delta^2, and every positive real root of N is >= delta^2 by the triangle
// inequality on moduli). This gives exact comparisons via gcds and certified
// enclosures via Sturm bisection, with closed-form shortcuts for factors of
// degree at most 2.

namespace prb {

enum class Ordering { LT, EQ, GT };

namespace detail {

inline std::vector<Poly> sturm_chain(const Poly& w) {
    std::vector<Poly> chain;
    chain.push_back(primitive_positive(w));
    Poly d = w.derivative();
    if (d.is_zero()) return chain;
    chain.push_back(primitive_positive(d));
    while (true) {
        Poly r = chain[chain.size() - 2] % chain.back();
        if (r.is_zero()) break;
        chain.push_back(primitive_positive(-r));
        if (chain.back().degree() == 0) break;
    }
    return chain;
}

inline int sign_of(const Rational& q) { return q > 0 ? 1 : (q < 0 ? -1 : 0); }

inline int sign_variations(const std::vector<Poly>& chain, const Rational& x) {
    int vars = 0, prev = 0;
    for (const auto& p : chain) {
        int s = sign_of(p.eval(x));
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++vars;
        prev = s;
    }
    return vars;
}

/// Number of distinct real roots in (a, b]; requires a squarefree chain head.
inline int roots_in(const std::vector<Poly>& chain, const Rational& a, const Rational& b) {
    return sign_variations(chain, a) - sign_variations(chain, b);
}

/// 1 + max |c_i / c_d|: strict upper bound on all root moduli.
inline Rational cauchy_root_bound(const Poly& p) {
    Rational m(0);
    const Rational& lc = p.leading();
    for (long i = 0; i < p.degree(); ++i) m = std::max(m, static_cast<Rational>(abs(p.coeff(static_cast<std::size_t>(i)) / lc)));
    return m + 1;
}

/// N(y) = Res_x(P(x), x^d P(y/x)) by evaluation-interpolation; requires P(0) != 0.
inline Poly composed_product_with_self(const Poly& p) {
    long d = p.degree();
    std::size_t npts = static_cast<std::size_t>(d * d) + 1;
    std::vector<std::pair<Rational, Rational>> pts;
    pts.reserve(npts);
    for (std::size_t j = 0; j < npts; ++j) {
        Rational y(static_cast<long>(j));
        std::vector<Rational> q(static_cast<std::size_t>(d) + 1);
        Rational yp(1);
        for (long i = 0; i <= d; ++i) {
            q[static_cast<std::size_t>(d - i)] = p.coeff(static_cast<std::size_t>(i)) * yp;
            yp *= y;
        }
        pts.emplace_back(y, resultant(p, Poly(std::move(q))));
    }
    return interpolate(pts);
}

/// The modulus-squared data of one squarefree factor F with F(0) != 0.
/// Tracks delta(F)^2 either exactly or as a shrinking isolating interval
/// (lo, hi] around the smallest positive root of nsq.
struct ModulusData {
    Poly f;
    std::optional<Rational> exact_sq;
    Poly nsq;
    std::vector<Poly> chain;
    Rational barrier;  // 0 < barrier < every positive root of nsq
    Rational lo, hi;   // delta^2 in (lo, hi]

    explicit ModulusData(Poly factor) : f(std::move(factor)) {
        if (f.degree() < 1 || f.coeff(0) == 0) throw std::logic_error("modulus factor must be nonconstant with nonzero constant term");
        if (f.degree() == 1) {
            Rational root = -f.coeff(0) / f.coeff(1);
            exact_sq = root * root;
            return;
        }
        if (f.degree() == 2) {
            Rational a = f.coeff(2), b = f.coeff(1), c = f.coeff(0);
            if (b == 0) {
                // roots z^2 = -c/a, both of modulus-squared |c/a|
                exact_sq = abs(c / a);
                return;
            }
            Rational disc = b * b - 4 * a * c;
            if (disc < 0) {
                // conjugate pair, |root|^2 = c/a
                exact_sq = c / a;
                return;
            }
            if (mpz_perfect_square_p(disc.get_num_mpz_t()) && mpz_perfect_square_p(disc.get_den_mpz_t())) {
                mpz_class sn, sd;
                mpz_sqrt(sn.get_mpz_t(), disc.get_num_mpz_t());
                mpz_sqrt(sd.get_mpz_t(), disc.get_den_mpz_t());
                Rational sq(sn, sd);
                sq.canonicalize();
                Rational r1 = abs((-b + sq) / (2 * a)), r2 = abs((-b - sq) / (2 * a));
                Rational m = std::min(r1, r2);
                exact_sq = m * m;
                return;
            }
        }
        init_isolation();
    }

    bool exact() const { return exact_sq.has_value(); }

    /// Current enclosure of delta^2.
    IvQ sq_enclosure() const {
        if (exact_sq) return IvQ(*exact_sq);
        return IvQ(lo, hi);
    }

    IvQ delta_enclosure(mpfr_prec_t prec = 192) const {
        IvQ sq = sq_enclosure();
        return IvQ(iv_sqrt(sq.lo, prec).lo, iv_sqrt(sq.hi, prec).hi);
    }

    /// Exactly one root of nsq lies at or below hi?
    bool isolated() const {
        if (exact_sq) return true;
        return detail::roots_in(chain, barrier, hi) == 1;
    }

    void refine_step() {
        if (exact_sq) return;
        Rational mid = (lo + hi) / 2;
        if (detail::roots_in(chain, barrier, mid) >= 1) hi = mid;
        else lo = mid;
    }

    void refine_sq_width(const Rational& width) {
        while (!exact_sq && (hi - lo > width || !isolated())) refine_step();
    }

    /// Shrink until the delta enclosure has absolute width <= 2^-bits.
    void refine_bits(long bits) {
        if (exact_sq) return;
        Rational target(1);
        mpz_class p;
        mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(bits));
        target /= Rational(p);
        while (true) {
            IvQ d = delta_enclosure(static_cast<mpfr_prec_t>(std::max(192L, bits + 64)));
            if (d.width() <= target && isolated()) return;
            refine_step();
        }
    }

  private:
    void init_isolation() {
        nsq = squarefree_part(primitive_positive(composed_product_with_self(f)));
        nsq = primitive_positive(nsq);
        chain = detail::sturm_chain(nsq);
        Rational upper = detail::cauchy_root_bound(nsq);
        Rational lower = 1 / detail::cauchy_root_bound(nsq.reversed());
        barrier = lower / 2;
        lo = barrier;
        hi = upper;
        // bisect to the smallest positive root, then to isolation
        while (!isolated() || hi - lo > hi / 16) refine_step();
    }
};

inline Ordering compare_data(ModulusData a, ModulusData b) {
    if (a.exact() && b.exact()) {
        if (*a.exact_sq < *b.exact_sq) return Ordering::LT;
        if (*a.exact_sq > *b.exact_sq) return Ordering::GT;
        return Ordering::EQ;
    }
    std::optional<Poly> common;  // gcd of the two defining squarefree polynomials
    if (!a.exact() && !b.exact()) common = poly_gcd(a.nsq, b.nsq);
    while (true) {
        IvQ ia = a.sq_enclosure(), ib = b.sq_enclosure();
        if (ia.hi < ib.lo) return Ordering::LT;
        if (ib.hi < ia.lo) return Ordering::GT;
        if (a.exact() && !b.exact()) {
            if (b.nsq.eval(*a.exact_sq) == 0 && *a.exact_sq > b.lo && *a.exact_sq <= b.hi && b.isolated()) return Ordering::EQ;
        } else if (b.exact() && !a.exact()) {
            if (a.nsq.eval(*b.exact_sq) == 0 && *b.exact_sq > a.lo && *b.exact_sq <= a.hi && a.isolated()) return Ordering::EQ;
        } else if (!a.exact() && !b.exact()) {
            if (common->degree() >= 1 && a.isolated() && b.isolated()) {
                Rational l = std::max(a.lo, b.lo), h = std::min(a.hi, b.hi);
                if (l < h) {
                    auto gchain = detail::sturm_chain(*common);
                    if (detail::roots_in(gchain, l, h) >= 1) return Ordering::EQ;
                }
            }
        }
        a.refine_step();
        b.refine_step();
    }
}

}  // namespace detail

/// delta(P) with its multiplicity; INFINITE for monomials (no nonzero root).
class AlgebraicModulus {
  public:
    /// Build from any nonzero polynomial.
    explicit AlgebraicModulus(const Poly& p) : defining_poly_(p) {
        if (p.is_zero()) throw std::domain_error("dominant modulus of zero polynomial");
        Poly q = p.shift_down(p.valuation());
        if (q.degree() == 0) {
            infinite_ = true;
            ord_ = 1;
            return;
        }
        std::vector<Poly> fac = squarefree_factorization(q);
        for (std::size_t i = 0; i < fac.size(); ++i) {
            if (fac[i].degree() < 1) continue;
            detail::ModulusData d(fac[i]);
            if (factors_.empty()) {
                factors_.push_back(std::move(d));
                mults_.push_back(static_cast<int>(i) + 1);
                continue;
            }
            Ordering c = detail::compare_data(d, factors_.front());
            if (c == Ordering::LT) {
                factors_.clear();
                mults_.clear();
                factors_.push_back(std::move(d));
                mults_.push_back(static_cast<int>(i) + 1);
            } else if (c == Ordering::EQ) {
                factors_.push_back(std::move(d));
                mults_.push_back(static_cast<int>(i) + 1);
            }
        }
        ord_ = 1;
        for (int m : mults_) ord_ = std::max(ord_, m);
    }

    bool is_infinite() const { return infinite_; }
    int ord() const { return ord_; }
    const Poly& defining_poly() const { return defining_poly_; }

    /// Current enclosure of delta (positive).
    IvQ enclosure() const {
        require_finite();
        return factors_.front().delta_enclosure();
    }

    /// Is delta known as an exact rational (or exact square root of one)?
    bool exact_square() const {
        require_finite();
        return factors_.front().exact();
    }

    /// delta^2 when exactly known.
    Rational exact_sq() const {
        require_finite();
        if (!factors_.front().exact()) throw std::logic_error("modulus is not exactly known");
        return *factors_.front().exact_sq;
    }

    /// New value whose delta enclosure has width <= 2^-bits.
    AlgebraicModulus refined(long bits) const {
        require_finite();
        AlgebraicModulus r = *this;
        for (auto& f : r.factors_) f.refine_bits(bits);
        return r;
    }

    /// Certified one-sided dyadic-friendly rational bound on delta.
    Rational lower(long bits) const { return refined(bits).enclosure().lo; }
    Rational upper(long bits) const {
        require_finite();
        return refined(bits).enclosure().hi;
    }

    friend Ordering compare_moduli(const AlgebraicModulus& a, const AlgebraicModulus& b);

  private:
    void require_finite() const {
        if (infinite_) throw std::domain_error("dominant modulus is infinite (monomial)");
    }

    Poly defining_poly_;
    bool infinite_ = false;
    int ord_ = 1;
    std::vector<detail::ModulusData> factors_;  // all factors on the dominant circle
    std::vector<int> mults_;
};

inline AlgebraicModulus dominant_modulus(const Poly& p) { return AlgebraicModulus(p); }

inline Ordering compare_moduli(const AlgebraicModulus& a, const AlgebraicModulus& b) {
    if (a.infinite_ && b.infinite_) return Ordering::EQ;
    if (a.infinite_) return Ordering::GT;
    if (b.infinite_) return Ordering::LT;
    return detail::compare_data(a.factors_.front(), b.factors_.front());
}

enum class Direction { LOWER, UPPER };

/// One-sided approximation of delta, within 2^-bits of the true value.
inline Rational approx_modulus(const AlgebraicModulus& a, Direction direction, long bits) {
    if (bits < 1) throw std::invalid_argument("bits must be >= 1");
    if (a.is_infinite()) throw std::domain_error("cannot approximate an infinite modulus");
    return direction == Direction::LOWER ? a.lower(bits) : a.upper(bits);
}

/// Certified upper bound on the largest root modulus; requires a nonzero root.
inline Rational max_root_modulus_upper(const Poly& p, long bits = 64) {
    Poly q = p.shift_down(p.valuation());
    if (q.degree() == 0) return Rational(0);
    AlgebraicModulus rev(q.reversed());
    return 1 / rev.lower(bits);
}

/// Certified upper bound on sum over roots zeta of D of |h(zeta) zeta^-d|.
/// Exact for deg D <= 1, near-tight for deg D = 2, coefficient-bound fallback
/// otherwise. D must be squarefree with D(0) != 0.
inline Rational root_abs_sum_upper(const Poly& h_in, const Poly& d_poly, long d, long bits = 64) {
    if (d_poly.degree() < 1) return Rational(0);
    if (d_poly.coeff(0) == 0) throw std::domain_error("denominator factor vanishes at 0");
    Poly h = h_in % d_poly;
    if (h.is_zero()) return Rational(0);
    long m = d_poly.degree();
    mpfr_prec_t prec = static_cast<mpfr_prec_t>(std::max(192L, bits + 64));

    if (m == 1) {
        Rational zeta = -d_poly.coeff(0) / d_poly.coeff(1);
        Rational val = abs(h.eval(zeta));
        Rational az = abs(zeta);
        for (long i = 0; i < d; ++i) val /= az;
        return val;
    }
    if (m == 2) {
        Rational a = d_poly.coeff(2), b = d_poly.coeff(1), c = d_poly.coeff(0);
        Rational disc = b * b - 4 * a * c;
        if (disc < 0) {
            // conjugate pair: |h(zeta)|^2 = h(zeta) h(conj zeta) is rational
            mpz_class lp_num, lp_den;
            mpz_pow_ui(lp_num.get_mpz_t(), a.get_num_mpz_t(), static_cast<unsigned long>(h.degree()));
            mpz_pow_ui(lp_den.get_mpz_t(), a.get_den_mpz_t(), static_cast<unsigned long>(h.degree()));
            Rational lc_pow(lp_num, lp_den);
            lc_pow.canonicalize();
            Rational hsq = resultant(d_poly, h) / lc_pow;
            if (hsq < 0) throw std::logic_error("negative squared modulus");
            Rational modsq = c / a;  // |zeta|^2
            Rational inside = hsq;
            for (long i = 0; i < d; ++i) inside /= modsq;
            return 2 * iv_sqrt(inside, prec).hi;
        }
        // two real roots
        IvQ sq = iv_sqrt(disc, prec);
        Rational total(0);
        for (int sgn : {+1, -1}) {
            IvQ root = (IvQ(-b) + IvQ(Rational(sgn)) * sq) / IvQ(2 * a);
            IvQ aroot = root.abs();
            if (aroot.lo <= 0) {
                // fall back on the exact product of the two root moduli
                Rational other_hi = ((IvQ(-b) + IvQ(Rational(-sgn)) * sq) / IvQ(2 * a)).abs().hi;
                aroot = IvQ(abs(c / a) / other_hi, aroot.hi);
                if (aroot.lo <= 0) throw std::logic_error("root enclosure touches zero");
            }
            Rational habs = h.eval(root).abs().hi;
            Rational val = habs;
            for (long i = 0; i < d; ++i) val /= aroot.lo;
            total += val;
        }
        return total;
    }
    // generic fallback: |h(zeta) zeta^-d| <= sum_j |h_j| B(j - d) per root
    Rational big = max_root_modulus_upper(d_poly, bits);
    Rational small = AlgebraicModulus(d_poly).lower(bits);
    Rational per_root(0);
    for (long j = 0; j <= h.degree(); ++j) {
        Rational term = abs(h.coeff(static_cast<std::size_t>(j)));
        long e = j - d;
        for (long i = 0; i < e; ++i) term *= big;
        for (long i = 0; i < -e; ++i) term /= small;
        per_root += term;
    }
    return Rational(m) * per_root;
}

}  // namespace prb
