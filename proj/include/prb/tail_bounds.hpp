#pragma once

#include <stdexcept>
#include <vector>

#include "prb/sequence_bounds.hpp"

// Certified bounds on the tails of the series sum_k u_k z^k and of its
// derivatives, evaluated from a sequence-bound certificate, together with a
// truncation-order solver: the smallest index N such that dropping all terms
// of index >= N changes the value of the j-th derivative at z by at most a
// prescribed eps. Requires kappa <= 0 (a convergent series).
//
// Three evaluation regimes:
//   CLOSED_FORM  kappa = T = 0: exact tail of A (1 - alpha x)^{-K} through
//                the rising-factorial basis change; all terms positive, so
//                the summation is stable.
//   LARGE_N      saddle-point bound v~^{(j)}(r_n) / psi_n (x/r_n)^n h(x/r_n),
//                valid once n clears an explicit threshold.
//   SMALL_N      an n-independent bound that always applies for kappa <= 0.

namespace prb {

enum class TailRegime { LARGE_N, SMALL_N, CLOSED_FORM };

struct TailQuery {
    BoundParams params;
    Rational point_modulus;  // |z|, exact or a certified upper bound
    long derivative = 0;     // j
    long n = 0;              // tail start index
};

struct TailEvaluation {
    TailRegime regime = TailRegime::SMALL_N;
    Rational r;        // evaluation radius r_n (LARGE_N) or r (SMALL_N), upper
    Rational h_value;  // geometric correction factor, upper
    Rational bound;    // certified upper bound on |sum_{k>=n} (u^{(j)})_k z^k|
};

namespace detail {

/// Horner evaluation of a polynomial with nonnegative coefficients.
inline IvQ eval_poly_iv(const Poly& f, const IvQ& x) {
    IvQ acc{Rational(0)};
    for (long i = f.degree(); i >= 0; --i) acc = acc * x + IvQ(f.coeff(static_cast<std::size_t>(i)));
    return acc;
}

/// P_j with v~^{(j)}(r) = alpha^j P_j(w) v~(r), w = (1 - alpha r)^{-1}.
/// From d/dr w^s = s alpha w^{s+1} and (log v~)' = K alpha w^{T+1}:
/// P_0 = 1, P_{j+1} = w^2 P_j' + K w^{T+1} P_j. Nonnegative coefficients.
inline Poly derivative_weight(long t_irr, long k_const, long j) {
    Poly p = Poly::one();
    std::vector<Rational> wc(static_cast<std::size_t>(t_irr) + 2, Rational(0));
    wc.back() = Rational(k_const);
    Poly wt(std::move(wc));
    for (long i = 0; i < j; ++i) {
        Poly shifted = p.derivative();
        std::vector<Rational> c(static_cast<std::size_t>(shifted.degree()) + 3, Rational(0));
        for (long d = 0; d <= shifted.degree(); ++d) c[static_cast<std::size_t>(d) + 2] = shifted.coeff(static_cast<std::size_t>(d));
        p = Poly(std::move(c)) + wt * p;
    }
    return p;
}

/// v~(r) given w = (1 - alpha r)^{-1} as an enclosure.
inline IvQ tilde_v_of_w(const BoundParams& b, const IvQ& w, mpfr_prec_t prec) {
    if (b.T == 0) return (IvQ(b.A) * pow_shrink(w, b.K, prec)).shrink(prec);
    Rational kt(b.K, b.T);
    kt.canonicalize();
    IvQ arg = IvQ(kt) * pow_shrink(w, b.T, prec);
    return (IvQ(b.A) * IvQ(iv_exp(arg.lo, prec).lo, iv_exp(arg.hi, prec).hi)).shrink(prec);
}

/// Exact tail of (1 - alpha x)^{-kk} from index n via the basis change
/// (n+k+1)^{rising kk-1} = sum_i c_i(n) (k+1)^{rising i-1}: the tail equals
/// (alpha x)^n / (kk-1)! sum_i (i-1)! c_i / (1 - alpha x)^i, all c_i >= 0.
inline IvQ closed_form_tail(long kk, long n, const IvQ& ax, mpfr_prec_t prec) {
    // f(k) = prod_{s=1}^{kk-1} (n + k + s), exact coefficients in k
    Poly f = Poly::one();
    for (long s = 1; s < kk; ++s) f = f * Poly(std::vector<Rational>{Rational(n + s), Rational(1)});
    // basis b_i(k) = (k+1)^{rising i-1}, i = 1..kk; eliminate top down
    std::vector<Poly> basis;
    Poly acc = Poly::one();
    basis.push_back(acc);
    for (long i = 2; i <= kk; ++i) {
        acc = acc * Poly(std::vector<Rational>{Rational(i - 1), Rational(1)});
        basis.push_back(acc);
    }
    std::vector<Rational> c(static_cast<std::size_t>(kk), Rational(0));
    for (long i = kk; i >= 1; --i) {
        Rational coef = f.coeff(static_cast<std::size_t>(i - 1));
        c[static_cast<std::size_t>(i - 1)] = coef;
        f = f - basis[static_cast<std::size_t>(i - 1)] * coef;
    }
    IvQ one_minus = IvQ(Rational(1)) - ax;
    if (!(one_minus.lo > 0)) throw std::domain_error("point outside the certified disk");
    mpz_class fac;
    mpz_fac_ui(fac.get_mpz_t(), static_cast<unsigned long>(kk - 1));
    IvQ sum{Rational(0)};
    IvQ wpow = IvQ(Rational(1)) / one_minus;
    mpz_class ifac(1);
    for (long i = 1; i <= kk; ++i) {
        sum += IvQ(static_cast<Rational>(Rational(ifac) * c[static_cast<std::size_t>(i - 1)])) * wpow;
        wpow = (wpow / one_minus).shrink(prec);
        ifac *= i;
    }
    return (pow_shrink(ax, n, prec) * sum / IvQ(Rational(fac))).shrink(prec);
}

/// Enclosure of r_n = alpha^{-1} (1 - (K/(n+K+1))^{1/(T+1)}).
inline IvQ saddle_radius(const BoundParams& b, long n, const IvQ& alpha, mpfr_prec_t prec) {
    Rational frac(b.K, n + b.K + 1);
    frac.canonicalize();
    IvQ root = iv_rootn(frac, static_cast<unsigned long>(b.T) + 1, prec);
    return ((IvQ(Rational(1)) - root) / alpha).shrink(prec);
}

struct CoreTail {
    TailRegime regime = TailRegime::SMALL_N;
    IvQ r;
    IvQ h;
    IvQ bound;
};

/// Upper bound on sum_{k>=n} of the series coefficients of V^{(j)} times
/// x^k, where V(x) = sum_k (v~_k / psi_k) x^k is the certificate majorant of
/// the shifted sequence.
inline CoreTail core_tail(const BoundParams& b, const Rational& x, long j, long n, mpfr_prec_t prec) {
    CoreTail out;
    if (b.A == 0 || x < 0) {
        out.regime = TailRegime::CLOSED_FORM;
        return out;
    }
    if (n < 0) n = 0;
    IvQ alpha = alpha_enclosure(b.p_alpha, prec);
    IvQ ax = (IvQ(x) * alpha).shrink(prec);
    NormalizerSpec ns{b.p, b.q};

    if (b.p == 0 && b.T == 0) {
        // closed form: V^{(j)} = A K^{rising j} alpha^j (1 - alpha x)^{-(K+j)}
        if (!(ax.hi < 1)) throw std::domain_error("point outside the certified disk");
        IvQ factor{b.A};
        for (long i = 0; i < j; ++i) factor *= IvQ(Rational(b.K + i)) * alpha;
        out.regime = TailRegime::CLOSED_FORM;
        out.r = IvQ(x);
        out.h = IvQ(Rational(1)) / (IvQ(Rational(1)) - ax);
        out.bound = (factor * closed_form_tail(b.K + j, n, ax, prec)).shrink(prec);
        return out;
    }

    Poly pj = derivative_weight(b.T, b.K, j);
    bool have = false;

    // LARGE_N: check the explicit threshold, then evaluate eq. (tails)
    bool condn;
    if (b.p == 0) {
        condn = ax.hi < 1 &&
                (IvQ(Rational(n)) - IvQ(Rational(b.K)) * pow_shrink(IvQ(Rational(1)) - ax, -(b.T + 1), prec)).lo > 0;
    } else {
        condn = false;
        if (x > 0) {
            Rational e(-b.q, b.p);
            e.canonicalize();
            IvQ y = iv_pow(ax, e, prec);  // (alpha x)^{-q/p} > 0
            IvQ frac = IvQ(Rational(b.K)) / (y + IvQ(Rational(b.K + 1)));
            IvQ root = IvQ(iv_pow(frac.lo, Rational(1, b.T + 1), prec).lo, iv_pow(frac.hi, Rational(1, b.T + 1), prec).hi);
            IvQ inner = IvQ(Rational(1)) - root;
            if (inner.lo > 0) {
                IvQ rhs = y / IvQ(iv_pow(inner.lo, e, prec).lo, iv_pow(inner.hi, e, prec).hi);
                condn = (IvQ(Rational(n)) - rhs).lo > 0;
            }
        } else {
            condn = n >= 1;  // x = 0: the tail is 0 for n >= 1
        }
    }
    if (condn && x > 0) {
        IvQ rn = saddle_radius(b, n, alpha, prec);
        IvQ xr = (IvQ(x) / rn).shrink(prec);
        // h(x') = sum_{u<q} x'^u / (1 - x'^q (n+q)^p)
        Rational np(1);
        for (long i = 0; i < -b.p; ++i) np *= Rational(n + b.q);
        IvQ denom = IvQ(Rational(1)) - pow_shrink(xr, b.q, prec) / IvQ(np);
        if (denom.lo > 0 && (b.p < 0 || xr.hi < 1)) {
            IvQ num{Rational(0)}, xp{Rational(1)};
            for (long u = 0; u < b.q; ++u) {
                num += xp;
                xp = (xp * xr).shrink(prec);
            }
            IvQ h = (num / denom).shrink(prec);
            IvQ w = IvQ(Rational(1)) / (IvQ(Rational(1)) - (alpha * rn).shrink(prec));
            IvQ vj = (pow_shrink(alpha, j, prec) * eval_poly_iv(pj, w) * tilde_v_of_w(b, w, prec)).shrink(prec);
            IvQ bound = (vj / ns.psi(n, prec) * pow_shrink(xr, n, prec) * h).shrink(prec);
            out.regime = TailRegime::LARGE_N;
            out.r = rn;
            out.h = h;
            out.bound = bound;
            have = true;
        }
    } else if (condn) {  // x = 0, n >= 1
        out.regime = TailRegime::LARGE_N;
        out.h = IvQ(Rational(1));
        out.bound = IvQ(Rational(0));
        return out;
    }

    // SMALL_N (kappa < 0 always; kappa = 0 needs alpha x < 1); take the min
    if (b.p == 0) {
        if (ax.hi < 1 && !have) {
            IvQ w = IvQ(Rational(1)) / (IvQ(Rational(1)) - ax);
            IvQ bound = (pow_shrink(alpha, j, prec) * eval_poly_iv(pj, w) * tilde_v_of_w(b, w, prec)).shrink(prec);
            out.regime = TailRegime::SMALL_N;
            out.r = IvQ(x);
            out.h = w;
            out.bound = bound;
            have = true;
        }
    } else {
        // r = (x + 1/alpha)/2 clamped into (0, 1/alpha)
        IvQ inv_a = (IvQ(Rational(1)) / alpha).shrink(prec);
        IvQ r = ((IvQ(x) + inv_a) * IvQ(Rational(1, 2))).shrink(prec);
        if (!(r.hi < inv_a.lo)) r = (inv_a * IvQ(Rational(1, 2))).shrink(prec);
        if (!(r.lo > 0)) r = (inv_a * IvQ(Rational(1, 2))).shrink(prec);
        IvQ xr = (IvQ(x) / r).shrink(prec);
        Rational e(-b.q, b.p);
        e.canonicalize();
        IvQ expo;
        if (x == 0) {
            expo = IvQ(Rational(1));
        } else {
            Rational coef(-b.p, b.q);
            coef.canonicalize();
            IvQ arg = IvQ(coef) * IvQ(iv_pow(xr.lo, e, prec).lo, iv_pow(xr.hi, e, prec).hi);
            expo = IvQ(iv_exp(arg.lo, prec).lo, iv_exp(arg.hi, prec).hi);
        }
        IvQ geom{Rational(0)}, xp{Rational(1)};
        for (long u = 0; u < b.q; ++u) {
            geom += xp;
            xp = (xp * xr).shrink(prec);
        }
        IvQ w = IvQ(Rational(1)) / (IvQ(Rational(1)) - (alpha * r).shrink(prec));
        IvQ vj = (pow_shrink(alpha, j, prec) * eval_poly_iv(pj, w) * tilde_v_of_w(b, w, prec)).shrink(prec);
        IvQ bound = (vj * expo * geom).shrink(prec);
        if (!have || bound.hi < out.bound.hi) {
            out.regime = TailRegime::SMALL_N;
            out.r = r;
            out.h = geom;
            out.bound = bound;
            have = true;
        }
    }
    if (!have) throw std::domain_error("point outside the certified disk");
    return out;
}

}  // namespace detail

inline TailEvaluation tail_bound(const TailQuery& q, mpfr_prec_t prec = 192) {
    const BoundParams& b = q.params;
    if (b.p > 0) throw std::domain_error("divergent series: no tail bound");
    if (q.derivative < 0 || q.derivative > 64) throw std::invalid_argument("derivative order must be in [0, 64]");
    long j = q.derivative;
    long n = q.n < 0 ? 0 : q.n;
    long m = static_cast<long>(b.valuation_prefix.size());
    const Rational& x = q.point_modulus;
    if (x < 0) throw std::invalid_argument("point modulus must be nonnegative");

    IvQ total{Rational(0)};
    // terms of the explicit prefix that survive the derivative and the cut
    for (long k = std::max(n, j); k < m; ++k) {
        Rational fall(1);
        for (long i = 0; i < j; ++i) fall *= Rational(k - i);
        IvQ xp = detail::pow_shrink(IvQ(x), k - j, prec);
        total += IvQ(static_cast<Rational>(b.valuation_prefix[static_cast<std::size_t>(k)] * fall)) * xp;
    }
    // d^j/dx^j [x^m V(x)] = sum_t C(j,t) m^{falling t} x^{m-t} V^{(j-t)}(x),
    // and the coefficient tail of x^s G(x) from n is x^s times that of G
    // from n - s.
    TailEvaluation out;
    bool regime_set = false;
    for (long t = 0; t <= std::min(j, m); ++t) {
        Rational fall(1);
        for (long i = 0; i < t; ++i) fall *= Rational(m - i);
        Rational weight = binomial(static_cast<unsigned long>(j), static_cast<unsigned long>(t)) * fall;
        detail::CoreTail ct = detail::core_tail(b, x, j - t, n - m + t, prec);
        total += IvQ(weight) * detail::pow_shrink(IvQ(x), m - t, prec) * ct.bound;
        if (!regime_set) {
            out.regime = ct.regime;
            out.r = ct.r.hi;
            out.h_value = ct.h.hi;
            regime_set = true;
        }
    }
    out.bound = total.shrink(prec).hi;
    return out;
}

/// Smallest N (up to the doubling/binary-search granularity of the monotone
/// regime) with tail_bound(N) <= eps.
inline long truncation_order(const BoundParams& b, const Rational& point_modulus, const Rational& eps, long j = 0,
                             mpfr_prec_t prec = 192) {
    if (eps <= 0) throw std::invalid_argument("eps must be positive");
    auto bound_at = [&](long n) {
        TailQuery q{b, point_modulus, j, n};
        return tail_bound(q, prec).bound;
    };
    if (bound_at(0) <= eps) return 0;
    const long cap = 1000000000L;
    long hi = 1;
    while (bound_at(hi) > eps) {
        if (hi >= cap) throw std::runtime_error("tail bound does not reach the target accuracy at this point");
        hi = std::min(cap, hi * 2);
    }
    long lo = hi / 2;  // bound_at(lo) > eps
    while (hi - lo > 1) {
        long mid = lo + (hi - lo) / 2;
        if (bound_at(mid) <= eps)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

}  // namespace prb
