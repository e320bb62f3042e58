#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "prb/dyadic.hpp"
#include "prb/modulus.hpp"
#include "prb/partial_fractions.hpp"
#include "prb/poly.hpp"
#include "prb/ratfun.hpp"

// Tight majorant constants for rational functions: given r = N/D with
// D(0) != 0, a scale polynomial P_alpha and m >= 1 with
// delta(P_alpha) <= delta(D) (and m >= ord_delta D on equality), compute M
// such that |r_n| <= M C(n+m-1, m-1) delta(P_alpha)^{-n} for all n, i.e.
// r(z) is majorized coefficientwise by M (1 - z/delta(P_alpha))^{-m}.
//
// Writing r = A + B/D and expanding B/D by partial fractions over the
// squarefree factorization D = prod D_i^i gives, for n > deg A,
//   r_n = sum_{i,d} sum_{D_i(zeta)=0} h_{i,d}(zeta) zeta^{-n-d} C(n+d-1, d-1),
// so with c_{i,d} >= sum_zeta |h_{i,d}(zeta) zeta^{-d}| the ratio |r_n| / b_n,
// b_n = C(n+m-1, m-1) delta(P_alpha)^{-n}, is at most
//   t(n) = sum_{i,d} c_{i,d} C(n+d-1,d-1)/C(n+m-1,m-1) lambda_i^n,
// lambda_i = delta(P_alpha)/delta(D_i) <= 1. Each term is non-increasing from
// n on as soon as lambda_i (n+d) <= n+m, which holds for every n when d <= m
// and from an explicitly computable index otherwise (lambda_i < 1 there by
// the precondition). M = max over the first N_0 exact ratios and t(N_0).

namespace prb {

namespace detail {

/// One partial-fraction tail term of t(n).
struct RatMajorantTerm {
    int d;            // pole order
    Rational c;       // certified upper bound on sum_zeta |h(zeta) zeta^-d|
    bool on_circle;   // delta(D_i) == delta(P_alpha), so lambda = 1 exactly
    IvQ lambda;       // enclosure of delta(P_alpha)/delta(D_i)
};

inline long ceil_to_long(const Rational& x) {
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return q.get_si();
}

}  // namespace detail

/// Result and refinement state of the rational-majorant computation.
struct RatMajorant {
    Rational M;        // |r_n| <= M C(n+m-1,m-1) delta(P_alpha)^{-n} for all n
    int m = 1;
    Poly alpha_poly;   // P_alpha
    long n0 = 1;       // prefix length; t is valid and non-increasing past it
    Rational t_n0;     // tail bound t(n0)
    Rational h_n0;     // max exact ratio over n < n0

    // internal state reused by refine()
    std::vector<detail::RatMajorantTerm> terms;
    IvQ delta_alpha;   // enclosure of delta(P_alpha)
};

namespace detail {

/// Upper bound on t(n) = sum_terms c C(n+d-1,d-1)/C(n+m-1,m-1) lambda^n.
inline Rational tail_term_sum(const std::vector<RatMajorantTerm>& terms, int m, long n) {
    Rational total(0);
    for (const auto& t : terms) {
        Rational ratio = binomial(static_cast<unsigned long>(n + t.d - 1), static_cast<unsigned long>(t.d - 1)) /
                         binomial(static_cast<unsigned long>(n + m - 1), static_cast<unsigned long>(m - 1));
        if (t.on_circle) {
            total += t.c * ratio;
        } else {
            IvQ p = t.lambda.pow(static_cast<unsigned long>(n)).shrink(192);
            total += (IvQ(t.c * ratio) * p).hi;
        }
    }
    return total;
}

/// Upper bound on max_{n < n0} |r_n| delta^n / C(n+m-1,m-1).
inline Rational prefix_max(const RatFun& r, const IvQ& delta, int m, long n0) {
    std::vector<Rational> coeffs = r.series_coefficients(static_cast<std::size_t>(n0));
    Rational best(0);
    IvQ dpow(Rational(1));
    for (long n = 0; n < n0; ++n) {
        if (n > 0) dpow = (dpow * delta).shrink(192);
        Rational rn = abs(coeffs[static_cast<std::size_t>(n)]);
        if (rn == 0) continue;
        Rational val = (IvQ(rn) * dpow).hi / binomial(static_cast<unsigned long>(n + m - 1), static_cast<unsigned long>(m - 1));
        best = std::max(best, val);
    }
    return best;
}

}  // namespace detail

/// Compute M with r(z) coefficientwise below M (1 - z/delta(P_alpha))^{-m}.
/// Requires 0 < delta(P_alpha) <= delta(den r), with equality only if
/// m >= ord of the dominant circle of den r.
inline RatMajorant bound_ratpoly(const RatFun& r, const Poly& p_alpha, int m) {
    if (m < 1) throw std::invalid_argument("majorant exponent m must be positive");
    if (r.den().coeff(0) == 0) throw std::domain_error("rational function has a pole at 0");
    AlgebraicModulus da(p_alpha);
    if (da.is_infinite()) throw std::domain_error("majorant scale too small");

    RatMajorant out;
    out.m = m;
    out.alpha_poly = p_alpha;
    out.delta_alpha = da.refined(64).enclosure();

    // split r = A + B/D and check the scale precondition against D
    auto [a_part, b_part] = r.num().divmod(r.den());
    if (!r.is_polynomial()) {
        AlgebraicModulus dd(r.den());
        Ordering cmp = compare_moduli(da, dd);
        if (cmp == Ordering::GT || (cmp == Ordering::EQ && m < dd.ord()))
            throw std::domain_error("majorant scale too small");
    }

    long n0 = 1;
    if (!a_part.is_zero()) n0 = std::max(n0, a_part.degree() + 1);

    if (!b_part.is_zero()) {
        auto factors = squarefree_factorize(r.den());
        PartialFractionData pf = partial_fractions(b_part, factors);
        for (const auto& term : pf.terms) {
            detail::RatMajorantTerm t;
            t.d = term.d;
            t.c = root_abs_sum_upper(term.h, term.d_i, term.d, 128);
            AlgebraicModulus di(term.d_i);
            Ordering cmp = compare_moduli(da, di);
            if (cmp == Ordering::GT) throw std::domain_error("majorant scale too small");
            t.on_circle = cmp == Ordering::EQ;
            if (t.on_circle) {
                t.lambda = IvQ(Rational(1));
            } else {
                // refine until the ratio's upper endpoint certifies lambda < 1
                long bits = 32;
                while (true) {
                    IvQ lam = da.refined(bits).enclosure() / di.refined(bits).enclosure();
                    if (lam.hi < 1) {
                        t.lambda = lam;
                        break;
                    }
                    bits *= 2;
                }
                if (t.d > m) {
                    // lambda (n+d) <= n+m from n >= (lambda d - m)/(1 - lambda)
                    Rational thr = (t.lambda.hi * Rational(t.d) - Rational(m)) / (Rational(1) - t.lambda.hi);
                    if (thr > Rational(n0)) n0 = std::max(n0, detail::ceil_to_long(thr));
                }
            }
            out.terms.push_back(std::move(t));
        }
    }

    out.n0 = n0;
    out.t_n0 = detail::tail_term_sum(out.terms, m, n0);
    out.h_n0 = detail::prefix_max(r, out.delta_alpha, m, n0);
    out.M = std::max(out.h_n0, out.t_n0);
    return out;
}

/// One refinement step: double the exactly-checked prefix. M never increases.
inline RatMajorant refine(const RatMajorant& state, const RatFun& r) {
    RatMajorant out = state;
    out.n0 = state.n0 * 2;
    out.t_n0 = detail::tail_term_sum(out.terms, out.m, out.n0);
    out.h_n0 = detail::prefix_max(r, out.delta_alpha, out.m, out.n0);
    out.M = std::min(state.M, std::max(out.h_n0, out.t_n0));
    return out;
}

/// Refine until the tail estimate no longer dominates or the prefix budget
/// is exhausted (further doubling cannot reduce max(h, t) usefully).
inline RatMajorant refine_fully(RatMajorant state, const RatFun& r) {
    while (state.n0 <= 512 && state.t_n0 > state.h_n0) state = refine(state, r);
    return state;
}

}  // namespace prb
