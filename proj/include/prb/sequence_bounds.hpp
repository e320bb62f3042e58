#pragma once

#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "prb/diffeq_majorant.hpp"
#include "prb/growth.hpp"
#include "prb/rec_operator.hpp"

// End-to-end bounds for P-recursive sequences. Given a nonsingular
// reversible recurrence and initial values (exact Gaussian rationals or
// moduli upper bounds), produce parameters (kappa = p/q, P_alpha, T, K, A)
// certifying
//
//   |u_n| <= v_n = q^{(p/q) n} Gamma(n/q + 1)^p vtilde_n
//
// where vtilde is the first-order majorant certificate (A, alpha, T, K) for
// the normalized generating series. When the operator has positive
// valuation m, the certificate covers the shifted sequence u_{n+m} and the
// first m moduli are carried along explicitly.

namespace prb {

struct BoundParams {
    Rational kappa;  // p/q in lowest terms
    long p = 0;
    long q = 1;
    Poly p_alpha;
    long T = 0;
    long K = 1;
    Rational A;
    std::vector<Rational> valuation_prefix;  // |u_0|, ..., |u_{m-1}| upper bounds
    MajorantSeries tilde;                    // certificate for the shifted normalized series
};

namespace detail {

inline void check_usable_shape(const RecShape& sh) {
    if (!sh.nonsingular)
        throw std::domain_error("recurrence is singular: leading coefficient vanishes at n = " + std::to_string(*sh.singular_at));
    if (!sh.reversible)
        throw std::domain_error("recurrence is not reversible: trailing coefficient vanishes at n = " + std::to_string(*sh.irreversible_at));
}

inline Rational modulus_upper(const GaussianRational& g, mpfr_prec_t prec = 256) {
    return iv_sqrt(g.norm(), prec).hi;
}

inline BoundParams finish_bound_rec(const RecOperator& shifted, const SeriesPrefixSource& src, std::vector<Rational> prefix) {
    GrowthData g = asympt(shifted);
    DiffOperatorTheta d = normalized_diffeq(shifted, g.kappa);
    MajorantSeries v = bound_normal_diffeq(d, g.p_alpha, src);
    BoundParams out;
    out.kappa = g.kappa;
    out.p = g.p;
    out.q = g.q;
    out.p_alpha = g.p_alpha;
    out.T = v.T;
    out.K = v.K;
    out.A = v.A;
    out.valuation_prefix = std::move(prefix);
    out.tilde = v;
    return out;
}

}  // namespace detail

/// Certificate from exact initial values u_0, ..., u_{s-1}.
inline BoundParams bound_rec(const RecOperator& r, const std::vector<GaussianRational>& init) {
    if (r.is_zero() || r.order() < 1) throw std::domain_error("operator must have positive order");
    if (static_cast<long>(init.size()) != r.order())
        throw std::invalid_argument("expected " + std::to_string(r.order()) + " initial values");
    long m = r.valuation();
    RecOperator rs = shift_valuation(r);
    detail::check_usable_shape(check_shape(rs));
    std::vector<GaussianRational> sinit(init.begin() + m, init.end());
    std::vector<Rational> prefix;
    for (long k = 0; k < m; ++k) prefix.push_back(detail::modulus_upper(init[static_cast<std::size_t>(k)]));
    GrowthData g = asympt(rs);
    NormalizerSpec ns = normalizer_for(g);
    SeriesPrefixSource src = [rs, sinit, ns](long n) {
        auto u = unroll(rs, sinit, std::max(n, 1L));
        std::vector<Rational> out(static_cast<std::size_t>(n));
        for (long k = 0; k < n; ++k)
            out[static_cast<std::size_t>(k)] = (IvQ(detail::modulus_upper(u[static_cast<std::size_t>(k)])) * ns.psi(k, 256)).hi;
        return out;
    };
    return detail::finish_bound_rec(rs, src, std::move(prefix));
}

/// Certificate from moduli upper bounds on the initial values (each u_k is
/// only known to lie in the disk |u_k| <= init_bounds[k]).
inline BoundParams bound_rec(const RecOperator& r, const std::vector<Rational>& init_bounds) {
    if (r.is_zero() || r.order() < 1) throw std::domain_error("operator must have positive order");
    if (static_cast<long>(init_bounds.size()) != r.order())
        throw std::invalid_argument("expected " + std::to_string(r.order()) + " initial values");
    long m = r.valuation();
    RecOperator rs = shift_valuation(r);
    detail::check_usable_shape(check_shape(rs));
    std::vector<Rational> sinit(init_bounds.begin() + m, init_bounds.end());
    std::vector<Rational> prefix(init_bounds.begin(), init_bounds.begin() + m);
    GrowthData g = asympt(rs);
    NormalizerSpec ns = normalizer_for(g);
    SeriesPrefixSource src = [rs, sinit, ns](long n) {
        auto beta = unroll_moduli_bounds(rs, sinit, std::max(n, 1L));
        std::vector<Rational> out(static_cast<std::size_t>(n));
        for (long k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = (IvQ(beta[static_cast<std::size_t>(k)]) * ns.psi(k, 256)).hi;
        return out;
    };
    return detail::finish_bound_rec(rs, src, std::move(prefix));
}

/// Certified upper bounds on |u_0|, ..., |u_{count-1}| in one pass.
inline std::vector<Rational> evaluate_bounds(const BoundParams& b, std::size_t count, mpfr_prec_t prec = 192) {
    std::vector<Rational> out;
    out.reserve(count);
    std::size_t m = b.valuation_prefix.size();
    for (std::size_t n = 0; n < std::min(count, m); ++n) out.push_back(b.valuation_prefix[n]);
    if (count <= m) return out;
    std::vector<IvQ> vt = majorant_coefficients(b.tilde, count - m, prec);
    NormalizerSpec ns{b.p, b.q};
    for (std::size_t j = 0; j + m < count; ++j)
        out.push_back((ns.psi_inverse(static_cast<long>(j), prec) * vt[j]).hi);
    return out;
}

/// Certified upper bound on |u_n|.
inline Rational evaluate_bound(const BoundParams& b, long n, mpfr_prec_t prec = 192) {
    if (n < 0) throw std::invalid_argument("index must be nonnegative");
    return evaluate_bounds(b, static_cast<std::size_t>(n) + 1, prec).back();
}

namespace detail {

/// Positive-interval power with per-step outward rounding, so endpoint sizes
/// stay near `prec` bits even for large exponents.
inline IvQ pow_shrink(IvQ base, long e, mpfr_prec_t prec) {
    bool invert = e < 0;
    unsigned long k = static_cast<unsigned long>(invert ? -e : e);
    IvQ r{Rational(1)};
    while (k) {
        if (k & 1) r = (r * base).shrink(prec);
        k >>= 1;
        if (k) base = (base * base).shrink(prec);
    }
    return invert ? IvQ(Rational(1)) / r : r;
}

/// A-free saddle-point factor S(n) >= vtilde_n / (A alpha^n), from the
/// evaluation of vtilde at the radius r_n of the text: exact rational for
/// T = 0, exp/root enclosure upper bound for T > 0.
inline IvQ saddle_factor(long t_irr, long k_const, long n, mpfr_prec_t prec) {
    Rational nk(n + k_const + 1);
    if (t_irr == 0) {
        // ((n+K+1)/K)^K * ((n+K+1)/(n+1))^n, all rational
        Rational s(1);
        for (long i = 0; i < k_const; ++i) s *= nk / Rational(k_const);
        Rational ratio = nk / Rational(n + 1);
        for (long i = 0; i < n; ++i) s *= ratio;
        return IvQ(s);
    }
    Rational frac = Rational(k_const) / nk;
    IvQ root = iv_rootn(frac, static_cast<unsigned long>(t_irr) + 1, prec);
    IvQ one_minus = IvQ(Rational(1)) - root;
    if (one_minus.lo <= 0) throw std::logic_error("saddle radius enclosure degenerate");
    IvQ inv = pow_shrink(one_minus, -n, prec);
    Rational expo_exp(t_irr, t_irr + 1);
    expo_exp.canonicalize();
    IvQ power = iv_pow(nk / Rational(k_const), expo_exp, prec);
    Rational kt(k_const, t_irr);
    kt.canonicalize();
    IvQ e = iv_exp(IvQ(kt) * power, prec);
    return (inv * e).shrink(prec);
}

inline IvQ alpha_enclosure(const Poly& p_alpha, mpfr_prec_t prec) {
    AlgebraicModulus da(p_alpha);
    return IvQ(Rational(1)) / da.refined(std::max<long>(64, prec)).enclosure();
}

}  // namespace detail

/// Closed-form upper bound on vtilde_n (the normalized majorant coefficient)
/// of saddle-point type; always at least majorant_coefficient(n).
inline Rational saddle_point_coefficient_bound(const BoundParams& b, long n, mpfr_prec_t prec = 192) {
    if (n < 0) throw std::invalid_argument("index must be nonnegative");
    if (b.A == 0) return Rational(0);
    IvQ alpha = detail::alpha_enclosure(b.p_alpha, prec);
    IvQ apow = detail::pow_shrink(alpha, n, prec);
    return (IvQ(b.A) * apow * detail::saddle_factor(b.T, b.K, n, prec)).hi;
}

/// Fully explicit relaxation |u_n| <= A' n!^{p/q} alpha^n phi(n): the
/// normalizer is replaced by its factorial form ((2 pi)^{p/q} (n/q+1)^p for
/// p > 0, (n+1)^{-p/q} for p < 0), and vtilde_n by the saddle-point factor.
/// Values below the validity threshold of the factorial comparison are
/// folded into the constant A'.
struct SymbolicBound {
    Rational a_prime;
    Rational kappa;
    long p = 0;
    long q = 1;
    Poly alpha_poly;
    long T = 0;
    long K = 1;
    std::vector<Rational> valuation_prefix;
    std::string text;
};

namespace detail {

/// Enclosure of the A-free core n!^{p/q} alpha^n gamma(n) S(n) at shifted
/// index j.
inline IvQ symbolic_core(const SymbolicBound& sb, long j, mpfr_prec_t prec) {
    IvQ alpha = alpha_enclosure(sb.alpha_poly, prec);
    IvQ core = pow_shrink(alpha, j, prec);
    if (sb.p != 0) {
        mpz_class f;
        mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(j));
        Rational e(sb.p, sb.q);
        e.canonicalize();
        core = core * iv_pow(Rational(f), e, prec);
        if (sb.p > 0) {
            IvQ two_pi = IvQ(Rational(2)) * iv_pi(prec);
            core = core * iv_pow(two_pi, e, prec);
            Rational shifted(j + sb.q, sb.q);
            shifted.canonicalize();
            core = core * pow_int(IvQ(shifted), sb.p);  // (j/q + 1)^p
        } else {
            core = core * iv_pow(Rational(j + 1), -e, prec);  // (j+1)^{-p/q}
        }
        core = core.shrink(prec);
    }
    return (core * saddle_factor(sb.T, sb.K, j, prec)).shrink(prec);
}

inline std::string two_digit_upper(const Rational& x) { return decimal_upper(x, 2); }

}  // namespace detail

/// Evaluate the symbolic relaxation at n (certified upper bound on |u_n|).
inline Rational symbolic_eval(const SymbolicBound& sb, long n, mpfr_prec_t prec = 192) {
    if (n < 0) throw std::invalid_argument("index must be nonnegative");
    long m = static_cast<long>(sb.valuation_prefix.size());
    if (n < m) return sb.valuation_prefix[static_cast<std::size_t>(n)];
    return (IvQ(sb.a_prime) * detail::symbolic_core(sb, n - m, prec)).hi;
}

inline SymbolicBound symbolic_bound(const BoundParams& b) {
    SymbolicBound sb;
    sb.a_prime = b.A;
    sb.kappa = b.kappa;
    sb.p = b.p;
    sb.q = b.q;
    sb.alpha_poly = b.p_alpha;
    sb.T = b.T;
    sb.K = b.K;
    sb.valuation_prefix = b.valuation_prefix;
    // fold the indices where the factorial comparison is not yet available
    long fold = (3 * sb.q + 1) / 2 + 1;
    NormalizerSpec ns{b.p, b.q};
    if (b.A > 0) {
        // fold against the saddle form itself, so the symbolic relaxation also
        // dominates the saddle-point bound on the folded indices
        for (long j = 0; j < fold; ++j) {
            Rational need = (ns.psi_inverse(j, 256) * IvQ(saddle_point_coefficient_bound(b, j, 256))).hi;
            Rational have = detail::symbolic_core(sb, j, 256).lo;
            if (have <= 0) throw std::logic_error("symbolic core not certified positive");
            sb.a_prime = std::max(sb.a_prime, static_cast<Rational>(need / have));
        }
    }

    // human-readable rendering; constants rounded up to two significant digits
    std::ostringstream os;
    os << detail::two_digit_upper(sb.a_prime);
    if (sb.p != 0) os << " * n!^(" << sb.p << "/" << sb.q << ")";
    AlgebraicModulus da(sb.alpha_poly);
    if (da.exact_square()) {
        Rational sq = da.exact_sq();
        if (mpz_perfect_square_p(sq.get_num_mpz_t()) && mpz_perfect_square_p(sq.get_den_mpz_t())) {
            mpz_class sn, sd;
            mpz_sqrt(sn.get_mpz_t(), sq.get_num_mpz_t());
            mpz_sqrt(sd.get_mpz_t(), sq.get_den_mpz_t());
            Rational delta(sn, sd);
            delta.canonicalize();
            Rational alpha = 1 / delta;
            os << " * (" << alpha.get_str() << ")^n";
        } else {
            os << " * (" << detail::two_digit_upper(detail::alpha_enclosure(sb.alpha_poly, 128).hi) << ")^n";
        }
    } else {
        os << " * (" << detail::two_digit_upper(detail::alpha_enclosure(sb.alpha_poly, 128).hi) << ")^n";
    }
    if (sb.p > 0) os << " * (2*pi)^(" << sb.p << "/" << sb.q << ") * (n/" << sb.q << "+1)^" << sb.p;
    if (sb.p < 0) os << " * (n+1)^(" << -sb.p << "/" << sb.q << ")";
    if (sb.T == 0) {
        os << " * ((n+" << sb.K + 1 << ")/" << sb.K << ")^" << sb.K
           << " * (1-" << sb.K << "/(n+" << sb.K + 1 << "))^(-n)";
    } else {
        os << " * exp((" << sb.K << "/" << sb.T << ")*((n+" << sb.K + 1 << ")/" << sb.K << ")^(" << sb.T << "/" << sb.T + 1
           << ")) * (1-(" << sb.K << "/(n+" << sb.K + 1 << "))^(1/" << sb.T + 1 << "))^(-n)";
    }
    if (!sb.valuation_prefix.empty())
        os << "  [formula applies with n replaced by n-" << sb.valuation_prefix.size() << " for n >= " << sb.valuation_prefix.size() << "]";
    sb.text = os.str();
    return sb;
}

}  // namespace prb
