#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "prb/tail_bounds.hpp"

// Independent brute-force oracles used by the tests and the `check`
// subcommand: exact unrolling compared against certificate values, and the
// minimal truncation order found by exhaustive search below the certified
// one. Partial sums are exact Gaussian rationals, so the only approximation
// is the certified tail cutoff.

namespace prb {

struct Violation {
    long n = 0;
    Rational claimed;    // certificate value at n
    Rational exact_low;  // certified lower bound on |u_n| that exceeds it
};

struct OracleReport {
    long checked_upto = 0;  // indices 0 .. checked_upto-1 were compared
    std::vector<Violation> violations;
    std::optional<long> minimal_n;
};

/// Compare exact |u_n| against evaluate_bound for n < N. A violation is
/// recorded only when it is certain: the certified lower bound on |u_n|
/// exceeds the claimed bound.
inline OracleReport check_certificate(const RecOperator& r, const std::vector<GaussianRational>& init,
                                      const BoundParams& b, long n_upto, mpfr_prec_t prec = 256) {
    OracleReport rep;
    if (n_upto <= 0) return rep;
    rep.checked_upto = n_upto;
    std::vector<GaussianRational> u = unroll(r, init, n_upto);
    std::vector<Rational> v = evaluate_bounds(b, static_cast<std::size_t>(n_upto), prec);
    for (long n = 0; n < n_upto; ++n) {
        Rational lo = iv_sqrt(u[static_cast<std::size_t>(n)].norm(), prec).lo;
        if (lo > v[static_cast<std::size_t>(n)])
            rep.violations.push_back({n, v[static_cast<std::size_t>(n)], lo});
    }
    return rep;
}

/// Variant for initial values given as moduli bounds: compares the
/// worst-case unrolled moduli (an upper bound on every compatible |u_n|)
/// against the certificate. Violations here mean the certificate fails to
/// dominate the worst case, not a specific sequence.
inline OracleReport check_certificate_moduli(const RecOperator& r, const std::vector<Rational>& init_bounds,
                                             const BoundParams& b, long n_upto, mpfr_prec_t prec = 256) {
    OracleReport rep;
    if (n_upto <= 0) return rep;
    rep.checked_upto = n_upto;
    std::vector<Rational> beta = unroll_moduli_bounds(r, init_bounds, n_upto);
    std::vector<Rational> v = evaluate_bounds(b, static_cast<std::size_t>(n_upto), prec);
    for (long n = 0; n < n_upto; ++n)
        if (beta[static_cast<std::size_t>(n)] > v[static_cast<std::size_t>(n)])
            rep.violations.push_back({n, v[static_cast<std::size_t>(n)], beta[static_cast<std::size_t>(n)]});
    return rep;
}

namespace detail {

/// Exact partial sums S_N = sum_{k<N} u_k z^k for N = 0 .. count.
inline std::vector<GaussianRational> partial_sums(const RecOperator& r, const std::vector<GaussianRational>& init,
                                                  const GaussianRational& z, long count) {
    std::vector<GaussianRational> u = unroll(r, init, count);
    std::vector<GaussianRational> s(static_cast<std::size_t>(count) + 1);
    GaussianRational acc{Rational(0), Rational(0)};
    GaussianRational zp{Rational(1), Rational(0)};
    s[0] = acc;
    for (long k = 0; k < count; ++k) {
        acc = acc + u[static_cast<std::size_t>(k)] * zp;
        zp = zp * z;
        s[static_cast<std::size_t>(k) + 1] = acc;
    }
    return s;
}

}  // namespace detail

/// Smallest N with |u(z) - sum_{k<N} u_k z^k| <= eps, found by exhaustive
/// downward search from the certified truncation order. The limit u(z) is
/// bracketed by an exact partial sum far beyond the certified order plus a
/// certified tail enclosure of width <= eps / 2^guard_shift.
inline long minimal_truncation_order(const RecOperator& r, const std::vector<GaussianRational>& init,
                                     const GaussianRational& z, const Rational& eps, mpfr_prec_t work_bits = 512,
                                     long guard_shift = 64) {
    if (eps <= 0) throw std::invalid_argument("eps must be positive");
    BoundParams b = bound_rec(r, init);
    Rational zmod = iv_sqrt(z.norm(), work_bits).hi;
    long n_cert = truncation_order(b, zmod, eps, 0, work_bits);
    // exact reference sum with a certified residual
    mpz_class g;
    mpz_ui_pow_ui(g.get_mpz_t(), 2, static_cast<unsigned long>(guard_shift));
    Rational slack = eps / Rational(g);
    long n_big = truncation_order(b, zmod, slack, 0, work_bits);
    if (n_big < n_cert) n_big = n_cert;
    std::vector<GaussianRational> s = detail::partial_sums(r, init, z, n_big);
    const GaussianRational& ref = s[static_cast<std::size_t>(n_big)];
    auto err_vs_eps = [&](long n) {
        // |u(z) - S_n| is within [d - slack, d + slack], d = |ref - S_n|
        GaussianRational diff = ref - s[static_cast<std::size_t>(n)];
        IvQ d = iv_sqrt(diff.norm(), work_bits);
        if (d.hi + slack <= eps) return -1;  // certainly within eps
        if (d.lo - slack > eps) return 1;    // certainly beyond eps
        return 0;
    };
    if (err_vs_eps(n_cert) == 1) throw std::logic_error("certified truncation order fails the oracle check");
    long n = n_cert;
    while (n > 0) {
        int c = err_vs_eps(n - 1);
        if (c == 0) throw std::runtime_error("insufficient working precision to separate the minimal order");
        if (c == 1) break;
        --n;
    }
    return n;
}

}  // namespace prb
