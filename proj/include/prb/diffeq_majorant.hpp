#pragma once

#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "prb/diff_operator.hpp"
#include "prb/dyadic.hpp"
#include "prb/modulus.hpp"
#include "prb/rat_majorant.hpp"

// First-order majorant certificates for D-finite series. Given a theta-
// operator D = sum_k a^[k](z) theta^k that is regular at 0 and whose
// singularities all have modulus >= delta(P_alpha), and certified upper
// bounds on the coefficients of one solution w, produce (T, K, A) such that
//
//   w(z)  is majorized by  v(z) = A (1-alpha z)^{-K}          if T = 0,
//                          v(z) = A exp((K/T)(1-alpha z)^{-T}) otherwise,
//
// with alpha = 1/delta(P_alpha). The route: isolate the constant terms
// c^[k] of a^[k]/a^[r], majorize the remainders a~^[k] by
// M^[k](1-alpha z)^{-(T+r-k)}, collapse the order-r inequality to order 1
// (the M = max_k M^[k]/C(r-1,k) reduction), and pick the least K > M delta
// and a start index N_2 past which the order-1 comparison closes by
// induction.

namespace prb {

/// Callable producing certified upper bounds on |w_0|, ..., |w_{n-1}|.
using SeriesPrefixSource = std::function<std::vector<Rational>(long)>;

struct MajorantSeries {
    Poly alpha_poly;  // P_alpha; alpha = 1/delta(P_alpha)
    long T = 0;       // 0 iff every dominant singularity is regular
    long K = 1;
    Rational A;       // upper bound; all Taylor coefficients of v are >= 0

    // diagnostics from the construction (not needed to evaluate v)
    Rational M;                  // order-1 reduction constant, upper bound
    Rational m_delta_up;         // upper bound on M * delta(P_alpha)
    long n2 = 1;                 // start index found by the doubling loop
    std::vector<Rational> c_abs; // |c^[k]|, k = 0..r-1
};

/// Enclosures of the first `count` Taylor coefficients of v.
inline std::vector<IvQ> majorant_coefficients(const MajorantSeries& v, std::size_t count, mpfr_prec_t prec = 192);

namespace detail {

/// The start-index test: sum_k |c^[k]| N^k < (1 - M delta / K) N^r.
/// Implies Q(n) > 0 and M n^r <= alpha K Q(n) for every n >= N, because
/// sum_k |c^[k]| n^{k-r} is non-increasing in n >= 1.
inline bool n2_condition(const std::vector<Rational>& c_abs, const Rational& m_delta_up, long k_const, long r, long n) {
    Rational lhs(0), npow(1);
    for (std::size_t k = 0; k < c_abs.size(); ++k) {
        lhs += c_abs[k] * npow;
        npow *= Rational(n);
    }
    Rational rhs = (Rational(1) - m_delta_up / Rational(k_const));
    for (long i = 0; i < r; ++i) rhs *= Rational(n);
    return lhs < rhs;
}

inline long floor_to_long(const Rational& q) {
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return fl.get_si();
}

/// Least K in N* with K > M delta (strict), exact when delta^2 is rational.
/// Any such K makes the induction close; the smallest one gives the
/// tightest exponential factor in the majorant.
inline long least_k(const Rational& m, const AlgebraicModulus& delta) {
    if (m == 0) return 1;
    if (delta.exact_square()) {
        // K > M delta  <=>  K^2 > M^2 delta^2 (both sides nonnegative)
        Rational target = m * m * delta.exact_sq();
        mpz_class fl;
        mpz_fdiv_q(fl.get_mpz_t(), target.get_num_mpz_t(), target.get_den_mpz_t());
        mpz_class root;
        mpz_sqrt(root.get_mpz_t(), fl.get_mpz_t());
        long k = std::max(1L, root.get_si() + 1);
        while (Rational(k) * Rational(k) <= target) ++k;
        return k;
    }
    long bits = 64;
    while (true) {
        IvQ md = IvQ(m) * delta.refined(bits).enclosure();
        long k_hi = floor_to_long(md.hi) + 1;
        long k_lo = floor_to_long(md.lo) + 1;
        if (k_hi == k_lo || bits >= 4096) return std::max(1L, k_hi);
        bits *= 2;
    }
}

}  // namespace detail

inline MajorantSeries bound_normal_diffeq(const DiffOperatorTheta& d, const Poly& p_alpha, const SeriesPrefixSource& w) {
    if (d.is_zero() || d.order() < 1) throw std::domain_error("operator must have positive order");
    long r = d.order();
    const Poly& lead = d.leading();
    if (lead.coeff(0) == 0) throw std::domain_error("0 should be a regular point");
    AlgebraicModulus da(p_alpha);
    if (da.is_infinite()) throw std::domain_error("majorant scale too small");

    MajorantSeries out;
    out.alpha_poly = p_alpha;

    // constant terms and shifted remainders of a^[k]/a^[r]
    std::vector<RatFun> tails(static_cast<std::size_t>(r));
    out.c_abs.assign(static_cast<std::size_t>(r), Rational(0));
    for (long k = 0; k < r; ++k) {
        RatFun ak(d.coeff(static_cast<std::size_t>(k)), lead);
        Rational ck = ak.is_zero() ? Rational(0) : ak.eval(Rational(0));
        out.c_abs[static_cast<std::size_t>(k)] = abs(ck);
        RatFun rem = ak - RatFun(Poly(ck));
        if (!rem.is_zero()) {
            if (rem.num().valuation() < 1) throw std::logic_error("remainder does not vanish at 0");
            tails[static_cast<std::size_t>(k)] = RatFun(rem.num().shift_down(1), rem.den());
        }
    }

    // T = max(0, m_k - r + k): m_k is the largest multiplicity of a pole of
    // a~^[k] lying on the circle |z| = delta(P_alpha). Under the hypothesis
    // that no singularity is closer than delta(P_alpha), those are exactly
    // the squarefree factors of the denominator whose dominant modulus
    // equals delta(P_alpha).
    out.T = 0;
    for (long k = 0; k < r; ++k) {
        const RatFun& t = tails[static_cast<std::size_t>(k)];
        if (t.is_zero() || t.is_polynomial()) continue;
        long mk = 0;
        for (const auto& [f, mult] : squarefree_factorize(t.den())) {
            Ordering cmp = compare_moduli(AlgebraicModulus(f), da);
            if (cmp == Ordering::LT) throw std::domain_error("a singularity lies inside the majorant scale circle");
            if (cmp == Ordering::EQ) mk = std::max(mk, static_cast<long>(mult));
        }
        out.T = std::max(out.T, mk - r + k);
    }

    // Order-1 reduction constant. Each a~^[k] is split into a polynomial
    // head of degree <= L and a tail; only the tail enters the reduction
    // constant M (and hence K), while the head is folded into the start
    // index condition: for j = n-1-i with i <= L, the scale-free majorant
    // coefficients are non-decreasing, so
    //   |a~^[k]_i| j^k v_j <= |a~^[k]_i| delta^{i+1} n^k v_n,
    // which strengthens the inequality defining N_2 by the extra terms
    // sum_{i<=L} |a~^[k]_i| delta^{i+1} n^k. This matters when the first few
    // coefficients of a~^[k] are much larger than the asymptotic scale: K
    // then reflects the dominant-singularity data instead of transient
    // coefficients. L is chosen to minimize K, then the start index.
    IvQ delta_iv = da.refined(192).enclosure();
    const long l_max = 64;
    std::vector<std::vector<Rational>> sfx(static_cast<std::size_t>(r));   // suffix maxima of |r_n| delta^n / C(n+m-1, m-1), last entry = tail bound
    std::vector<std::vector<Rational>> head(static_cast<std::size_t>(r));  // prefix sums of |r_i| delta^{i+1}
    for (long k = 0; k < r; ++k) {
        const RatFun& t = tails[static_cast<std::size_t>(k)];
        auto& s = sfx[static_cast<std::size_t>(k)];
        auto& h = head[static_cast<std::size_t>(k)];
        h.assign(static_cast<std::size_t>(l_max) + 1, Rational(0));
        if (t.is_zero()) {
            s.assign(1, Rational(0));
            continue;
        }
        int m = static_cast<int>(out.T + r - k);
        RatMajorant rm = refine_fully(bound_ratpoly(t, p_alpha, m), t);
        long n0 = std::max(rm.n0, l_max + 1);
        std::vector<Rational> co = t.series_coefficients(static_cast<std::size_t>(n0) + 1);
        std::vector<Rational> up(static_cast<std::size_t>(n0) + 1);
        IvQ dp{Rational(1)};
        Rational hsum(0);
        for (long n = 0; n <= n0; ++n) {
            IvQ num = IvQ(abs(co[static_cast<std::size_t>(n)])) * dp;
            up[static_cast<std::size_t>(n)] =
                num.hi / binomial(static_cast<unsigned long>(n + m - 1), static_cast<unsigned long>(m - 1));
            if (n <= l_max) {
                hsum += (num * delta_iv).hi;
                h[static_cast<std::size_t>(n)] = hsum;
            }
            dp = (dp * delta_iv).shrink(192);
        }
        s.assign(static_cast<std::size_t>(n0) + 2, Rational(0));
        s[static_cast<std::size_t>(n0) + 1] = detail::tail_term_sum(rm.terms, m, n0);
        for (long n = n0; n >= 0; --n)
            s[static_cast<std::size_t>(n)] = std::max(up[static_cast<std::size_t>(n)], s[static_cast<std::size_t>(n) + 1]);
    }
    auto reduction_m = [&](long l) {
        Rational m(0);
        for (long k = 0; k < r; ++k) {
            const auto& s = sfx[static_cast<std::size_t>(k)];
            std::size_t idx = std::min(static_cast<std::size_t>(l + 1), s.size() - 1);
            m = std::max(m, static_cast<Rational>(s[idx] / binomial(static_cast<unsigned long>(r - 1), static_cast<unsigned long>(k))));
        }
        return m;
    };
    auto start_index = [&](const std::vector<Rational>& c_abs, const Rational& md_up, long k_const, long cap) {
        long n2 = 1;
        while (n2 <= cap && !detail::n2_condition(c_abs, md_up, k_const, r, n2)) n2 *= 2;
        return n2;
    };
    const long n2_cap = 4096;
    long best_l = -2;
    Rational best_m;
    long best_k = 0, best_n2 = 0;
    std::vector<Rational> best_c_abs;
    for (long l = -1; l <= l_max; ++l) {
        Rational m = reduction_m(l);
        long kk = detail::least_k(m, da);
        std::vector<Rational> c_abs = out.c_abs;
        if (l >= 0)
            for (long k = 0; k < r; ++k)
                if (!tails[static_cast<std::size_t>(k)].is_zero())
                    c_abs[static_cast<std::size_t>(k)] += head[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
        Rational md_up = (IvQ(m) * delta_iv).hi;
        long n2 = start_index(c_abs, md_up, kk, n2_cap);
        // If the least K leaves no workable start index, escalate K: any
        // K > M delta is valid, and a larger K widens the induction margin
        // 1 - M delta / K, pulling the start index back below the cap.
        while (n2 > n2_cap && kk < (1L << 40)) {
            kk *= 2;
            n2 = start_index(c_abs, md_up, kk, n2_cap);
        }
        bool feasible = n2 <= n2_cap;
        bool best_feasible = best_l != -2 && best_n2 <= n2_cap;
        bool better = best_l == -2 ||
                      (feasible && (!best_feasible || kk < best_k || (kk == best_k && n2 < best_n2)));
        if (better) {
            best_l = l;
            best_m = m;
            best_k = kk;
            best_n2 = n2;
            best_c_abs = std::move(c_abs);
        }
    }
    out.M = best_m;
    out.K = best_k;
    out.c_abs = std::move(best_c_abs);
    out.m_delta_up = (IvQ(out.M) * delta_iv).hi;
    out.n2 = best_n2;
    // Margin escalation cannot fix a start index the margin-free condition
    // sum_k |c^[k]| n^k < n^r itself rejects; push the index out, bounded.
    while (out.n2 <= (1L << 22) && !detail::n2_condition(out.c_abs, out.m_delta_up, out.K, r, out.n2)) out.n2 *= 2;
    if (!detail::n2_condition(out.c_abs, out.m_delta_up, out.K, r, out.n2))
        throw std::domain_error("could not certify a majorant start index");

    // scale A so the certificate dominates the given prefix
    out.A = Rational(1);
    MajorantSeries unit = out;  // v with A = 1
    std::vector<Rational> prefix = w(out.n2 + 1);
    if (static_cast<long>(prefix.size()) < out.n2 + 1) throw std::logic_error("prefix source returned too few bounds");
    Rational best_a(-1);
    for (mpfr_prec_t prec = 64; prec <= 4096; prec *= 2) {
        std::vector<IvQ> v = majorant_coefficients(unit, static_cast<std::size_t>(out.n2) + 1, prec);
        Rational a(0);
        bool usable = true;
        for (long n = 0; n <= out.n2; ++n) {
            const IvQ& vn = v[static_cast<std::size_t>(n)];
            if (vn.lo <= 0) {
                usable = false;
                break;
            }
            a = std::max(a, static_cast<Rational>(prefix[static_cast<std::size_t>(n)] / vn.lo));
        }
        if (!usable) continue;
        if (best_a >= 0) {
            Rational next = std::min(best_a, a);
            // stop once stable to three significant digits
            if (best_a - next <= next / 1000) {
                best_a = next;
                break;
            }
            best_a = next;
        } else {
            best_a = a;
        }
    }
    if (best_a < 0) throw std::logic_error("majorant coefficients could not be certified positive");
    out.A = best_a;
    return out;
}

inline std::vector<IvQ> majorant_coefficients(const MajorantSeries& v, std::size_t count, mpfr_prec_t prec) {
    std::vector<IvQ> out;
    out.reserve(count);
    if (count == 0) return out;
    AlgebraicModulus da(v.alpha_poly);
    IvQ delta = da.refined(std::max<long>(64, prec)).enclosure();
    IvQ alpha = IvQ(Rational(1)) / delta;
    if (v.T == 0) {
        IvQ apow(Rational(1));
        for (std::size_t n = 0; n < count; ++n) {
            out.push_back((IvQ(v.A * binomial(static_cast<unsigned long>(n) + static_cast<unsigned long>(v.K) - 1,
                                              static_cast<unsigned long>(v.K) - 1)) *
                           apow)
                              .shrink(prec));
            if (n + 1 < count) apow = (apow * alpha).shrink(prec);
        }
        return out;
    }
    // v' = alpha K (1 - alpha z)^{-T-1} v, v_0 = A e^{K/T}. The scale-free
    // coefficients w_n = v_n delta^n satisfy
    //   (n+1) w_{n+1} = K sum_{j<=n} C(n-j+T, T) w_j;
    // expanding the binomial as a polynomial in j lets us maintain the sum
    // through the T+1 running moments S_u = sum_{j<=n} j^u w_j, giving a
    // linear-time recurrence instead of a quadratic convolution.
    long t_irr = v.T;
    // coefficients of C(x+T, T) = (x+1)...(x+T)/T! as a polynomial in x
    Poly cx = Poly::one();
    for (long i = 1; i <= t_irr; ++i) cx = cx * Poly(std::vector<Rational>{Rational(i), Rational(1)});
    mpz_class tf;
    mpz_fac_ui(tf.get_mpz_t(), static_cast<unsigned long>(t_irr));
    cx = cx * (Rational(1) / Rational(tf));
    Rational kt(v.K, v.T);
    kt.canonicalize();
    IvQ w0 = (IvQ(v.A) * iv_exp(kt, prec)).shrink(prec);
    // Two one-sided scale-free sequences. All convolution weights are
    // nonnegative, so running the recurrence on endpoint values with
    // directed rounding stays a valid enclosure, and the moments are kept
    // as exact rationals so the alternating expansion of the binomial
    // introduces no cancellation error (it is an identity over Q).
    std::vector<Rational> mom_lo(static_cast<std::size_t>(t_irr) + 1, Rational(0));
    std::vector<Rational> mom_hi(static_cast<std::size_t>(t_irr) + 1, Rational(0));
    mom_lo[0] = w0.lo;  // j = 0 contributes only to the 0th moment
    mom_hi[0] = w0.hi;
    out.push_back(w0);
    IvQ apow{Rational(1)};
    for (std::size_t n = 0; n + 1 < count; ++n) {
        // sum_j C(n-j+T, T) w_j = sum_u (-1)^u [sum_{t>=u} cx_t C(t,u) n^{t-u}] S_u
        Rational acc_lo(0), acc_hi(0), np(1);
        std::vector<Rational> cu(static_cast<std::size_t>(t_irr) + 1, Rational(0));
        for (long u = 0; u <= t_irr; ++u) {
            np = Rational(1);
            for (long t = u; t <= t_irr; ++t) {
                cu[static_cast<std::size_t>(u)] +=
                    cx.coeff(static_cast<std::size_t>(t)) * binomial(static_cast<unsigned long>(t), static_cast<unsigned long>(u)) * np;
                np *= Rational(static_cast<long>(n));
            }
            if (u & 1) {
                acc_lo -= cu[static_cast<std::size_t>(u)] * mom_lo[static_cast<std::size_t>(u)];
                acc_hi -= cu[static_cast<std::size_t>(u)] * mom_hi[static_cast<std::size_t>(u)];
            } else {
                acc_lo += cu[static_cast<std::size_t>(u)] * mom_lo[static_cast<std::size_t>(u)];
                acc_hi += cu[static_cast<std::size_t>(u)] * mom_hi[static_cast<std::size_t>(u)];
            }
        }
        Rational denom(static_cast<long>(n) + 1);
        Rational wl = IvQ(std::max(Rational(0), static_cast<Rational>(Rational(v.K) * acc_lo / denom))).shrink(prec).lo;
        Rational wh = IvQ(static_cast<Rational>(Rational(v.K) * acc_hi / denom)).shrink(prec).hi;
        apow = (apow * alpha).shrink(prec);
        out.push_back((IvQ(wl, wh) * apow).shrink(prec));
        Rational ju(1);
        for (long u = 0; u <= t_irr; ++u) {
            mom_lo[static_cast<std::size_t>(u)] += wl * ju;
            mom_hi[static_cast<std::size_t>(u)] += wh * ju;
            ju *= Rational(static_cast<long>(n) + 1);
        }
    }
    return out;
}

/// Enclosure of the nth Taylor coefficient of v.
inline IvQ majorant_coefficient(const MajorantSeries& v, long n, mpfr_prec_t prec = 192) {
    if (n < 0) throw std::invalid_argument("coefficient index must be nonnegative");
    return majorant_coefficients(v, static_cast<std::size_t>(n) + 1, prec).back();
}

}  // namespace prb
