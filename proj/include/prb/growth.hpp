#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "prb/diff_operator.hpp"
#include "prb/dyadic.hpp"
#include "prb/modulus.hpp"
#include "prb/rec_operator.hpp"

// Growth extraction and normalization: the factorial exponent kappa and the
// exponential scale polynomial P_alpha (alpha = 1/delta(P_alpha)) read off
// the Newton polygon, the classical recurrence-to-theta-operator
// translation, and the variant normalized by psi_n = q^{-pn/q} Gamma(n/q+1)^{-p}.

namespace prb {

struct GrowthData {
    Rational kappa;  // p/q in lowest terms, (0, 1) when zero
    long p;
    long q;
    Poly p_alpha;
    AlgebraicModulus alpha_delta;  // delta(P_alpha); alpha = 1/delta
};

/// The normalizing sequence psi_n with (n+q)^p psi_{n+q} = psi_n, psi_0 = 1.
struct NormalizerSpec {
    long p = 0;
    long q = 1;

    bool trivial() const { return p == 0; }

    /// Enclosure of psi_n = q^{-pn/q} Gamma(n/q+1)^{-p}; positive.
    IvQ psi(long n, mpfr_prec_t prec = 192) const {
        if (n < 0) throw std::invalid_argument("psi index must be nonnegative");
        if (p == 0) return IvQ(Rational(1));
        Rational e(-p * n, q);
        e.canonicalize();
        IvQ scale = iv_pow(Rational(q), e, prec);
        IvQ gam = iv_gamma(Rational(n + q, q), prec);  // Gamma(n/q + 1)
        return scale * pow_int(gam, -p);
    }

    /// Enclosure of 1/psi_n.
    IvQ psi_inverse(long n, mpfr_prec_t prec = 192) const {
        return pow_int(psi(n, prec), -1);
    }
};

/// Algorithm: kappa = max_{k<s} (deg b^[k] - deg b^[s])/(s-k);
/// P_alpha = sum_l coeff(b^[s-l], d + l kappa) z^l with d = deg b^[s]
/// (fractional or negative indices contribute nothing).
inline GrowthData asympt(const RecOperator& r) {
    long s = r.order();
    bool any = false;
    for (long k = 0; k < s; ++k) any = any || !r.coeff(static_cast<std::size_t>(k)).is_zero();
    if (!any || s < 1) throw std::domain_error("no growth data: operator has a single term");
    long d = r.leading().degree();
    Rational kappa;
    bool first = true;
    for (long k = 0; k < s; ++k) {
        const Poly& b = r.coeff(static_cast<std::size_t>(k));
        if (b.is_zero()) continue;
        Rational cand(b.degree() - d, s - k);
        cand.canonicalize();
        if (first || cand > kappa) kappa = cand;
        first = false;
    }
    std::vector<Rational> pa(static_cast<std::size_t>(s) + 1, Rational(0));
    for (long l = 0; l <= s; ++l) {
        Rational idx = Rational(d) + Rational(l) * kappa;
        idx.canonicalize();
        if (!is_integer(idx)) continue;
        long i = static_cast<long>(idx.get_num().get_si());
        if (i < 0) continue;
        const Poly& b = r.coeff(static_cast<std::size_t>(s - l));
        if (i > b.degree()) continue;
        pa[static_cast<std::size_t>(l)] = b.coeff(static_cast<std::size_t>(i));
    }
    Poly p_alpha(std::move(pa));
    GrowthData g{kappa, kappa.get_num().get_si(), kappa.get_den().get_si(), p_alpha, AlgebraicModulus(p_alpha)};
    if (g.kappa == 0) { g.p = 0; g.q = 1; }
    return g;
}

inline NormalizerSpec normalizer_for(const GrowthData& g) { return NormalizerSpec{g.p, g.q}; }

/// Classical translation to Q[z]<theta>: with g = Pi / gcd(b^[s], Pi),
/// Pi = prod_{k=1}^s (n+k), and g R = sum c_{kj} n^j S^k, the operator is
/// D = sum_{k,j} c_{kj} z^{s-k} (theta - k)^j. D annihilates sum u_n z^n
/// for every u with R u = 0 over all of N.
inline DiffOperatorTheta rec_to_diffeq(const RecOperator& r) {
    long s = r.order();
    if (s < 0) throw std::domain_error("zero operator");
    Poly lead = r.leading();
    Poly g = Poly::one();
    for (long k = 1; k <= s; ++k) {
        if (lead.eval(Rational(-k)) != 0) {
            Poly lin(std::vector<Rational>{Rational(k), Rational(1)});  // n + k
            g = g * lin;
        }
    }
    DiffOperatorTheta d;
    for (long k = 0; k <= s; ++k) {
        Poly c = g * r.coeff(static_cast<std::size_t>(k));  // polynomial in n
        if (c.is_zero()) continue;
        // (theta - k)^j, accumulated by Horner over j
        Poly shift(std::vector<Rational>{Rational(-k), Rational(1)});  // theta - k as a poly in theta
        Poly in_theta = c.eval(shift);                                 // sum_j c_j (theta - k)^j
        std::vector<Poly> term(static_cast<std::size_t>(in_theta.degree()) + 1);
        for (long t = 0; t <= in_theta.degree(); ++t)
            term[static_cast<std::size_t>(t)] = Poly::monomial(in_theta.coeff(static_cast<std::size_t>(t)), static_cast<std::size_t>(s - k));
        d = d + DiffOperatorTheta(std::move(term));
    }
    return d;
}

/// Theta-operator annihilating the normalized series sum psi_n u_n z^n.
inline DiffOperatorTheta normalized_diffeq(const RecOperator& r, const Rational& kappa) {
    Rational k = kappa;
    k.canonicalize();
    if (k == 0) return rec_to_diffeq(r);
    long p = k.get_num().get_si();
    long q = k.get_den().get_si();
    // annihilator of psi: (n+q)^p S^q - 1, cleared of negative powers
    Poly npq(std::vector<Rational>{Rational(q), Rational(1)});  // n + q
    Poly pw = Poly::one();
    for (long i = 0; i < std::abs(p); ++i) pw = pw * npq;
    std::vector<Poly> psi_op(static_cast<std::size_t>(q) + 1);
    if (p > 0) {
        psi_op[0] = Poly(Rational(-1));
        psi_op[static_cast<std::size_t>(q)] = pw;
    } else {
        psi_op[0] = -pw;
        psi_op[static_cast<std::size_t>(q)] = Poly::one();
    }
    RecOperator r_hat = symmetric_product(r, RecOperator(std::move(psi_op)));
    DiffOperatorTheta d = rec_to_diffeq(r_hat);
    if (d.is_zero() || d.leading().coeff(0) == 0)
        throw std::logic_error("normalization failed: 0 is not a regular point of the output");
    return d;
}

}  // namespace prb
