#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "prb/poly.hpp"

// Full partial fraction decomposition of a proper fraction B/D over the
// squarefree factorization D = prod D_i^i:
//
//   B/D = sum_i sum_{d=1}^{i} sum_{D_i(zeta)=0} h_{i,d}(zeta) / (zeta - z)^d
//
// The h_{i,d} live in Q[zeta]/(D_i). They are read off the Laurent expansion
// of B/D at z = zeta + w computed by power-series division in that quotient
// ring, uniformly in the root zeta.

namespace prb {

struct PartialFractionTerm {
    Poly d_i;  // squarefree factor whose roots index the term
    int i;     // multiplicity of D_i in D
    int d;     // pole order, 1 <= d <= i
    Poly h;    // h_{i,d} reduced mod D_i
};

struct PartialFractionData {
    std::vector<PartialFractionTerm> terms;
};

namespace detail {

/// Inverse of g in Q[y]/(mod); requires gcd(g, mod) = 1.
inline Poly quotient_ring_inverse(const Poly& g, const Poly& mod) {
    auto [gc, u, v] = poly_ext_gcd(g % mod, mod);
    (void)v;
    if (gc.degree() != 0) throw std::domain_error("non-invertible element in quotient ring");
    return u % mod;
}

/// Coefficients in w of p(y + w), each reduced mod `mod` in y.
inline std::vector<Poly> shifted_coeffs_mod(const Poly& p, const Poly& mod) {
    // row k holds the y-polynomial multiplying w^k: p(y+w) = sum p^(k)(y)/k! w^k
    std::vector<Poly> out;
    Poly deriv = p;
    Rational fact(1);
    for (long k = 0; k <= std::max(0L, p.degree()); ++k) {
        if (k > 0) {
            deriv = deriv.derivative();
            fact *= Rational(k);
        }
        out.push_back((deriv * (Rational(1) / fact)) % mod);
    }
    return out;
}

}  // namespace detail

/// Decompose B / prod(D_i^i); requires deg B < deg of the product.
inline PartialFractionData partial_fractions(const Poly& b, const std::vector<std::pair<Poly, int>>& factors) {
    Poly d_full = Poly::one();
    long deg_d = 0;
    for (const auto& [f, mult] : factors) {
        for (int j = 0; j < mult; ++j) d_full = d_full * f;
        deg_d += f.degree() * mult;
    }
    if (b.degree() >= deg_d) throw std::domain_error("improper fraction: split off the polynomial part first");
    PartialFractionData out;
    if (b.is_zero()) return out;
    for (const auto& [f, mult] : factors) {
        // Laurent data at the roots of f: D(zeta + w) = w^mult E(w),
        // E_0 invertible mod f; G = B(zeta + w) / E(w) + O(w^mult)
        std::vector<Poly> den_w = detail::shifted_coeffs_mod(d_full, f);
        std::vector<Poly> num_w = detail::shifted_coeffs_mod(b, f);
        den_w.resize(static_cast<std::size_t>(2 * mult), Poly());
        num_w.resize(static_cast<std::size_t>(mult), Poly());
        for (int k = 0; k < mult; ++k)
            if (!den_w[static_cast<std::size_t>(k)].is_zero())
                throw std::logic_error("pole order mismatch in partial fractions");
        Poly e0_inv = detail::quotient_ring_inverse(den_w[static_cast<std::size_t>(mult)], f);
        std::vector<Poly> g(static_cast<std::size_t>(mult));
        for (int k = 0; k < mult; ++k) {
            Poly s = num_w[static_cast<std::size_t>(k)];
            for (int j = 1; j <= k; ++j) s -= den_w[static_cast<std::size_t>(mult + j)] * g[static_cast<std::size_t>(k - j)];
            g[static_cast<std::size_t>(k)] = (s * e0_inv) % f;
        }
        for (int d = 1; d <= mult; ++d) {
            Poly h = g[static_cast<std::size_t>(mult - d)];
            if (d & 1) h = -h;  // 1/(zeta - z)^d = (-1)^d / w^d
            if (!h.is_zero()) out.terms.push_back({f, mult, d, h});
        }
    }
    return out;
}

/// Trace of multiplication by g in Q[y]/(f): sum of g over the roots of f.
/// Power sums come from Newton's identities, so the value is exact.
inline Rational root_sum(const Poly& g_in, const Poly& f) {
    long n = f.degree();
    if (n < 1) return Rational(0);
    Poly g = g_in % f;
    // power sums p_0..p_{deg g}
    std::vector<Rational> e(static_cast<std::size_t>(n) + 1);  // elementary symmetric with sign
    for (long k = 0; k <= n; ++k) e[static_cast<std::size_t>(k)] = f.coeff(static_cast<std::size_t>(n - k)) / f.leading();
    std::vector<Rational> p(static_cast<std::size_t>(g.degree()) + 1);
    p[0] = Rational(n);
    for (long k = 1; k <= g.degree(); ++k) {
        Rational s(0);
        for (long j = 1; j <= std::min(k - 1, n); ++j) s -= e[static_cast<std::size_t>(j)] * p[static_cast<std::size_t>(k - j)];
        if (k <= n) s -= Rational(k) * e[static_cast<std::size_t>(k)];
        p[static_cast<std::size_t>(k)] = s;
    }
    Rational t(0);
    for (long k = 0; k <= g.degree(); ++k) t += g.coeff(static_cast<std::size_t>(k)) * p[static_cast<std::size_t>(k)];
    return t;
}

/// Exact coefficient of z^n reconstructed from the decomposition:
/// sum over terms of h(zeta) zeta^{-n-d} C(n+d-1, d-1). Valid for every
/// n >= 0 when B/D is proper. Requires all D_i(0) != 0.
inline Rational reconstruct_coefficient(const PartialFractionData& pf, unsigned long n) {
    Rational total(0);
    for (const auto& t : pf.terms) {
        // zeta^{-n-d} mod D_i via inverse powers in the quotient ring
        Poly zinv = detail::quotient_ring_inverse(Poly::variable(), t.d_i);
        Poly acc = Poly::one();
        unsigned long e = n + static_cast<unsigned long>(t.d);
        Poly base = zinv;
        while (e) {
            if (e & 1) acc = (acc * base) % t.d_i;
            base = (base * base) % t.d_i;
            e >>= 1;
        }
        Rational contrib = root_sum((t.h * acc) % t.d_i, t.d_i);
        total += binomial(n + static_cast<unsigned long>(t.d) - 1, static_cast<unsigned long>(t.d) - 1) * contrib;
    }
    return total;
}

}  // namespace prb
