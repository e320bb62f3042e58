#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "prb/modulus.hpp"
#include "prb/poly.hpp"
#include "prb/ratfun.hpp"

// Recurrence operators sum_k b^[k](n) S^k in Q[n]<S>, with the polynomial
// coefficient written on the left and the commutation rule S p(n) = p(n+1) S.

namespace prb {

/// Smallest nonnegative integer root of p, if any; Sturm isolation plus
/// exact candidate evaluation (divisor enumeration would choke on the huge
/// constant terms that arise in practice).
inline std::optional<long> smallest_nonneg_integer_root(const Poly& p) {
    if (p.is_zero()) return 0;
    if (p.degree() == 0) return std::nullopt;
    Poly w = squarefree_part(p);
    auto chain = detail::sturm_chain(w);
    Rational bound = detail::cauchy_root_bound(w);
    std::optional<long> best;
    auto consider = [&](long n) {
        if (n >= 0 && p.eval(Rational(n)) == 0 && (!best || n < *best)) best = n;
    };
    // roots of w in (-1/2, bound]; subdivide until each box spans < 1 integer
    std::vector<std::pair<Rational, Rational>> stack{{Rational(-1, 2), bound}};
    while (!stack.empty()) {
        auto [a, b] = stack.back();
        stack.pop_back();
        int cnt = detail::roots_in(chain, a, b);
        if (cnt == 0) continue;
        if (b - a < Rational(1, 2)) {
            mpz_class fl;
            mpz_fdiv_q(fl.get_mpz_t(), b.get_num_mpz_t(), b.get_den_mpz_t());
            consider(fl.get_si());
            consider(fl.get_si() + 1);
            continue;
        }
        Rational mid = (a + b) / 2;
        stack.push_back({a, mid});
        stack.push_back({mid, b});
    }
    return best;
}

class RecOperator {
  public:
    RecOperator() = default;
    explicit RecOperator(std::vector<Poly> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

    /// sum of c_k S^k with constant rational coefficients.
    static RecOperator constants(std::initializer_list<Rational> cs) {
        std::vector<Poly> v;
        for (const auto& c : cs) v.push_back(Poly(c));
        return RecOperator(std::move(v));
    }

    bool is_zero() const { return coeffs_.empty(); }
    long order() const { return static_cast<long>(coeffs_.size()) - 1; }
    const std::vector<Poly>& coeffs() const { return coeffs_; }
    Poly coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : Poly(); }
    const Poly& leading() const {
        if (is_zero()) throw std::domain_error("zero operator");
        return coeffs_.back();
    }

    long valuation() const {
        if (is_zero()) throw std::domain_error("zero operator");
        long m = 0;
        while (coeffs_[static_cast<std::size_t>(m)].is_zero()) ++m;
        return m;
    }

    bool operator==(const RecOperator& o) const { return coeffs_ == o.coeffs_; }

    RecOperator operator+(const RecOperator& o) const {
        std::vector<Poly> v(std::max(coeffs_.size(), o.coeffs_.size()));
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = coeff(i) + o.coeff(i);
        return RecOperator(std::move(v));
    }

    /// Noncommutative product: S^i p(n) = p(n+i) S^i.
    RecOperator operator*(const RecOperator& o) const {
        if (is_zero() || o.is_zero()) return RecOperator();
        std::vector<Poly> v(coeffs_.size() + o.coeffs_.size() - 1);
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            for (std::size_t j = 0; j < o.coeffs_.size(); ++j)
                v[i + j] += coeffs_[i] * o.coeffs_[j].taylor_shift(Rational(static_cast<long>(i)));
        return RecOperator(std::move(v));
    }

    RecOperator operator*(const Poly& p) const {
        std::vector<Poly> v(coeffs_);
        for (auto& c : v) c = p * c;
        return RecOperator(std::move(v));
    }

    /// Normalize to primitive integer coefficients with positive leading sign.
    RecOperator normalized() const {
        if (is_zero()) return *this;
        Poly content;
        for (const auto& c : coeffs_) {
            if (c.is_zero()) continue;
            content = content.is_zero() ? c : poly_gcd(content, c);
        }
        std::vector<Poly> v(coeffs_);
        for (auto& c : v) c = c.exact_div(content);
        // single positive rational rescale across all coefficients
        Poly flat;
        std::vector<Rational> all;
        for (const auto& c : v)
            for (const auto& x : c.coeffs()) all.push_back(x);
        Poly pack(std::move(all));
        if (!pack.is_zero()) {
            Rational scale = primitive_positive(pack).leading() / pack.leading();
            if (scale < 0) scale = -scale;
            for (auto& c : v) c = c * scale;
        }
        return RecOperator(std::move(v));
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::string s;
        for (long k = order(); k >= 0; --k) {
            const Poly& c = coeffs_[static_cast<std::size_t>(k)];
            if (c.is_zero()) continue;
            if (!s.empty()) s += " + ";
            s += "(" + c.to_string("n") + ")";
            if (k > 0) s += "*S^" + std::to_string(k);
        }
        return s;
    }

  private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
    }

    std::vector<Poly> coeffs_;
};

struct RecShape {
    long order = 0;
    long valuation = 0;
    bool nonsingular = false;
    bool reversible = false;
    std::optional<long> singular_at;      // nonneg integer root of b^[s]
    std::optional<long> irreversible_at;  // nonneg integer root of b^[m]
};

inline RecShape check_shape(const RecOperator& r) {
    if (r.is_zero()) throw std::domain_error("zero operator has no shape");
    RecShape sh;
    sh.order = r.order();
    sh.valuation = r.valuation();
    sh.singular_at = smallest_nonneg_integer_root(r.leading());
    sh.irreversible_at = smallest_nonneg_integer_root(r.coeff(static_cast<std::size_t>(sh.valuation)));
    sh.nonsingular = !sh.singular_at.has_value();
    sh.reversible = !sh.irreversible_at.has_value();
    return sh;
}

/// R S^{-m}: the operator annihilating (u_{n+m}); coefficient polynomials
/// are unchanged, indices drop by the valuation m.
inline RecOperator shift_valuation(const RecOperator& r) {
    long m = r.valuation();
    if (m == 0) return r;
    std::vector<Poly> v(r.coeffs().begin() + m, r.coeffs().end());
    return RecOperator(std::move(v));
}

struct NewtonEdge {
    Rational slope;   // -kappa(e)
    long t;           // leftmost abscissa
    long d_t;         // ordinate at t
    Poly char_poly;   // chi_e(lambda)
};

struct NewtonPolygon {
    std::vector<NewtonEdge> edges;  // slopes strictly increasing
};

inline NewtonPolygon newton_polygon(const RecOperator& r) {
    std::vector<std::pair<long, long>> pts;  // (k, deg b^[k])
    for (long k = 0; k <= r.order(); ++k)
        if (!r.coeff(static_cast<std::size_t>(k)).is_zero()) pts.emplace_back(k, r.coeff(static_cast<std::size_t>(k)).degree());
    if (pts.size() < 2) throw std::domain_error("newton polygon needs at least two nonzero coefficients");
    // upper convex hull, left to right
    std::vector<std::pair<long, long>> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2) {
            auto& a = hull[hull.size() - 2];
            auto& b = hull.back();
            // keep hull upper-convex: remove b if it lies on or below segment a-p
            if ((b.second - a.second) * (p.first - a.first) <= (p.second - a.second) * (b.first - a.first)) hull.pop_back();
            else break;
        }
        hull.push_back(p);
    }
    NewtonPolygon np;
    for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
        NewtonEdge edge;
        auto [k0, d0] = hull[e];
        auto [k1, d1] = hull[e + 1];
        edge.slope = Rational(d1 - d0, k1 - k0);
        edge.slope.canonicalize();
        edge.t = k0;
        edge.d_t = d0;
        // chi_e(lambda) = sum over lattice points on the edge of c_k lambda^{k-t},
        // c_k = leading coefficient of b^[k] when (k, deg b^[k]) lies on the edge
        Poly chi;
        for (const auto& [k, dk] : pts) {
            if (k < k0 || k > k1) continue;
            if ((dk - d0) * (k1 - k0) != (d1 - d0) * (k - k0)) continue;
            chi += Poly::monomial(r.coeff(static_cast<std::size_t>(k)).leading(), static_cast<std::size_t>(k - k0));
        }
        edge.char_poly = chi;
        np.edges.push_back(edge);
    }
    return np;
}

/// Exact forward unrolling of R u = 0 from s initial values; returns u_0..u_{N-1}.
inline std::vector<GaussianRational> unroll(const RecOperator& r, const std::vector<GaussianRational>& init, long n_terms) {
    long s = r.order();
    if (static_cast<long>(init.size()) != s) throw std::invalid_argument("initial values must match the order");
    std::vector<GaussianRational> u(init);
    u.reserve(static_cast<std::size_t>(std::max(n_terms, s)));
    for (long n = 0; n + s < n_terms; ++n) {
        Rational lead = r.leading().eval(Rational(n));
        if (lead == 0) throw std::domain_error("recurrence is singular at index " + std::to_string(n));
        GaussianRational acc;
        for (long k = 0; k < s; ++k) acc = acc + u[static_cast<std::size_t>(n + k)] * r.coeff(static_cast<std::size_t>(k)).eval(Rational(n));
        u.push_back(-acc / lead);
    }
    u.resize(static_cast<std::size_t>(std::max<long>(0, n_terms)));
    return u;
}

/// Certified upper bounds on |u_n| when only moduli bounds on the initial
/// values are known: beta_{n+s} = sum_k |b^[k](n)| beta_{n+k} / |b^[s](n)|.
inline std::vector<Rational> unroll_moduli_bounds(const RecOperator& r, const std::vector<Rational>& init_bounds, long n_terms) {
    long s = r.order();
    if (static_cast<long>(init_bounds.size()) != s) throw std::invalid_argument("initial bounds must match the order");
    std::vector<Rational> b(init_bounds);
    for (long n = 0; n + s < n_terms; ++n) {
        Rational lead = abs(r.leading().eval(Rational(n)));
        if (lead == 0) throw std::domain_error("recurrence is singular at index " + std::to_string(n));
        Rational acc(0);
        for (long k = 0; k < s; ++k) acc += abs(r.coeff(static_cast<std::size_t>(k)).eval(Rational(n))) * b[static_cast<std::size_t>(n + k)];
        b.push_back(acc / lead);
    }
    b.resize(static_cast<std::size_t>(std::max<long>(0, n_terms)));
    return b;
}

/// Operator annihilating (x_n y_n) for R1 x = 0, R2 y = 0, by finding the
/// first linear dependence among the product vectors over Q(n).
inline RecOperator symmetric_product(const RecOperator& r1, const RecOperator& r2) {
    long s1 = r1.order(), s2 = r2.order();
    if (s1 < 1 || s2 < 1) {
        // order-0 operator forces the zero sequence; so does the product
        return RecOperator({Poly::one()});
    }
    long dim = s1 * s2;

    // e(k) expresses x_{n+k} over the basis x_n..x_{n+s-1} with Q(n) entries
    auto expansions = [](const RecOperator& r, long s, long upto) {
        std::vector<std::vector<RatFun>> e(static_cast<std::size_t>(upto) + 1, std::vector<RatFun>(static_cast<std::size_t>(s)));
        for (long k = 0; k <= upto; ++k) {
            if (k < s) {
                e[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)] = RatFun(Poly::one());
                continue;
            }
            Rational sh(k - s);
            Poly lead = r.leading().taylor_shift(sh);
            for (long j = 0; j < s; ++j) {
                RatFun c(-r.coeff(static_cast<std::size_t>(j)).taylor_shift(sh), lead);
                if (c.is_zero()) continue;
                for (long i = 0; i < s; ++i)
                    e[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] += c * e[static_cast<std::size_t>(k - s + j)][static_cast<std::size_t>(i)];
            }
        }
        return e;
    };
    auto e1 = expansions(r1, s1, dim);
    auto e2 = expansions(r2, s2, dim);

    // Gaussian elimination with dependence tracking
    struct PivotRow {
        std::vector<RatFun> row;
        std::vector<RatFun> comb;  // coordinates in the original v(0..dim)
        long col;
    };
    std::vector<PivotRow> pivots;
    for (long k = 0; k <= dim; ++k) {
        std::vector<RatFun> row(static_cast<std::size_t>(dim));
        for (long i = 0; i < s1; ++i)
            for (long j = 0; j < s2; ++j)
                row[static_cast<std::size_t>(i * s2 + j)] = e1[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] * e2[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
        std::vector<RatFun> comb(static_cast<std::size_t>(dim) + 1);
        comb[static_cast<std::size_t>(k)] = RatFun(Poly::one());
        for (const auto& p : pivots) {
            const RatFun& f = row[static_cast<std::size_t>(p.col)];
            if (f.is_zero()) continue;
            RatFun factor = f;
            for (long c = 0; c < dim; ++c) row[static_cast<std::size_t>(c)] -= factor * p.row[static_cast<std::size_t>(c)];
            for (long c = 0; c <= dim; ++c) comb[static_cast<std::size_t>(c)] -= factor * p.comb[static_cast<std::size_t>(c)];
        }
        long col = -1;
        for (long c = 0; c < dim; ++c)
            if (!row[static_cast<std::size_t>(c)].is_zero()) { col = c; break; }
        if (col < 0) {
            // dependence: sum_j comb[j] x_{n+j} y_{n+j} = 0
            Poly lcm_den = Poly::one();
            for (long j = 0; j <= k; ++j) {
                const RatFun& c = comb[static_cast<std::size_t>(j)];
                if (c.is_zero()) continue;
                Poly g = poly_gcd(lcm_den, c.den());
                lcm_den = lcm_den * c.den().exact_div(g);
            }
            std::vector<Poly> coeffs(static_cast<std::size_t>(k) + 1);
            for (long j = 0; j <= k; ++j) {
                const RatFun& c = comb[static_cast<std::size_t>(j)];
                if (c.is_zero()) continue;
                coeffs[static_cast<std::size_t>(j)] = c.num() * lcm_den.exact_div(c.den());
            }
            RecOperator out(std::move(coeffs));
            if (out.is_zero()) throw std::logic_error("degenerate elimination in symmetric product");
            return out.normalized();
        }
        RatFun inv = RatFun(Poly::one()) / row[static_cast<std::size_t>(col)];
        for (long c = 0; c < dim; ++c) row[static_cast<std::size_t>(c)] *= inv;
        for (long c = 0; c <= dim; ++c) comb[static_cast<std::size_t>(c)] *= inv;
        pivots.push_back({std::move(row), std::move(comb), col});
    }
    throw std::logic_error("no dependence found in symmetric product");
}

}  // namespace prb
