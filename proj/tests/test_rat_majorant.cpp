#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "prb/rat_majorant.hpp"

using namespace prb;

namespace {

Poly P(std::initializer_list<long> coeffs) {
    std::vector<Rational> v;
    for (long c : coeffs) v.emplace_back(c);
    return Poly(std::move(v));
}

Rational q(long n, long d = 1) { return rational_of(n, d); }

/// Exact check of |r_n| <= M C(n+m-1, m-1) delta_lo^{-n} for all n < count.
void check_majorant(const RatFun& r, const RatMajorant& mj, const Rational& delta_lo, std::size_t count) {
    auto coeffs = r.series_coefficients(count);
    Rational dpow(1);
    bool ok = true;
    for (std::size_t n = 0; n < count; ++n) {
        if (n > 0) dpow *= delta_lo;
        ok = ok && abs(coeffs[n]) * dpow <= mj.M * binomial(n + static_cast<unsigned long>(mj.m) - 1, static_cast<unsigned long>(mj.m) - 1);
    }
    CHECK(ok);
}

}  // namespace

TEST_CASE("geometric series: exact tight constant") {
    RatFun r(P({1}), P({1, -1}));  // 1/(1-z)
    RatMajorant mj = bound_ratpoly(r, P({1, -1}), 1);
    CHECK(mj.M == q(1));
    check_majorant(r, mj, q(1), 50);
}

TEST_CASE("polynomial input: M from the prefix, zero tail") {
    RatFun r(P({3, 1}));  // 3 + z
    RatMajorant mj = bound_ratpoly(r, P({1, -1}), 1);
    CHECK(mj.M == q(3));
    CHECK(mj.n0 == 2);
    CHECK(mj.t_n0 == q(0));
    // refinement leaves a polynomial bound unchanged
    RatMajorant mj2 = refine(mj, r);
    CHECK(mj2.M == mj.M);
}

TEST_CASE("scale 2 with exponent 2: ratio maximal at n = 0") {
    RatFun r(P({1}), P({1, -2}));  // 1/(1-2z), r_n = 2^n
    RatMajorant mj = bound_ratpoly(r, P({1, -2}), 2);
    CHECK(mj.M == q(1));
    check_majorant(r, mj, q(1, 2), 60);
}

TEST_CASE("refine is non-increasing and stays above the true supremum") {
    RatFun r(P({1}), P({1, -1}));  // 1/(1-z) against (1-z)^{-2}
    RatMajorant mj = bound_ratpoly(r, P({1, -1}), 2);
    // true ratios are 1/(n+1), supremum 1 at n = 0
    CHECK(mj.M >= q(1));
    Rational prev = mj.M;
    for (int step = 0; step < 6; ++step) {
        mj = refine(mj, r);
        CHECK(mj.M <= prev);
        CHECK(mj.M >= q(1));
        prev = mj.M;
    }
    CHECK(refine_fully(bound_ratpoly(r, P({1, -1}), 2), r).M == q(1));
}

TEST_CASE("precondition violations raise the scale error") {
    // delta(P_alpha) = 2 > delta(D) = 1
    CHECK_THROWS_WITH(bound_ratpoly(RatFun(P({1}), P({1, -1})), P({2, -1}), 1), doctest::Contains("majorant scale too small"));
    // equal circles but m below the pole order 2
    RatFun dbl(P({1}), P({1, -1}) * P({1, -1}));
    CHECK_THROWS_WITH(bound_ratpoly(dbl, P({1, -1}), 1), doctest::Contains("majorant scale too small"));
    CHECK(bound_ratpoly(dbl, P({1, -1}), 2).M == q(1));
    // pole at the origin
    CHECK_THROWS(bound_ratpoly(RatFun(P({1}), P({0, 1})), P({1, -1}), 1));
}

TEST_CASE("repeated complex pair on the circle") {
    // 1/((1+z^2)^2): delta = 1 with order 2
    Poly d = P({1, 0, 1}) * P({1, 0, 1});
    RatFun r(P({1}), d);
    RatMajorant mj = bound_ratpoly(r, P({1, 0, 1}), 2);
    check_majorant(r, mj, q(1), 200);
    // coefficients of (1+z^2)^{-2} have |r_{2j}| = j+1, so M >= sup (j+1)/(2j+1) ... >= 1/2
    CHECK(mj.M >= q(1, 2));
    CHECK(mj.M <= q(4));
}

TEST_CASE("random certified majorants against exact coefficients") {
    std::mt19937 rng(7);
    auto rnd = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    int done = 0;
    while (done < 200) {
        // random denominator with D(0) != 0 and a random numerator
        std::vector<Rational> dv(static_cast<std::size_t>(rnd(1, 3)) + 1);
        for (auto& x : dv) x = q(rnd(-3, 3));
        if (dv[0] == 0) dv[0] = q(rnd(1, 3));
        Poly d(std::move(dv));
        if (d.degree() < 1) continue;
        std::vector<Rational> nv(static_cast<std::size_t>(rnd(1, 5)));
        for (auto& x : nv) x = q(rnd(-4, 4));
        Poly num(std::move(nv));
        if (num.is_zero()) continue;
        RatFun r(num, d);
        if (r.is_polynomial() || r.den().coeff(0) == 0) continue;

        AlgebraicModulus dd(r.den());
        RatFun target = r;
        Poly p_alpha;
        int m;
        Rational delta_lo;
        if (done % 3 == 0) {
            // tight case: P_alpha = D, m = order on the dominant circle
            p_alpha = r.den();
            m = dd.ord();
            delta_lo = dd.lower(48);
        } else {
            // strictly smaller scale 1 - z/s with rational s < delta(D)
            Rational s = dd.lower(16) * q(1, 2);
            p_alpha = Poly(std::vector<Rational>{Rational(1), -1 / s});
            m = rnd(1, 3);
            delta_lo = s;  // exact here
        }
        RatMajorant mj = bound_ratpoly(target, p_alpha, m);
        check_majorant(target, mj, delta_lo, 1001);
        ++done;
    }
}

TEST_CASE("tail estimate dominates exact ratios past the prefix") {
    std::mt19937 rng(77);
    auto rnd = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    int done = 0;
    while (done < 25) {
        std::vector<Rational> dv(static_cast<std::size_t>(rnd(2, 3)) + 1);
        for (auto& x : dv) x = q(rnd(-3, 3));
        if (dv[0] == 0) dv[0] = q(1);
        Poly d(std::move(dv));
        if (d.degree() < 2) continue;
        RatFun r(P({1, 1}), d);
        if (r.is_polynomial() || r.den().coeff(0) == 0) continue;
        AlgebraicModulus dd(r.den());
        RatMajorant mj = bound_ratpoly(r, r.den(), dd.ord());
        Rational delta_lo = dd.lower(64);
        long n_max = 10 * mj.n0;
        auto coeffs = r.series_coefficients(static_cast<std::size_t>(n_max) + 1);
        Rational prev_t;
        bool first = true;
        for (long n : {mj.n0, 2 * mj.n0, 10 * mj.n0}) {
            Rational t = detail::tail_term_sum(mj.terms, mj.m, n);
            if (!first) CHECK(t <= prev_t);
            prev_t = t;
            first = false;
            Rational dpow(1);
            for (long i = 0; i < n; ++i) dpow *= delta_lo;
            Rational ratio = abs(coeffs[static_cast<std::size_t>(n)]) * dpow /
                             binomial(static_cast<unsigned long>(n + mj.m - 1), static_cast<unsigned long>(mj.m - 1));
            CHECK(ratio <= t);
        }
        ++done;
    }
}
