#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "prb/diffeq_majorant.hpp"
#include "prb/growth.hpp"

using namespace prb;

namespace {

Poly P(std::initializer_list<long> coeffs) {
    std::vector<Rational> v;
    for (long c : coeffs) v.emplace_back(c);
    return Poly(std::move(v));
}

Rational q(long n, long d = 1) { return rational_of(n, d); }

RecOperator example_1a() { return RecOperator({P({-1}), P({-2, -1}), Poly(), P({2})}); }
RecOperator involutions() { return RecOperator({P({-1, -1}), P({-1}), P({1})}); }

RecOperator apery() {
    Poly b2 = P({2, 1}) * P({2, 1}) * P({2, 1});
    Poly b1 = -(P({3, 2}) * P({39, 51, 17}));
    Poly b0 = P({1, 1}) * P({1, 1}) * P({1, 1});
    return RecOperator({b0, b1, b2});
}

/// Upper bounds on the normalized coefficients |psi_n u_n| of a recurrence
/// solution, exact unrolling times an enclosure of the normalizer.
SeriesPrefixSource normalized_prefix(const RecOperator& r, std::vector<GaussianRational> init, NormalizerSpec ns) {
    return [r, init = std::move(init), ns](long n) {
        auto u = unroll(r, init, static_cast<std::size_t>(std::max(n, 1L)));
        std::vector<Rational> out(static_cast<std::size_t>(n));
        for (long i = 0; i < n; ++i) {
            Rational mod_up = iv_sqrt(u[static_cast<std::size_t>(i)].norm(), 256).hi;
            out[static_cast<std::size_t>(i)] = (IvQ(mod_up) * ns.psi(i, 256)).hi;
        }
        return out;
    };
}

}  // namespace

TEST_CASE("hand trace: geometric solution of the first-order equation") {
    DiffOperatorTheta d({P({0, -1}), P({1, -1})});  // (1-z)theta - z
    SeriesPrefixSource ones = [](long n) { return std::vector<Rational>(static_cast<std::size_t>(n), Rational(1)); };
    MajorantSeries v = bound_normal_diffeq(d, P({1, -1}), ones);
    CHECK(v.T == 0);
    CHECK(v.K == 2);
    CHECK(v.A == q(1));
    CHECK(v.n2 == 1);

    SeriesPrefixSource zeros = [](long n) { return std::vector<Rational>(static_cast<std::size_t>(n), Rational(0)); };
    MajorantSeries vz = bound_normal_diffeq(d, P({1, -1}), zeros);
    CHECK(vz.A == q(0));
}

TEST_CASE("regular point required at the origin") {
    DiffOperatorTheta d({P({1}), P({0, 1})});  // z theta + 1
    SeriesPrefixSource ones = [](long n) { return std::vector<Rational>(static_cast<std::size_t>(n), Rational(1)); };
    CHECK_THROWS_WITH(bound_normal_diffeq(d, P({1, -1}), ones), doctest::Contains("0 should be a regular point"));
}

TEST_CASE("irregularity classification on the named recurrences") {
    SeriesPrefixSource src_inv = normalized_prefix(involutions(), {{q(1), q(0)}, {q(1), q(0)}}, NormalizerSpec{1, 2});
    GrowthData g_inv = asympt(involutions());
    DiffOperatorTheta d_inv = normalized_diffeq(involutions(), g_inv.kappa);
    MajorantSeries v_inv = bound_normal_diffeq(d_inv, g_inv.p_alpha, src_inv);
    CHECK(v_inv.T == 1);  // subexponential class e^{c sqrt n}

    GrowthData g_ap = asympt(apery());
    DiffOperatorTheta d_ap = normalized_diffeq(apery(), g_ap.kappa);
    SeriesPrefixSource src_ap = normalized_prefix(apery(), {{q(1), q(0)}, {q(5), q(0)}}, NormalizerSpec{0, 1});
    MajorantSeries v_ap = bound_normal_diffeq(d_ap, g_ap.p_alpha, src_ap);
    CHECK(v_ap.T == 0);  // regular dominant singularities

    GrowthData g_1a = asympt(example_1a());
    DiffOperatorTheta d_1a = normalized_diffeq(example_1a(), g_1a.kappa);
    SeriesPrefixSource src_1a = normalized_prefix(example_1a(), {{q(1), q(0)}, {q(1), q(0)}, {q(1), q(0)}}, NormalizerSpec{1, 2});
    MajorantSeries v_1a = bound_normal_diffeq(d_1a, g_1a.p_alpha, src_1a);
    CHECK(v_1a.T == 0);
}

TEST_CASE("majorant coefficients: closed forms") {
    MajorantSeries v1{P({1, -1}), 0, 2, q(1), q(0), q(0), 1, {}};
    IvQ c5 = majorant_coefficient(v1, 5);
    CHECK(c5.lo == q(6));
    CHECK(c5.hi == q(6));

    MajorantSeries v2{P({1, 0, 0}), 0, 1, q(3), q(0), q(0), 1, {}};
    v2.alpha_poly = Poly(std::vector<Rational>{Rational(1), q(-1, 2)});  // 1 - z/2, delta = 2
    IvQ c3 = majorant_coefficient(v2, 3);
    CHECK(c3.lo == q(3, 8));
    CHECK(c3.hi == q(3, 8));
}

TEST_CASE("majorant coefficients: exponential case against exact composition") {
    // v = exp(1/(1-z)) = e * exp(z/(1-z)); coefficients of exp(z/(1-z)) are
    // rational and computable by truncated composition.
    MajorantSeries v{P({1, -1}), 1, 1, q(1), q(0), q(0), 1, {}};
    const int n = 4;
    // w = z/(1-z) truncated, exp(w) = sum w^j / j!
    std::vector<Rational> w(n + 1, Rational(1));
    w[0] = Rational(0);
    std::vector<Rational> comp(n + 1, Rational(0));
    comp[0] = Rational(1);
    std::vector<Rational> wp(n + 1, Rational(0));
    wp[0] = Rational(1);  // w^0
    Rational fact(1);
    for (int j = 1; j <= n; ++j) {
        fact *= Rational(j);
        std::vector<Rational> next(n + 1, Rational(0));
        for (int a = 0; a <= n; ++a)
            for (int b = 0; a + b <= n; ++b) next[a + b] += wp[static_cast<std::size_t>(a)] * w[static_cast<std::size_t>(b)];
        wp = next;
        for (int i = 0; i <= n; ++i) comp[static_cast<std::size_t>(i)] += wp[static_cast<std::size_t>(i)] / fact;
    }
    IvQ ref = iv_exp(Rational(1), 256) * IvQ(comp[n]);
    IvQ got = majorant_coefficient(v, n, 256);
    CHECK(got.lo <= ref.hi);
    CHECK(got.hi >= ref.lo);
    // all coefficients positive
    for (const IvQ& c : majorant_coefficients(v, 30, 192)) CHECK(c.lo > 0);
}

TEST_CASE("order reduction inequality") {
    std::mt19937 rng(5);
    auto rnd = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    for (int trial = 0; trial < 40; ++trial) {
        int r = rnd(2, 4), t = rnd(0, 3);
        std::vector<Rational> mk(static_cast<std::size_t>(r));
        for (auto& x : mk) x = q(rnd(0, 9), rnd(1, 4));
        Rational m(0);
        for (int k = 0; k < r; ++k)
            m = std::max(m, static_cast<Rational>(mk[static_cast<std::size_t>(k)] / binomial(static_cast<unsigned long>(r - 1), static_cast<unsigned long>(k))));
        for (long n = 1; n <= 50; n += 7) {
            for (long j = 0; j < n; j += 3) {
                Rational lhs(0);
                for (int k = 0; k < r; ++k) {
                    Rational jp(1);
                    for (int e = 0; e < k; ++e) jp *= Rational(j);
                    lhs += mk[static_cast<std::size_t>(k)] *
                           binomial(static_cast<unsigned long>(n - 1 - j + r - k + t - 1), static_cast<unsigned long>(r - k + t - 1)) * jp;
                }
                Rational rhs = m * binomial(static_cast<unsigned long>(n - 1 - j + t), static_cast<unsigned long>(t));
                for (int e = 0; e < r - 1; ++e) rhs *= Rational(n);
                CHECK(lhs <= rhs);
            }
        }
    }
}

TEST_CASE("start index is minimal up to doubling") {
    for (const RecOperator& r : {involutions(), example_1a(), apery()}) {
        GrowthData g = asympt(r);
        DiffOperatorTheta d = normalized_diffeq(r, g.kappa);
        std::vector<GaussianRational> init;
        for (long k = 0; k < r.order(); ++k) init.push_back({q(1), q(0)});
        NormalizerSpec ns = normalizer_for(g);
        MajorantSeries v = bound_normal_diffeq(d, g.p_alpha, normalized_prefix(r, init, ns));
        CHECK(detail::n2_condition(v.c_abs, v.m_delta_up, v.K, d.order(), v.n2));
        if (v.n2 > 1) CHECK_FALSE(detail::n2_condition(v.c_abs, v.m_delta_up, v.K, d.order(), v.n2 / 2));
    }
}

TEST_CASE("majorant dominates the normalized solutions up to n = 500") {
    struct Case {
        RecOperator rec;
        std::vector<GaussianRational> init;
    };
    std::vector<Case> cases = {
        {involutions(), {{q(1), q(0)}, {q(1), q(0)}}},
        {example_1a(), {{q(1), q(0)}, {q(1), q(0)}, {q(1), q(0)}}},
        {apery(), {{q(1), q(0)}, {q(5), q(0)}}},
    };
    for (const auto& c : cases) {
        GrowthData g = asympt(c.rec);
        NormalizerSpec ns = normalizer_for(g);
        DiffOperatorTheta d = normalized_diffeq(c.rec, g.kappa);
        SeriesPrefixSource src = normalized_prefix(c.rec, c.init, ns);
        MajorantSeries v = bound_normal_diffeq(d, g.p_alpha, src);
        const long n_max = 500;
        std::vector<Rational> up = src(n_max + 1);
        std::vector<IvQ> vn = majorant_coefficients(v, static_cast<std::size_t>(n_max) + 1, 320);
        bool ok = true;
        for (long n = 0; n <= n_max; ++n) ok = ok && up[static_cast<std::size_t>(n)] <= vn[static_cast<std::size_t>(n)].hi;
        CHECK(ok);
    }
}
