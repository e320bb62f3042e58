#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "prb/modulus.hpp"
#include "prb/partial_fractions.hpp"
#include "prb/ratfun.hpp"

using namespace prb;

namespace {

Poly P(std::initializer_list<long> coeffs) {
    std::vector<Rational> v;
    for (long c : coeffs) v.emplace_back(c);
    return Poly(std::move(v));
}

Rational q(long n, long d = 1) { return rational_of(n, d); }

}  // namespace

TEST_CASE("rational and gaussian basics") {
    CHECK(rational_of(2, 4) == rational_of(1, 2));
    GaussianRational i(q(0), q(1));
    CHECK((i * i) == GaussianRational(q(-1)));
    GaussianRational a(q(1), q(2)), b(q(3), q(-1));
    CHECK((a * b / b) == a);
    CHECK(a.norm() == q(5));
}

TEST_CASE("interval arithmetic is outward and exact on rationals") {
    IvQ x(q(1, 3), q(1, 2));
    IvQ y = x * x;
    CHECK(y.lo == q(1, 9));
    CHECK(y.hi == q(1, 4));
    IvQ s = iv_sqrt(q(2));
    CHECK(s.lo * s.lo <= q(2));
    CHECK(s.hi * s.hi >= q(2));
    CHECK(s.width() < q(1, 1000000000));
    CHECK(iv_sqrt(q(9, 4)).is_point());
    IvQ e = iv_exp(q(1));
    CHECK(e.lo < e.hi);
    CHECK(e.lo > q(27, 10));
    CHECK(e.hi < q(28, 10));
    IvQ shr = IvQ(q(1, 3)).shrink(64);
    CHECK(shr.lo <= q(1, 3));
    CHECK(shr.hi >= q(1, 3));
    CHECK(shr.width() <= Rational(1) / Rational(mpz_class(1) << 60));
}

TEST_CASE("gamma enclosure brackets known values") {
    IvQ g = iv_gamma(q(5));  // 4! = 24
    CHECK(g.lo <= q(24));
    CHECK(g.hi >= q(24));
    IvQ h = iv_gamma(q(3, 2));  // sqrt(pi)/2 ~ 0.8862
    CHECK(h.lo > q(886, 1001));
    CHECK(h.hi < q(887, 1000));
}

TEST_CASE("polynomial arithmetic, division, shift") {
    Poly a = P({-1, 0, 1});  // z^2 - 1
    Poly b = P({1, 1});      // z + 1
    auto [quot, rem] = a.divmod(b);
    CHECK(rem.is_zero());
    CHECK(quot == P({-1, 1}));
    CHECK(a.taylor_shift(q(1)) == P({0, 2, 1}));
    CHECK(a.reversed() == P({1, 0, -1}));
    CHECK(a.eval(q(3)) == q(8));
    CHECK(P({0, 0, 2, 4}).valuation() == 2);
    CHECK(poly_gcd(P({-1, 0, 1}), P({1, 1})) == P({1, 1}));
}

TEST_CASE("squarefree factorization") {
    // (1-z)^2 (1-2z)
    Poly p = P({1, -1}) * P({1, -1}) * P({1, -2});
    auto f = squarefree_factorize(p);
    REQUIRE(f.size() == 2);
    CHECK(f[0].first == P({-1, 2}) * q(1, 2));  // monic z - 1/2
    CHECK(f[0].second == 1);
    CHECK(f[1].first == P({-1, 1}));  // monic z - 1
    CHECK(f[1].second == 2);

    auto g = squarefree_factorize(P({1, -1}));
    REQUIRE(g.size() == 1);
    CHECK(g[0].second == 1);

    auto h = squarefree_factorize(P({1, -34, 1}));
    REQUIRE(h.size() == 1);
    CHECK(h[0].first == P({1, -34, 1}));
    CHECK(h[0].second == 1);
}

TEST_CASE("resultant and interpolation") {
    // res(z^2-2, z^2-3) = (2-3)^2 = 1
    CHECK(resultant(P({-2, 0, 1}), P({-3, 0, 1})) == q(1));
    // res(z-2, z-3) = value of z-3 at 2
    CHECK(resultant(P({-2, 1}), P({-3, 1})) == q(-1));
    std::vector<std::pair<Rational, Rational>> pts{{q(0), q(1)}, {q(1), q(2)}, {q(2), q(5)}};
    CHECK(interpolate(pts) == P({1, 0, 1}));
}

TEST_CASE("rational function series coefficients") {
    RatFun geo(Poly::one(), P({1, -1}));
    auto c = geo.series_coefficients(4);
    CHECK(c == std::vector<Rational>{q(1), q(1), q(1), q(1)});
    RatFun geo2(Poly::one(), P({1, -2}));
    auto c2 = geo2.series_coefficients(4);
    CHECK(c2 == std::vector<Rational>{q(1), q(2), q(4), q(8)});
    RatFun poly(P({3, 1}));
    auto c3 = poly.series_coefficients(4);
    CHECK(c3 == std::vector<Rational>{q(3), q(1), q(0), q(0)});
    RatFun sum = geo + geo2;
    auto c4 = sum.series_coefficients(3);
    CHECK(c4 == std::vector<Rational>{q(2), q(3), q(5)});
}

TEST_CASE("dominant modulus: named values") {
    AlgebraicModulus m1(P({1, -2}));
    CHECK(m1.ord() == 1);
    CHECK(m1.exact_square());
    CHECK(m1.exact_sq() == q(1, 4));

    AlgebraicModulus m2(P({0, 1, -1}));  // z(1-z)
    CHECK(m2.exact_sq() == q(1));
    CHECK(m2.ord() == 1);

    AlgebraicModulus m3(P({1, -1}) * P({1, -1}) * P({1, 1}));  // (1-z)^2(1+z)
    CHECK(m3.ord() == 2);
    CHECK(m3.exact_sq() == q(1));

    AlgebraicModulus m4(P({1, -34, 1}));  // delta = 17 - 12 sqrt 2
    CHECK(m4.ord() == 1);
    IvQ ref = IvQ(q(17)) - IvQ(q(12)) * iv_sqrt(q(2), 256);
    IvQ enc = m4.refined(64).enclosure();
    CHECK(enc.lo <= ref.hi);
    CHECK(enc.hi >= ref.lo);
    CHECK(enc.width() <= Rational(1) / Rational(mpz_class(1) << 64));

    AlgebraicModulus mono(P({0, 0, 5}));
    CHECK(mono.is_infinite());
}

TEST_CASE("compare_moduli trichotomy") {
    AlgebraicModulus a(P({1, -1}));
    CHECK(compare_moduli(a, a) == Ordering::EQ);
    CHECK(compare_moduli(AlgebraicModulus(P({1, -2})), a) == Ordering::LT);
    CHECK(compare_moduli(AlgebraicModulus(P({-2, 0, 1})), AlgebraicModulus(P({2, 0, -1}))) == Ordering::EQ);
    CHECK(compare_moduli(a, AlgebraicModulus(P({0, 0, 3}))) == Ordering::LT);
    // irrational vs irrational, equal: roots of both contain modulus 17-12sqrt2
    Poly apery = P({1, -34, 1});
    CHECK(compare_moduli(AlgebraicModulus(apery), AlgebraicModulus(apery * P({1, 1}))) == Ordering::EQ);
    // irrational vs nearby rational
    AlgebraicModulus apm(apery);
    Rational lo = apm.lower(80);
    CHECK(compare_moduli(apm, AlgebraicModulus(Poly(std::vector<Rational>{-lo, q(1)}))) == Ordering::GT);
}

TEST_CASE("approx_modulus directed bounds") {
    AlgebraicModulus half(P({1, -2}));
    Rational lo = approx_modulus(half, Direction::LOWER, 20);
    CHECK(lo <= q(1, 2));
    CHECK(q(1, 2) - lo <= Rational(1) / Rational(1 << 20));

    AlgebraicModulus apery(P({1, -34, 1}));
    Rational alo = approx_modulus(apery, Direction::LOWER, 100);
    IvQ ref = IvQ(q(17)) - IvQ(q(12)) * iv_sqrt(q(2), 256);
    CHECK(alo <= ref.hi);
    // |alo - (17-12sqrt2)| <= 1e-30
    Rational tol = Rational(1, 1);
    for (int i = 0; i < 30; ++i) tol /= 10;
    CHECK(ref.lo - alo <= tol);

    AlgebraicModulus s2(P({2, 0, -1}));
    Rational up = approx_modulus(s2, Direction::UPPER, 53);
    IvQ r2 = iv_sqrt(q(2), 256);
    CHECK(up >= r2.lo);
    CHECK(up - r2.hi <= Rational(1) / Rational(mpz_class(1) << 40));

    CHECK_THROWS(approx_modulus(AlgebraicModulus(P({0, 0, 1})), Direction::UPPER, 10));
}

TEST_CASE("root_abs_sum_upper") {
    Rational b1 = root_abs_sum_upper(Poly::one(), P({-1, 1}), 1);  // zeta = 1
    CHECK(b1 == q(1));
    Rational b2 = root_abs_sum_upper(Poly::one(), P({-1, 2}), 1);  // zeta = 1/2
    CHECK(b2 == q(2));
    Rational b3 = root_abs_sum_upper(Poly::variable(), P({-2, 0, 1}), 0, 128);  // roots +-sqrt2
    IvQ r2 = iv_sqrt(q(2), 256);
    CHECK(b3 >= 2 * r2.lo);
    CHECK(b3 - 2 * r2.hi <= Rational(1) / Rational(mpz_class(1) << 30));
    // complex pair: zeta^2 = -1, h = 1, d = 1: sum |zeta|^-1 = 2
    Rational b4 = root_abs_sum_upper(Poly::one(), P({1, 0, 1}), 1, 128);
    CHECK(b4 >= q(2));
    CHECK(b4 - q(2) <= Rational(1) / Rational(mpz_class(1) << 30));
}

TEST_CASE("partial fractions: simple poles and reconstruction") {
    // 1/(z-1): single simple pole, h = -1
    auto pf = partial_fractions(Poly::one(), {{P({-1, 1}), 1}});
    REQUIRE(pf.terms.size() == 1);
    CHECK(pf.terms[0].h == P({-1}));
    // coefficients of 1/(z-1) = -1/(1-z)
    for (unsigned long n = 0; n < 5; ++n) CHECK(reconstruct_coefficient(pf, n) == q(-1));

    // 1/((z-1)(z-1/2)) = 2/((1-z)(1-2z))
    auto f2 = squarefree_factorize(P({1, -1}) * P({1, -2}));
    auto pf2 = partial_fractions(Poly::one(), f2);
    RatFun r2(Poly::one(), P({1, -1}) * P({1, -2}) * q(1, 2));
    auto coeffs = r2.series_coefficients(8);
    for (unsigned long n = 0; n < 8; ++n) CHECK(reconstruct_coefficient(pf2, n) == coeffs[n]);

    // z/(1-z)^2 with monic denominator (z-1)^2
    auto pf3 = partial_fractions(Poly::variable(), {{P({-1, 1}), 2}});
    RatFun r3(Poly::variable(), P({-1, 1}) * P({-1, 1}));
    auto c3 = r3.series_coefficients(8);
    for (unsigned long n = 0; n < 8; ++n) CHECK(reconstruct_coefficient(pf3, n) == c3[n]);

    CHECK_THROWS(partial_fractions(P({0, 0, 1}), {{P({-1, 1}), 2}}));
}

TEST_CASE("partial fractions: random reconstruction") {
    std::mt19937 rng(12345);
    auto rnd = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    for (int trial = 0; trial < 200; ++trial) {
        // distinct nonzero rational roots with multiplicities, optional quadratic
        std::vector<std::pair<Poly, int>> factors;
        long total = 0;
        std::vector<Rational> used;
        int nlin = rnd(1, 3);
        for (int j = 0; j < nlin && total < 7; ++j) {
            Rational root(rnd(1, 6) * (rnd(0, 1) ? 1 : -1), rnd(1, 3));
            root.canonicalize();
            bool dup = false;
            for (const auto& u : used) dup = dup || u == root;
            if (dup) continue;
            used.push_back(root);
            int mult = rnd(1, 3);
            factors.emplace_back(Poly(std::vector<Rational>{-root, q(1)}), mult);
            total += mult;
        }
        if (rnd(0, 2) == 0 && total <= 5) {
            factors.emplace_back(Poly(std::vector<Rational>{q(rnd(1, 5)), q(0), q(1)}), 1);
            total += 2;
        }
        Poly den = Poly::one();
        for (auto& [f, m] : factors)
            for (int j = 0; j < m; ++j) den = den * f;
        std::vector<Rational> nc(static_cast<std::size_t>(std::max(1L, den.degree())), q(0));
        for (auto& c : nc) c = q(rnd(-9, 9), rnd(1, 4));
        Poly num(std::move(nc));
        if (num.is_zero()) num = Poly::one();
        auto pf = partial_fractions(num, factors);
        RatFun exact(num, den);
        auto coeffs = exact.series_coefficients(11);
        for (unsigned long n = 0; n <= 10; ++n) CHECK(reconstruct_coefficient(pf, n) == coeffs[n]);
    }
}

TEST_CASE("compare_moduli consistent with enclosures on random pairs") {
    std::mt19937 rng(777);
    auto rnd = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    int done = 0;
    while (done < 1000) {
        int d1 = rnd(1, 6), d2 = rnd(1, 6);
        std::vector<Rational> c1(static_cast<std::size_t>(d1) + 1), c2(static_cast<std::size_t>(d2) + 1);
        for (auto& c : c1) c = q(rnd(-5, 5));
        for (auto& c : c2) c = q(rnd(-5, 5));
        Poly p1(std::move(c1)), p2(std::move(c2));
        if (p1.is_zero() || p2.is_zero()) continue;
        if (!p1.is_zero() && p1.shift_down(p1.valuation()).degree() == 0) continue;
        if (!p2.is_zero() && p2.shift_down(p2.valuation()).degree() == 0) continue;
        AlgebraicModulus m1(p1), m2(p2);
        Ordering o = compare_moduli(m1, m2);
        IvQ e1 = m1.refined(40).enclosure(), e2 = m2.refined(40).enclosure();
        if (o == Ordering::LT) CHECK(e1.lo < e2.hi);
        if (o == Ordering::GT) CHECK(e1.hi > e2.lo);
        if (o == Ordering::EQ) {
            CHECK(e1.lo <= e2.hi);
            CHECK(e2.lo <= e1.hi);
        }
        ++done;
    }
}
