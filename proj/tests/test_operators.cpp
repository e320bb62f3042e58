#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "prb/rec_operator.hpp"

using namespace prb;

namespace {

Poly P(std::initializer_list<long> coeffs) {
    std::vector<Rational> v;
    for (long c : coeffs) v.emplace_back(c);
    return Poly(std::move(v));
}

Rational q(long n, long d = 1) { return rational_of(n, d); }

// 2 S^3 - (n+2) S - 1
RecOperator example_1a() { return RecOperator({P({-1}), P({-2, -1}), Poly(), P({2})}); }
// S^2 - S - (n+1)
RecOperator involutions() { return RecOperator({P({-1, -1}), P({-1}), P({1})}); }

GaussianRational g(long re, long im = 0) { return {q(re), q(im)}; }

}  // namespace

TEST_CASE("smallest_nonneg_integer_root") {
    CHECK(smallest_nonneg_integer_root(P({-3, 1})) == 3);
    CHECK(smallest_nonneg_integer_root(P({3, 1})) == std::nullopt);
    CHECK(smallest_nonneg_integer_root(P({0, 1})) == 0);
    CHECK(smallest_nonneg_integer_root(P({6, -5, 1})) == 2);  // (n-2)(n-3)
    CHECK(smallest_nonneg_integer_root(P({1, 2, 1})) == std::nullopt);
    // non-integer rational root with large coefficients
    Poly big(std::vector<Rational>{q(13591409), q(545140134)});
    CHECK(smallest_nonneg_integer_root(big) == std::nullopt);
    CHECK(smallest_nonneg_integer_root(P({2})) == std::nullopt);
}

TEST_CASE("check_shape") {
    RecShape s1 = check_shape(example_1a());
    CHECK(s1.order == 3);
    CHECK(s1.valuation == 0);
    CHECK(s1.nonsingular);
    CHECK(s1.reversible);

    RecShape s2 = check_shape(RecOperator({P({-1}), P({-3, 1})}));  // (n-3)S - 1
    CHECK_FALSE(s2.nonsingular);
    CHECK(s2.singular_at == 3);

    RecShape s3 = check_shape(RecOperator({Poly(), P({-1}), P({1})}));  // S^2 - S
    CHECK(s3.valuation == 1);
}

TEST_CASE("shift_valuation") {
    CHECK(shift_valuation(RecOperator({Poly(), P({-1}), P({1})})) == RecOperator({P({-1}), P({1})}));
    CHECK(shift_valuation(example_1a()) == example_1a());
    // n S^3 - n S^2 -> n S - n
    RecOperator r({Poly(), Poly(), P({0, -1}), P({0, 1})});
    CHECK(shift_valuation(r) == RecOperator({P({0, -1}), P({0, 1})}));
}

TEST_CASE("newton polygon") {
    // S^3 + S^2 + n S + (n+1): rightmost edge slope -1/2 through (1,1) and (3,0)
    RecOperator r({P({1, 1}), P({0, 1}), P({1}), P({1})});
    NewtonPolygon np = newton_polygon(r);
    REQUIRE(np.edges.size() == 2);
    CHECK(np.edges[0].slope == q(0));
    CHECK(np.edges[1].slope == q(-1, 2));
    CHECK(np.edges[1].t == 1);
    CHECK(np.edges[1].d_t == 1);
    long total_deg = 0;
    for (const auto& e : np.edges) total_deg += e.char_poly.degree();
    CHECK(total_deg == r.order());

    NewtonPolygon np2 = newton_polygon(RecOperator::constants({q(-2), q(1)}));  // S - 2
    REQUIRE(np2.edges.size() == 1);
    CHECK(np2.edges[0].slope == q(0));
    CHECK(np2.edges[0].char_poly == P({-2, 1}));

    NewtonPolygon np3 = newton_polygon(RecOperator({P({-1, -1}), P({1})}));  // S - (n+1)
    REQUIRE(np3.edges.size() == 1);
    CHECK(np3.edges[0].slope == q(-1));
    CHECK(np3.edges[0].char_poly == P({-1, 1}));

    CHECK_THROWS(newton_polygon(RecOperator({P({1})})));
}

TEST_CASE("points lie on or below every newton edge") {
    std::mt19937 rng(42);
    auto rnd = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Poly> cs(static_cast<std::size_t>(rnd(2, 4)));
        for (auto& c : cs) {
            std::vector<Rational> v(static_cast<std::size_t>(rnd(1, 4)));
            for (auto& x : v) x = q(rnd(-3, 3));
            c = Poly(std::move(v));
        }
        RecOperator r(std::move(cs));
        if (r.is_zero() || r.order() < 1) continue;
        int nonzero = 0;
        for (long k = 0; k <= r.order(); ++k) nonzero += !r.coeff(static_cast<std::size_t>(k)).is_zero();
        if (nonzero < 2) continue;
        NewtonPolygon np = newton_polygon(r);
        long total_deg = 0;
        for (std::size_t e = 0; e < np.edges.size(); ++e) {
            // upper hull: slopes strictly decrease left to right
            if (e + 1 < np.edges.size()) CHECK(np.edges[e].slope > np.edges[e + 1].slope);
            total_deg += np.edges[e].char_poly.degree();
            // every point on or below the edge line
            const auto& ed = np.edges[e];
            for (long k = 0; k <= r.order(); ++k) {
                const Poly& b = r.coeff(static_cast<std::size_t>(k));
                if (b.is_zero()) continue;
                // y <= d_t + slope (k - t)
                CHECK(Rational(b.degree()) <= Rational(ed.d_t) + ed.slope * Rational(k - ed.t));
            }
        }
        CHECK(total_deg == r.order() - r.valuation());
    }
}

TEST_CASE("noncommutative product obeys S p(n) = p(n+1) S") {
    RecOperator s({Poly(), P({1})});
    RecOperator p({P({5, 3, 1})});  // n^2 + 3n + 5
    RecOperator lhs = s * p;
    RecOperator rhs = RecOperator({P({5, 3, 1}).taylor_shift(q(1))}) * s;
    CHECK(lhs == rhs);
    // associativity on random operators
    RecOperator a({P({1, 2}), P({0, 1})});
    RecOperator b({P({-1}), P({3, 1})});
    RecOperator c({P({2}), P({1, 1})});
    CHECK((a * b) * c == a * (b * c));
}

TEST_CASE("unroll") {
    auto inv = unroll(involutions(), {g(1), g(1)}, 6);
    std::vector<GaussianRational> want{g(1), g(1), g(2), g(4), g(10), g(26)};
    CHECK(inv == want);

    auto pow2 = unroll(RecOperator::constants({q(-2), q(1)}), {g(1)}, 4);
    CHECK(pow2 == std::vector<GaussianRational>{g(1), g(2), g(4), g(8)});

    auto gi = unroll(RecOperator::constants({q(-1), q(1)}), {g(0, 1)}, 3);
    CHECK(gi == std::vector<GaussianRational>{g(0, 1), g(0, 1), g(0, 1)});

    CHECK_THROWS(unroll(RecOperator({P({-1}), P({-1, 1})}), {g(1)}, 5));  // (n-1)S - 1
}

TEST_CASE("unroll_moduli_bounds dominates exact solutions") {
    auto b = unroll_moduli_bounds(example_1a(), {q(1, 5), q(1, 5), q(1, 5)}, 40);
    auto u = unroll(example_1a(), {g(1) / q(5), g(1) / q(7), g(1) / q(11)}, 40);
    for (std::size_t n = 0; n < 40; ++n) CHECK(u[n].norm() <= b[n] * b[n]);
}

TEST_CASE("symmetric product: named cases") {
    RecOperator s2 = RecOperator::constants({q(-2), q(1)});
    RecOperator s3 = RecOperator::constants({q(-3), q(1)});
    RecOperator prod = symmetric_product(s2, s3);
    CHECK(prod == RecOperator::constants({q(-6), q(1)}));

    // (S - 2) x (S - (n+1)) annihilates 2^n n!
    RecOperator fact({P({-1, -1}), P({1})});
    RecOperator prod2 = symmetric_product(s2, fact);
    CHECK(prod2 == RecOperator({P({-2, -2}), P({1})}));
}

TEST_CASE("symmetric product: random product sequences are annihilated") {
    std::mt19937 rng(2024);
    auto rnd = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    int done = 0;
    while (done < 100) {
        auto random_op = [&](int max_order) {
            std::vector<Poly> cs(static_cast<std::size_t>(rnd(1, max_order)) + 1);
            for (auto& c : cs) {
                std::vector<Rational> v(static_cast<std::size_t>(rnd(1, 3)));
                for (auto& x : v) x = q(rnd(-4, 4));
                c = Poly(std::move(v));
            }
            return RecOperator(std::move(cs));
        };
        RecOperator r1 = random_op(2), r2 = random_op(2);
        if (r1.is_zero() || r2.is_zero() || r1.order() < 1 || r2.order() < 1) continue;
        if (!check_shape(r1).nonsingular || !check_shape(r2).nonsingular) continue;
        if (r1.valuation() > 0 || r2.valuation() > 0) continue;
        RecOperator prod = symmetric_product(r1, r2);
        std::vector<GaussianRational> i1, i2;
        for (long k = 0; k < r1.order(); ++k) i1.push_back(g(rnd(-3, 3), rnd(-2, 2)));
        for (long k = 0; k < r2.order(); ++k) i2.push_back(g(rnd(-3, 3), rnd(-2, 2)));
        auto x = unroll(r1, i1, 70);
        auto y = unroll(r2, i2, 70);
        bool ok = true;
        for (long n = 20; n + prod.order() <= 60; ++n) {
            GaussianRational acc;
            for (long k = 0; k <= prod.order(); ++k)
                acc = acc + x[static_cast<std::size_t>(n + k)] * y[static_cast<std::size_t>(n + k)] * prod.coeff(static_cast<std::size_t>(k)).eval(q(n));
            ok = ok && acc.is_zero();
        }
        CHECK(ok);
        ++done;
    }
}

TEST_CASE("symmetric product with S - 1 reproduces the other factor's kernel") {
    std::mt19937 rng(99);
    auto rnd = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    RecOperator one = RecOperator::constants({q(-1), q(1)});
    int done = 0;
    while (done < 20) {
        std::vector<Poly> cs(static_cast<std::size_t>(rnd(1, 2)) + 1);
        for (auto& c : cs) {
            std::vector<Rational> v(static_cast<std::size_t>(rnd(1, 3)));
            for (auto& x : v) x = q(rnd(-4, 4));
            c = Poly(std::move(v));
        }
        RecOperator r(std::move(cs));
        if (r.is_zero() || r.order() < 1 || !check_shape(r).nonsingular || r.valuation() > 0) continue;
        RecOperator prod = symmetric_product(one, r);
        std::vector<GaussianRational> init;
        for (long k = 0; k < r.order(); ++k) init.push_back(g(rnd(-3, 3)));
        auto u = unroll(r, init, 55);
        bool ok = true;
        for (long n = 10; n + prod.order() <= 50; ++n) {
            GaussianRational acc;
            for (long k = 0; k <= prod.order(); ++k)
                acc = acc + u[static_cast<std::size_t>(n + k)] * prod.coeff(static_cast<std::size_t>(k)).eval(q(n));
            ok = ok && acc.is_zero();
        }
        CHECK(ok);
        ++done;
    }
}
