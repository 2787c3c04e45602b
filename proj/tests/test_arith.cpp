#include <random>

#include "doctest.h"
#include "fglab/errors.hpp"
#include "fglab/padic.hpp"
#include "fglab/rational.hpp"

using namespace fglab;

TEST_CASE("vp basics") {
    CHECK(vp(Rat(12), 2) == 2);           // 12 = 4*3
    CHECK(vp(Rat(0), 3) == kValInfinity);  // convention
    CHECK(vp(Rat(3, 8), 2) == -3);         // denominator valuation
    CHECK(vp(Rat(-18), 3) == 2);
    CHECK_THROWS_AS(vp(Rat(1), 4), input_error);
    CHECK_THROWS_AS(vp(Rat(1), 1), input_error);
}

TEST_CASE("p-integrality and units") {
    CHECK_FALSE(is_p_integral(Rat(3, 8), 2));
    CHECK_FALSE(is_p_unit(Rat(3, 8), 2));
    CHECK(is_p_unit(Rat(3, 5), 2));
    CHECK(is_p_integral(Rat(6), 2));
    CHECK_FALSE(is_p_unit(Rat(6), 2));
}

TEST_CASE("valuation arithmetic properties on random rationals") {
    std::mt19937_64 rng(20240817);
    std::uniform_int_distribution<long> num(-200, 200), den(1, 200);
    const long primes[] = {2, 3, 5};
    for (int trial = 0; trial < 400; ++trial) {
        Rat x(num(rng), den(rng)), y(num(rng), den(rng));
        for (long p : primes) {
            if (!x.is_zero() && !y.is_zero()) {
                CHECK(vp(x * y, p) == vp(x, p) + vp(y, p));
                long vx = vp(x, p), vy = vp(y, p);
                Rat s = x + y;
                long vs = vp(s, p);
                CHECK(vs >= std::min(vx, vy));
                if (vx != vy) CHECK(vs == std::min(vx, vy));
            }
            if (is_p_integral(x, p)) CHECK(is_p_integral(x * Rat(p), p));
        }
    }
}

TEST_CASE("rational string round-trip") {
    for (const char* s : {"0", "1", "-1", "3/8", "-22/7", "123456789123456789"}) {
        Rat r = Rat::parse(s);
        CHECK(r.str() == s);
        CHECK(Rat::parse(r.str()) == r);
    }
    // canonicalization on parse
    CHECK(Rat::parse("4/6").str() == "2/3");
    CHECK(Rat::parse("-4/6").str() == "-2/3");
}

TEST_CASE("ball intersection: nesting, disjointness, singletons") {
    // {v2(x) >= 0} meet {v2(x-2) >= 1} = the smaller ball
    auto r = ball_intersect({{Rat(0), 0}, {Rat(2), 1}}, 2);
    REQUIRE(r.has_value());
    CHECK(r->center == Rat(2));
    CHECK(r->radius_exponent == 1);

    // disjoint residues
    CHECK_FALSE(ball_intersect({{Rat(0), 1}, {Rat(1), 1}}, 2).has_value());

    // single ball is itself
    auto s = ball_intersect({{Rat(5), 3}}, 2);
    REQUIRE(s.has_value());
    CHECK(s->center == Rat(5));
    CHECK(s->radius_exponent == 3);
}

TEST_CASE("ball intersection is commutative and associative up to set equality") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> cd(-8, 8), rd(-2, 3);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<PadicBall> balls;
        for (int i = 0; i < 3; ++i) balls.push_back({Rat(cd(rng), 1 + std::abs(cd(rng))), rd(rng)});
        auto fwd = ball_intersect(balls, 2);
        std::vector<PadicBall> rev(balls.rbegin(), balls.rend());
        auto bwd = ball_intersect(rev, 2);
        CHECK(fwd.has_value() == bwd.has_value());
        if (fwd) {
            // same set: mutual containment of centers and equal radii
            CHECK(fwd->radius_exponent == bwd->radius_exponent);
            CHECK(fwd->contains(bwd->center, 2));
            CHECK(bwd->contains(fwd->center, 2));
        }
    }
}

TEST_CASE("canonical_pick truncates the p-adic expansion") {
    CHECK(canonical_pick({Rat(5), 3}, 2) == Rat(5));     // 5 = 1 + 4, digits below 2^3
    CHECK(canonical_pick({Rat(0), 1}, 2) == Rat(0));     // 0 in ball
    CHECK(canonical_pick({Rat(4), 1}, 2) == Rat(0));     // 0 in ball via center valuation
    CHECK(canonical_pick({Rat(3, 2), 0}, 2) == Rat(1, 2));  // digits strictly below 2^0
    CHECK(canonical_pick({Rat(-1), 1}, 2) == Rat(1));    // -1 = ...111, one digit kept
    CHECK(canonical_pick({Rat(7, 3), 2}, 3) == Rat(7, 3));  // 7/3 = 3^{-1} + 2, all digits below 3^2
    CHECK(canonical_pick({Rat(7, 3), 0}, 3) == Rat(1, 3));  // only the 3^{-1} digit survives
}

TEST_CASE("canonical_pick lands in the ball") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<long> cd(-50, 50), dd(1, 50), rd(-3, 4);
    for (long p : {2L, 3L, 5L}) {
        for (int trial = 0; trial < 300; ++trial) {
            PadicBall b{Rat(cd(rng), dd(rng)), rd(rng)};
            Rat y = canonical_pick(b, p);
            CHECK(b.contains(y, p));
            // digits strictly below the radius exponent: y itself truncates to y
            CHECK(canonical_pick({y, b.radius_exponent}, p) == y);
        }
    }
}

TEST_CASE("parse rejects malformed literals, canonicalizes signs") {
    CHECK_THROWS_AS(Rat::parse(""), input_error);
    CHECK_THROWS_AS(Rat::parse("1/0"), input_error);
    CHECK(Rat::parse("1/-2") == Rat(-1, 2));  // denominator sign moves to the numerator
    CHECK(Rat::parse("-4/-6") == Rat(2, 3));
}
