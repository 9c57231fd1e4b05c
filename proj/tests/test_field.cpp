#include <catch2/catch_amalgamated.hpp>

#include <nam/field.hpp>

using namespace nam;

TEST_CASE("base-p expansion of rationals") {
    // 5 in Q_3: 5 = 2 + 1*3
    PAdic five = PAdic::from_rational(Qp(3), 5, 1, 8);
    REQUIRE(five.ord() == 0);
    REQUIRE(five.digits()[0] == 2);
    REQUIRE(five.digits()[1] == 1);
    for (int i = 2; i < 8; ++i) REQUIRE(five.digits()[i] == 0);

    // 1/3 in Q_3 is the single digit 1 at position -1
    PAdic third = PAdic::from_rational(Qp(3), 1, 3, 8);
    REQUIRE(third.ord() == -1);
    REQUIRE(third.digits()[0] == 1);
    REQUIRE(third.norm() == Rat(3));

    // 1/2 in Q_3: 2 + 1*3 + 1*9 + ... (periodic)
    PAdic half = PAdic::from_rational(Qp(3), 1, 2, 6);
    REQUIRE(half.ord() == 0);
    REQUIRE(half.digits() == std::vector<int>{2, 1, 1, 1, 1, 1});

    // negative numbers: -1 = (p-1) + (p-1)p + ...
    PAdic neg = PAdic::from_rational(Qp(5), -1, 1, 4);
    REQUIRE(neg.digits() == std::vector<int>{4, 4, 4, 4});
}

TEST_CASE("truncation error bound of the parser") {
    // |x*den - num| <= p^-(ord+N)
    Field f = Qp(7);
    PAdic x = PAdic::from_rational(f, 3, 5, 10);
    Rat err = x.to_rational() * Rat(5) - Rat(3);
    if (err != Rat(0)) {
        // p-adic size: 7-valuation of the error is at least ord + N
        Int n = err.numerator();
        int v = 0;
        while (n % 7 == 0) { n /= 7; ++v; }
        REQUIRE(err.denominator() % 7 != 0);
        REQUIRE(v >= x.ord() + 10);
    }
}

TEST_CASE("ultrametric arithmetic in Q_p") {
    Field f = Qp(3);
    Rng rng(12345);
    for (int it = 0; it < 200; ++it) {
        PAdic a = random_element(f, rng, -4, 4, 14);
        PAdic b = random_element(f, rng, -4, 4, 14);
        // |xy| = |x||y|
        REQUIRE((a * b).ord() == a.ord() + b.ord());
        // |x+y| <= max(|x|,|y|) with equality for distinct norms
        PAdic s = a + b;
        if (!s.is_zero()) {
            REQUIRE(s.ord() >= std::min(a.ord(), b.ord()));
            if (a.ord() != b.ord()) REQUIRE(s.ord() == std::min(a.ord(), b.ord()));
        }
        // rational cross-check of ring ops on exact windows (common window)
        REQUIRE((a - a).is_zero());
    }
}

TEST_CASE("division is inverse of multiplication") {
    for (Field f : {Qp(3), Qp(5), Fp_theta(3)}) {
        Rng rng(99 + f.p + (f.kind == FieldKind::char_p ? 1000 : 0));
        for (int it = 0; it < 100; ++it) {
            PAdic a = random_element(f, rng, -3, 3, 12);
            PAdic b = random_element(f, rng, -3, 3, 12);
            PAdic q = a / b;
            REQUIRE(q.ord() == a.ord() - b.ord());
            // (a/b)*b agrees with a through the valid window
            REQUIRE((q * b).approx_equal(a, a.ord() + 10));
        }
    }
}

TEST_CASE("characteristic-p arithmetic is carry-free") {
    Field f = Fp_theta(3);
    // (1 + theta) + (2 + 2 theta) = 0 digitwise
    PAdic a = PAdic::from_digits(f, 0, {1, 1});
    PAdic b = PAdic::from_digits(f, 0, {2, 2});
    REQUIRE((a + b).is_zero());
    // x + x + x = 0 for p = 3
    PAdic x = PAdic::from_digits(f, -1, {2, 0, 1, 2});
    REQUIRE((x + x + x).is_zero());
    // digitwise product: (1 + theta)^2 = 1 + 2 theta + theta^2
    PAdic c = PAdic::from_digits(f, 0, {1, 1, 0, 0});
    REQUIRE((c * c).digits() == std::vector<int>{1, 2, 1, 0});
}

TEST_CASE("char-p parser rejects denominators divisible by p") {
    REQUIRE_THROWS_AS(PAdic::from_rational(Fp_theta(3), 1, 3, 8), std::invalid_argument);
    // and interprets integers digitwise: 5 = 2 + theta over F_3
    PAdic five = PAdic::from_rational(Fp_theta(3), 5, 1, 8);
    REQUIRE(five.ord() == 0);
    REQUIRE(five.digits()[0] == 2);
    REQUIRE(five.digits()[1] == 1);
}

TEST_CASE("fractional part") {
    Field f = Qp(3);
    // {1/3} = 1/3, {5} = 0, {1/2} = 0 (|1/2| = 1)
    REQUIRE(frac_part(PAdic::from_rational(f, 1, 3)) == Rat(1, 3));
    REQUIRE(frac_part(PAdic::from_rational(f, 5, 1)) == Rat(0));
    REQUIRE(frac_part(PAdic::from_rational(f, 1, 2)) == Rat(0));
    // {14/9} in Q_3: 14/9 = 5/9 + 1, {.} = 5/9
    REQUIRE(frac_part(PAdic::from_rational(f, 14, 9)) == Rat(5, 9));
    // additivity modulo 1 on random pairs
    Rng rng(7);
    for (int it = 0; it < 100; ++it) {
        PAdic a = random_element(f, rng, -4, 2, 14);
        PAdic b = random_element(f, rng, -4, 2, 14);
        Rat s = frac_part(a) + frac_part(b) - frac_part(a + b);
        REQUIRE(s.denominator() == 1);  // integer difference
    }
    // char p
    PAdic y = PAdic::from_digits(Fp_theta(5), -2, {3, 2, 1});
    REQUIRE(frac_part(y) == Rat(2, 5));
}

TEST_CASE("insufficient window raises precision errors") {
    Field f = Qp(3);
    PAdic x = PAdic::from_digits(f, -6, {1, 2});  // known only to p^-4
    REQUIRE_THROWS_AS(frac_part(x), precision_error);
    REQUIRE_THROWS_AS(x.digit_at(-1), precision_error);
}

TEST_CASE("balls are nested or disjoint") {
    Field f = Qp(3);
    Ball unit = unit_ball(f);
    Ball small{PAdic::from_int(f, 1), 2};
    REQUIRE(unit.contains_ball(small));
    Ball other{PAdic::from_int(f, 2), 2};
    REQUIRE(small.disjoint(other));
    REQUIRE(!unit.disjoint(small));
    REQUIRE(small.contains(PAdic::from_rational(f, 10, 1)));  // 10 = 1 + 9
    REQUIRE(!small.contains(PAdic::from_int(f, 2)));
}

TEST_CASE("character phases") {
    Field f = Qp(3);
    PAdic xi = PAdic::from_rational(f, 1, 3);
    PAdic x = PAdic::from_int(f, 1);
    REQUIRE(character_eval(xi, x) == Phase(Rat(1, 3)));
    REQUIRE(character_eval(xi, PAdic::from_int(f, 3)).is_trivial());
    // characters are multiplicative in the argument: phase(xi,(x+y)) =
    // phase(xi,x)+phase(xi,y) mod 1
    Rng rng(21);
    for (int it = 0; it < 100; ++it) {
        PAdic a = random_element(f, rng, -3, 3, 14);
        PAdic b = random_element(f, rng, -3, 3, 14);
        Phase lhs = character_eval(xi, a + b);
        Phase rhs = Phase(character_eval(xi, a).v + character_eval(xi, b).v);
        REQUIRE(lhs == rhs);
    }
}

TEST_CASE("textual round trip") {
    PAdic x = PAdic::from_rational(Qp(3), 5, 1, 4);
    REQUIRE(x.to_string() == "p^0 * (2 1 0 0)_3");
}
