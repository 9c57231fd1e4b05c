#include <catch2/catch_amalgamated.hpp>

#include <nam/locally_constant.hpp>

using namespace nam;

namespace {

// independent oracle: integral of chi(z x) over a ball by exact coset
// enumeration at a refinement where the character is constant per coset
CycSum coset_oracle(const PAdic& z, const Ball& b) {
    const Field& f = b.field();
    int depth = z.is_zero() ? 0 : std::max(0, -z.ord() - b.m);
    Rat mass = haar_ball(f, b.m + depth);
    CycSum acc(f.p);
    Int count = int_pow(f.p, depth);
    int prec = kDefaultPrec + depth + std::abs(b.m) + 2;
    for (Int k = 0; k < count; ++k) {
        // coset representative: center + k * p^m
        PAdic rep = b.center + PAdic::from_rational(f, k, Int(1), prec).shifted(b.m);
        acc = acc + CycSum::root(f.p, character_eval(z, rep), mass);
    }
    return acc;
}

}  // namespace

TEST_CASE("cyclotomic sums cancel exactly") {
    for (int p : {2, 3, 5}) {
        // full orbit of p-th roots of unity sums to zero
        CycSum s(p);
        for (int k = 0; k < p; ++k) s = s + CycSum::root(p, Phase(Rat(k, p)));
        REQUIRE(s.is_zero());
        // and at level 2
        CycSum t(p);
        for (int k = 0; k < p * p; ++k) t = t + CycSum::root(p, Phase(Rat(k, p * p)));
        REQUIRE(t.is_zero());
        // conjugation/realness
        CycSum r = CycSum::root(p, Phase(Rat(1, p))) + CycSum::root(p, Phase(Rat(p - 1, p)));
        REQUIRE(r.is_real());
    }
}

TEST_CASE("ball-character orthogonality, exact") {
    for (int p : {2, 3, 5}) {
        Field f = Qp(p);
        Rng rng(1000 + p);
        for (int it = 0; it < 60; ++it) {
            int m = static_cast<int>(rng.range(-2, 2));
            PAdic z = rng.below(8) == 0 ? PAdic::zero(f) : random_element(f, rng, -3, 3, 10);
            Ball b{PAdic::zero(f), m};
            CycSum got = char_ball_integral<CycSum>(z, b);
            Rat val;
            if (z.is_zero() || -z.ord() <= m) {
                REQUIRE(got.rational_value(val));
                REQUIRE(val == rat_pow(p, -m));
            } else {
                REQUIRE(got.is_zero());
            }
            // exact enumeration oracle agrees
            REQUIRE((got - coset_oracle(z, b)).is_zero());
        }
    }
}

TEST_CASE("ball-character integral with shifted center matches oracle") {
    Field f = Qp(3);
    Rng rng(77);
    for (int it = 0; it < 40; ++it) {
        int m = static_cast<int>(rng.range(-1, 2));
        PAdic c = random_element(f, rng, -2, 2, 10);
        PAdic z = random_element(f, rng, -3, 2, 10);
        Ball b{c, m};
        CycSum got = char_ball_integral<CycSum>(z, b);
        REQUIRE((got - coset_oracle(z, b)).is_zero());
    }
}

TEST_CASE("transform of a centered ball indicator") {
    // F(1_{B(0,p^-m)}) = p^-m 1_{B(0,p^m)}
    for (int p : {2, 3}) {
        Field f = Qp(p);
        for (int m : {-1, 0, 1, 2}) {
            LcFn<CycSum> ind = LcFn<CycSum>::zero_fn(f);
            ind.add_piece(Ball{PAdic::zero(f), m}, CycSum::scalar(p, Rat(1)));
            LcFn<CycSum> ft = fourier_lc(ind);
            LcFn<CycSum> expect = LcFn<CycSum>::zero_fn(f);
            expect.add_piece(Ball{PAdic::zero(f), -m}, CycSum::scalar(p, rat_pow(p, -m)));
            REQUIRE(lc_equal(ft, expect));
        }
    }
}

TEST_CASE("double transform is reflection, exact") {
    for (int p : {2, 3}) {
        Field f = Qp(p);
        Rng rng(31 + p);
        for (int it = 0; it < 25; ++it) {
            LcFn<CycSum> fn = LcFn<CycSum>::zero_fn(f);
            int npieces = 1 + static_cast<int>(rng.below(3));
            for (int k = 0; k < npieces; ++k) {
                int m = static_cast<int>(rng.range(1, 2));
                PAdic c = rng.below(4) == 0 ? PAdic::zero(f)
                                            : random_element(f, rng, -1, 0, 8);
                Ball b{c, m};
                bool clash = false;
                for (auto& [ob, ov] : fn.pieces)
                    if (!ob.disjoint(b)) clash = true;
                if (clash) continue;
                Rat v(static_cast<long>(rng.range(-3, 3)), 1 + static_cast<long>(rng.below(3)));
                fn.add_piece(b, CycSum::scalar(p, v));
            }
            if (fn.pieces.empty()) continue;
            LcFn<CycSum> ff = fourier_lc(fourier_lc(fn));
            REQUIRE(lc_equal(ff, fn.reflected()));
        }
    }
}

TEST_CASE("haar: unit ball mass one and scaling") {
    Field f = Qp(3);
    REQUIRE(haar_ball(f, 0) == Rat(1));
    REQUIRE(haar_ball(f, 2) == Rat(1, 9));
    // v(lambda B) = |lambda| v(B): scaling a ball of exponent m by p^-k
    PAdic lam = PAdic::from_rational(f, 1, 9);
    Ball b{PAdic::zero(f), 1};
    // lambda * B(0,p^-1) = B(0, p^(-1) * |lambda|) = B(0, p^1)
    int m_scaled = b.m + lam.ord();
    REQUIRE(haar_ball(f, m_scaled) == lam.norm() * haar_ball(f, b.m));
}

TEST_CASE("integration of piecewise functions over regions") {
    Field f = Qp(3);
    LcFn<CycSum> fn = LcFn<CycSum>::zero_fn(f);
    fn.default_value = CycSum::scalar(3, Rat(2));
    fn.add_piece(Ball{PAdic::zero(f), 1}, CycSum::scalar(3, Rat(5)));
    fn.add_piece(Ball{PAdic::from_int(f, 1), 1}, CycSum::scalar(3, Rat(-1)));
    // over B(0,1): 5*(1/3) + (-1)*(1/3) + 2*(1/3)
    CycSum got = integrate_lc(fn, unit_ball(f));
    Rat val;
    REQUIRE(got.rational_value(val));
    REQUIRE(val == Rat(5, 3) - Rat(1, 3) + Rat(2, 3));
    // whole-field integral of a non-compact function diverges
    REQUIRE_THROWS_AS(integrate_lc(fn), divergence_error);
}

TEST_CASE("characteristic-p characters integrate the same way") {
    Field f = Fp_theta(3);
    Rng rng(5);
    for (int it = 0; it < 30; ++it) {
        int m = static_cast<int>(rng.range(-1, 1));
        PAdic z = random_element(f, rng, -2, 2, 8);
        Ball b{PAdic::zero(f), m};
        CycSum got = char_ball_integral<CycSum>(z, b);
        REQUIRE((got - coset_oracle(z, b)).is_zero());
    }
}
