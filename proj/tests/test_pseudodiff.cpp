#include <catch2/catch_amalgamated.hpp>

#include "nam/pseudodiff.hpp"
#include "nam/vladimirov.hpp"

using namespace nam;
using C = std::complex<double>;

namespace {

PAdic unit_shifted(const Field& f, int j) { return PAdic::from_rational(f, 1, 1).shifted(j); }

LcFn<C> indicator(const Field& f, const Ball& b, C v = C{1, 0}) {
    LcFn<C> fn = LcFn<C>::zero_fn(f);
    fn.add_piece(b, v);
    return fn;
}

CylinderSet ball_cell(const Field& f, const PAdic& c, int m) {
    CylinderSet s;
    CoordConstraint cc;
    cc.kind = CoordConstraint::ball;
    cc.b = Ball{c, m};
    s.cs.push_back(cc);
    return s;
}

const std::vector<C> orders = {{0.5, 0}, {1, 0}, {1.5, 0}, {1, 1}};

}  // namespace

TEST_CASE("pointwise pseudo-differentiation closed forms") {
    SECTION("indicator of the unit ball, evaluated inside") {
        for (int p : {2, 3, 5}) {
            Field f = Qp(p);
            LcFn<C> fn = indicator(f, Ball{PAdic::zero(f), 0});
            for (C b : orders) {
                C want = (1.0 - 1.0 / p) * detail::cpow_p(p, -1, b) /
                         (1.0 - detail::cpow_p(p, -1, b));
                for (PAdic x : {PAdic::zero(f), unit_shifted(f, 0), unit_shifted(f, 2)}) {
                    PDResult r = pd(b, fn, x);
                    REQUIRE(std::abs(r.value - want) < 1e-9);
                    REQUIRE(r.tail_bound < 1e-9);
                }
            }
        }
    }
    SECTION("evaluated outside the support: -|x|^{-1-b} times the integral") {
        for (int p : {2, 3, 5}) {
            Field f = Qp(p);
            LcFn<C> fn = indicator(f, Ball{PAdic::zero(f), 0});
            for (C b : orders) {
                for (int l = 1; l <= 3; ++l) {
                    PAdic x = unit_shifted(f, -l);  // |x| = p^l
                    C want = -detail::cpow_p(p, -l, 1.0 + b);
                    REQUIRE(std::abs(pd(b, fn, x).value - want) < 1e-9);
                }
            }
        }
    }
    SECTION("scaling and additivity") {
        Field f = Qp(3);
        LcFn<C> f1 = indicator(f, Ball{PAdic::zero(f), 0});
        LcFn<C> f2 = indicator(f, Ball{unit_shifted(f, 0), 1});
        // f1 + f2 built directly on the common refinement
        LcFn<C> h = LcFn<C>::zero_fn(f);
        h.add_piece(Ball{PAdic::zero(f), 1}, C{1, 0});
        h.add_piece(Ball{unit_shifted(f, 0), 1}, C{2, 0});
        h.add_piece(Ball{PAdic::from_rational(f, 2, 1), 1}, C{1, 0});
        LcFn<C> sf = LcFn<C>::zero_fn(f);
        sf.add_piece(Ball{PAdic::zero(f), 0}, C{3.5, 0});
        Rng rng(31, 1);
        for (C b : orders) {
            for (int t = 0; t < 8; ++t) {
                PAdic x = random_element(f, rng, -2, 3, 12);
                C s = pd(b, h, x).value;
                C s12 = pd(b, f1, x).value + pd(b, f2, x).value;
                REQUIRE(std::abs(s - s12) < 1e-9);
                REQUIRE(std::abs(pd(b, sf, x).value - 3.5 * pd(b, f1, x).value) < 1e-9);
            }
        }
    }
    SECTION("globally constant functions differentiate to zero for any order") {
        Field f = Qp(3);
        LcFn<C> fn = LcFn<C>::zero_fn(f);
        fn.add_piece(Ball{PAdic::zero(f), -2}, C{2.5, 0});
        fn.default_value = C{2.5, 0};
        for (C b : {C{0.7, 0}, C{-0.5, 0}}) {
            REQUIRE(std::abs(pd(b, fn, PAdic::zero(f)).value) < 1e-15);
        }
    }
    SECTION("nonpositive order with a non-vanishing far difference diverges") {
        Field f = Qp(3);
        LcFn<C> fn = indicator(f, Ball{PAdic::zero(f), 0});
        REQUIRE_THROWS_AS(pd(C{-0.5, 0}, fn, PAdic::zero(f)), divergence_error);
        REQUIRE_THROWS_AS(pd(C{0, 0}, fn, PAdic::zero(f)), divergence_error);
    }
    SECTION("inner shells below the constancy radius are skipped") {
        Field f = Qp(3);
        LcFn<C> fn = indicator(f, Ball{PAdic::zero(f), 0});
        PDResult r = pd(C{1, 0}, fn, PAdic::zero(f));
        REQUIRE(r.l_max <= fn.constancy_exponent());
    }
}

TEST_CASE("pseudo-differentiation restricted to the unit ball") {
    Field f = Qp(3);
    SECTION("inner indicator, sampled inside: only the outermost shell remains") {
        LcFn<C> fn = indicator(f, Ball{PAdic::zero(f), 1});
        // y ranges over B(0,1) only; for x in B(0, 1/3) the integrand is
        // (1 - 0) on the shell |x-y| = 1 and vanishes closer in
        for (C b : {C{0.5, 0}, C{1, 0}, C{-0.5, 0}}) {  // bounded sum: any order
            PDResult r = pd(b, fn, PAdic::zero(f), true);
            REQUIRE(std::abs(r.value - C{1.0 - 1.0 / 3, 0}) < 1e-12);
        }
    }
    SECTION("outside the unit ball the distance is constant") {
        LcFn<C> fn = indicator(f, Ball{PAdic::zero(f), 1}, C{2, 0});
        for (C b : orders) {
            for (int l = 1; l <= 3; ++l) {
                PAdic x = unit_shifted(f, -l);
                // integral of f over B(0,1) is 2/3
                C want = -(2.0 / 3) * detail::cpow_p(3, -l, 1.0 + b);
                REQUIRE(std::abs(pd(b, fn, x, true).value - want) < 1e-12);
            }
        }
    }
}

TEST_CASE("pseudo-differentiation of measures") {
    Field f = Qp(3);
    ProductMeasure mu;
    mu.components.push_back(shell_measure_thm320(f, 2, Rat(3), -6));
    std::vector<PAdic> z = {unit_shifted(f, 0)};
    CylinderSet cell = ball_cell(f, PAdic::zero(f), 1);
    SECTION("zero direction gives zero") {
        std::vector<PAdic> z0 = {PAdic::zero(f)};
        PDResult r = measure_pd(C{1, 0}, mu, z0, cell);
        REQUIRE(std::abs(r.value) == 0.0);
    }
    SECTION("one-dimensional double-sum oracle") {
        for (C b : {C{0.5, 0}, C{1, 0}}) {
            PDResult r = measure_pd(b, mu, z, cell, 1e-12);
            Rat g0 = measure_mass(mu, cell);
            // brute force: refine the near t-shells to depth 6, then walk the
            // far shells one representative each (the mass is radial out
            // there) until the geometric weights are negligible
            C oracle{0, 0};
            int D = 6;
            for (int l = -4; l <= 6; ++l) {
                C shell{0, 0};
                long long count = 1;
                for (int i = 1; i < D; ++i) count *= 3;
                for (long long u = 0; u < count; ++u)
                    for (int lead = 1; lead < 3; ++lead) {
                        PAdic t = PAdic::from_rational(f, Int(lead) + Int(3) * Int(u), Int(1),
                                                       D + 2)
                                      .shifted(l);
                        Rat gt = shifted_cylinder_mass(mu, cell, z, t);
                        shell += to_double(g0 - gt) * std::pow(3.0, -double(l + D));
                    }
                oracle += shell * detail::cpow_p(3, l, 1.0 + b);
            }
            for (int l = -5; l >= -90; --l) {
                PAdic t = unit_shifted(f, l);
                Rat gt = shifted_cylinder_mass(mu, cell, z, t);
                oracle += to_double(g0 - gt) * (2.0 / 3) * detail::cpow_p(3, l, b);
            }
            REQUIRE(std::abs(r.value - oracle) < 1e-9);
        }
    }
    SECTION("finite additivity over a cell split") {
        CylinderSet parent = ball_cell(f, PAdic::zero(f), 1);
        C total{0, 0};
        for (int d = 0; d < 3; ++d) {
            PAdic c = PAdic::from_rational(f, d, 1).shifted(1);
            total += measure_pd(C{1, 0}, mu, z, ball_cell(f, c, 2)).value;
        }
        C whole = measure_pd(C{1, 0}, mu, z, parent).value;
        REQUIRE(std::abs(whole - total) < 1e-12);
    }
    SECTION("real order and symmetric data give a real result") {
        PDResult r = measure_pd(C{1, 0}, mu, z, cell);
        REQUIRE(std::abs(r.value.imag()) < 1e-13);
    }
    SECTION("cell-signed measure from the negative of the pseudo-derivative") {
        std::vector<CylinderSet> cells;
        for (int d = 0; d < 3; ++d)
            cells.push_back(ball_cell(f, PAdic::from_rational(f, d, 1).shifted(1), 2));
        auto nu = tilde_D_measure(C{1, 0}, mu, z, cells);
        REQUIRE(nu.values.size() == 3);
        C sum{0, 0};
        for (const C& v : nu.values) sum += v;
        C parent = -measure_pd(C{1, 0}, mu, z, ball_cell(f, PAdic::zero(f), 1)).value;
        REQUIRE(std::abs(sum - parent) < 1e-12);
    }
}

TEST_CASE("logarithmic pseudo-derivative") {
    Field f = Qp(3);
    ProductMeasure mu;
    mu.components.push_back(shell_measure_thm320(f, 2, Rat(3), -6));
    std::vector<PAdic> a = {unit_shifted(f, 0)};
    CylinderSet cell = ball_cell(f, PAdic::zero(f), 1);
    SECTION("zero shift") {
        std::vector<PAdic> a0 = {PAdic::zero(f)};
        REQUIRE(std::abs(log_pseudo_derivative(mu, a0, cell)) == 0.0);
    }
    SECTION("tolerance refinement is stable") {
        C v1 = log_pseudo_derivative(mu, a, cell, 1e-8);
        C v2 = log_pseudo_derivative(mu, a, cell, 1e-12);
        REQUIRE(std::abs(v1 - v2) < 1e-6);
    }
    SECTION("zero-mass cells are rejected") {
        ProductMeasure nu;
        nu.components.push_back(
            custom_measure(f, 0, {Rat(1), Rat(0)}, PAdic::zero(f)));
        CylinderSet far = ball_cell(f, unit_shifted(f, -4), -3);
        REQUIRE_THROWS_AS(log_pseudo_derivative(nu, a, far), std::domain_error);
    }
}

TEST_CASE("vladimirov operator") {
    Field f = Qp(3);
    LcFn<C> psi = LcFn<C>::zero_fn(f);
    psi.add_piece(Ball{PAdic::zero(f), 1}, C{1, 0});
    psi.add_piece(Ball{unit_shifted(f, 0), 1}, C{-0.5, 0.25});
    SECTION("normalizing constant") {
        for (int p : {2, 3, 5}) {
            C c1 = vladimirov_const(p, C{1, 0});
            REQUIRE(std::abs(c1 - C{double(p) * p / (p + 1), 0}) < 1e-12);
        }
    }
    SECTION("order zero is the identity") {
        Rng rng(32, 1);
        for (int t = 0; t < 10; ++t) {
            PAdic x = random_element(f, rng, -2, 3, 12);
            REQUIRE(vladimirov(C{0, 0}, psi, x) == psi.eval(x));
        }
    }
    SECTION("compositions add the orders") {
        std::vector<std::pair<C, C>> combos = {{C{0.5, 0}, C{0.5, 0}}, {C{1, 0}, C{1, 0}}};
        Rng rng(32, 2);
        for (auto& [b1, b2] : combos) {
            RadialTailFn g = vladimirov_fn(b1, psi);
            for (int t = 0; t < 6; ++t) {
                PAdic x = random_element(f, rng, -1, 3, 12);
                C lhs = vladimirov_apply(b2, g, x);
                C rhs = vladimirov(b1 + b2, psi, x);
                REQUIRE(std::abs(lhs - rhs) < 1e-6);
            }
        }
    }
    SECTION("differentiating the antiderivative returns the function") {
        RadialTailFn g = vladimirov_fn(C{-1, 0}, psi);
        Rng rng(32, 3);
        for (int t = 0; t < 6; ++t) {
            PAdic x = random_element(f, rng, -1, 3, 12);
            C lhs = vladimirov_apply(C{1, 0}, g, x);
            REQUIRE(std::abs(lhs - psi.eval(x)) < 1e-6);
        }
    }
    SECTION("direct kernel rejects nonpositive real part") {
        REQUIRE_THROWS_AS(vladimirov(C{-0.5, 0}, psi, PAdic::zero(f)), std::domain_error);
    }
}
