#include <catch2/catch_amalgamated.hpp>

#include "nam/suites.hpp"

using namespace nam;
using C = std::complex<double>;

namespace {
bool peq(const PAdic& a, const PAdic& b) { return (a - b).is_zero(); }
}  // namespace

TEST_CASE("p-adic JSON and text round trips") {
    Field f = Qp(3);
    Rng rng(5, 1);
    SECTION("json") {
        for (int t = 0; t < 50; ++t) {
            PAdic x = random_element(f, rng, -4, 6, 12);
            PAdic back = padic_from_json(padic_json(x));
            REQUIRE(back == x);
        }
        PAdic z = PAdic::zero(f);
        REQUIRE(padic_from_json(padic_json(z)).is_zero());
    }
    SECTION("text") {
        for (int t = 0; t < 50; ++t) {
            PAdic x = random_element(f, rng, -4, 6, 12);
            REQUIRE(padic_parse(f, padic_text(x)) == x);
        }
        REQUIRE(padic_parse(f, padic_text(PAdic::zero(f))).is_zero());
        REQUIRE(peq(padic_parse(f, "7/9"), PAdic::from_rational(f, 7, 9)));
    }
    SECTION("base mismatch is rejected") {
        REQUIRE_THROWS_AS(padic_parse(Qp(5), "3^0 * (1)_3"), std::invalid_argument);
    }
}

TEST_CASE("locally constant function JSON round trip") {
    Field f = Qp(3);
    LcFn<C> fn = LcFn<C>::zero_fn(f);
    fn.add_piece(Ball{PAdic::zero(f), 1}, C{1.5, -0.25});
    fn.add_piece(Ball{PAdic::from_rational(f, 1, 1), 1}, C{0, 2});
    fn.default_value = C{0.125, 0};
    LcFn<C> back = lcfn_from_json(lcfn_json(fn));
    REQUIRE(back.pieces.size() == 2);
    Rng rng(5, 2);
    for (int t = 0; t < 40; ++t) {
        PAdic x = random_element(f, rng, -3, 4, 10);
        REQUIRE(back.eval(x) == fn.eval(x));
    }
}

TEST_CASE("measure JSON round trip") {
    Field f = Qp(3);
    std::vector<ShellMeasure1D> ms = {
        shell_measure_thm320(f, 2, Rat(3), -4),
        custom_measure(f, -1, {Rat(1, 2), Rat(1, 4), Rat(1, 4)}, PAdic::from_rational(f, 2, 1)),
        exp_measure(f, PAdic::from_rational(f, 1, 3), PAdic::zero(f), 2, -8, 8),
        dirac_measure(f, PAdic::from_rational(f, 5, 1)),
    };
    for (const auto& m : ms) {
        ShellMeasure1D back = measure_from_json(measure_json(m));
        REQUIRE(back.kind == m.kind);
        REQUIRE(back.jmin == m.jmin);
        REQUIRE(back.n == m.n);
        REQUIRE((back.center - m.center).is_zero());
        for (int j = m.jmin; j <= m.n; ++j) REQUIRE(back.weight(j) == m.weight(j));
        REQUIRE(back.tail == m.tail);
        // analytic tails survive the trip
        if (m.kind == MeasureKind::thm320) REQUIRE(back.tail_weight(m.jmin - 2) == m.tail_weight(m.jmin - 2));
        Rng rng(5, 3);
        for (int t = 0; t < 10; ++t) {
            PAdic z = random_element(f, rng, -3, 4, 10);
            REQUIRE(std::abs(charfun(back, z) - charfun(m, z)) < 1e-15);
        }
    }
}

TEST_CASE("matrix JSON round trip") {
    Field f = Qp(3);
    Rng rng(5, 4);
    MatrixK a = MatrixK::identity(f, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a.e[i][j] = random_element(f, rng, -2, 3, 12);
    MatrixK back = matrix_from_json(matrix_json(a));
    REQUIRE(back.n == 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) REQUIRE(back.e[i][j] == a.e[i][j]);
    REQUIRE(peq(det(back), det(a)));
    SECTION("tail profile") {
        a.tail_ord = [](int i, int j) { return 2 * (i + j) + 1; };
        MatrixK wt = matrix_from_json(matrix_json(a, 4));
        REQUIRE(wt.tail_ord);
        REQUIRE(wt.tail_ord(1, 2) == 7);
        REQUIRE(wt.tail_ord(9, 9) == kOrdInf);
    }
}

TEST_CASE("report JSON carries totals and cases") {
    Report r{"demo"};
    suites::add_case(r, "a", "in-a", "1", "1", true);
    suites::add_case(r, "b", "in-b", "2", "3", false);
    r.wall_ms = 12.5;
    json j = report_json(r);
    REQUIRE(j["suite"] == "demo");
    REQUIRE(j["totals"]["passed"] == 1);
    REQUIRE(j["totals"]["failed"] == 1);
    REQUIRE(j["cases"].size() == 2);
    REQUIRE(j["cases"][1]["pass"] == false);
    REQUIRE(j["cases"][0]["inputs"] == suites::digest("in-a"));
}

TEST_CASE("suite registry") {
    auto names = suite_names();
    REQUIRE(names.size() == 10);
    REQUIRE_THROWS_AS(run_suite("nonexistent", 1), std::invalid_argument);
    SECTION("reports are deterministic for a fixed seed") {
        Report a = run_suite("haar-character", 13);
        Report b = run_suite("haar-character", 13);
        REQUIRE(a.cases.size() == b.cases.size());
        for (size_t i = 0; i < a.cases.size(); ++i) {
            REQUIRE(a.cases[i].id == b.cases[i].id);
            REQUIRE(a.cases[i].inputs == b.cases[i].inputs);
            REQUIRE(a.cases[i].got == b.cases[i].got);
            REQUIRE(a.cases[i].pass == b.cases[i].pass);
        }
    }
}
