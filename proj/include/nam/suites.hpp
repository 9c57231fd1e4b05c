#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "gaussian.hpp"
#include "linops.hpp"
#include "pseudodiff.hpp"
#include "serialize.hpp"
#include "vladimirov.hpp"

namespace nam {

struct CaseResult {
    std::string id;
    std::string inputs;  // digest of the case inputs
    std::string expected;
    std::string got;
    bool pass = false;
};

struct Report {
    std::string suite;
    std::vector<CaseResult> cases;
    double wall_ms = 0;

    int passed() const {
        int n = 0;
        for (const auto& c : cases) n += c.pass;
        return n;
    }
    int failed() const { return static_cast<int>(cases.size()) - passed(); }
    bool ok() const { return failed() == 0; }
};

inline json report_json(const Report& r) {
    json cases = json::array();
    for (const auto& c : r.cases)
        cases.push_back(json{{"id", c.id},
                             {"inputs", c.inputs},
                             {"expected", c.expected},
                             {"got", c.got},
                             {"pass", c.pass}});
    return json{{"suite", r.suite},
                {"cases", cases},
                {"totals", json{{"passed", r.passed()}, {"failed", r.failed()}}},
                {"wall_ms", r.wall_ms}};
}

namespace suites {

inline std::string digest(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline void add_case(Report& r, const std::string& id, const std::string& inputs,
                     const std::string& expected, const std::string& got, bool pass) {
    r.cases.push_back(CaseResult{id, digest(inputs), expected, got, pass});
}

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string fmt(const std::complex<double>& v) {
    return fmt(v.real()) + (v.imag() < 0 ? "" : "+") + fmt(v.imag()) + "i";
}

inline PAdic unit_shifted(const Field& f, int j) {
    return PAdic::from_rational(f, 1, 1).shifted(j);
}

inline bool peq(const PAdic& a, const PAdic& b) { return (a - b).is_zero(); }

inline MatrixK random_matrix(const Field& f, Rng& rng, int n, int ord_lo, int ord_hi,
                             int digits = 16) {
    MatrixK m = MatrixK::identity(f, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m.e[i][j] = random_element(f, rng, ord_lo, ord_hi, digits);
    return m;
}

inline MatrixK random_gl_zp(const Field& f, Rng& rng, int n) {
    for (int tries = 0; tries < 400; ++tries) {
        MatrixK m = random_matrix(f, rng, n, 0, 4);
        if (!det(m).is_zero() && det(m).ord() == 0) return m;
    }
    throw std::runtime_error("random_gl_zp: no unit-determinant sample found");
}

// walks the full product partition of a support region into radius-p^-R cells
struct CellWalk {
    const Field& f;
    int dim, R;
    std::vector<PAdic> centers;
    CellWalk(const Field& f_, int dim_, int L, int R_)
        : f(f_), dim(dim_), R(R_), centers(detail::ball_centers(f_, L, R_)) {}
    template <typename Fn>
    void run(Fn&& fn) const {
        std::vector<PAdic> x(dim, PAdic::zero(f));
        rec(0, x, fn);
    }
    template <typename Fn>
    void rec(int i, std::vector<PAdic>& x, Fn&& fn) const {
        if (i == dim) {
            fn(x);
            return;
        }
        for (const PAdic& c : centers) {
            x[i] = c;
            rec(i + 1, x, fn);
        }
    }
};

inline Rat cell_mass(const ProductMeasure& mu, const std::vector<PAdic>& x, int R) {
    Rat m(1);
    for (size_t i = 0; i < x.size(); ++i) m *= mass_of_ball(mu.components[i], Ball{x[i], R});
    return m;
}

inline CylinderSet ball_cell(const Field& f, const PAdic& c, int m) {
    CylinderSet s;
    CoordConstraint cc;
    cc.kind = CoordConstraint::ball;
    cc.b = Ball{c, m};
    s.cs.push_back(cc);
    return s;
}

// ---- suite: haar-character ----------------------------------------------------
// exact ball integrals of additive characters against normalized Haar measure

inline Report run_haar_character(std::uint64_t seed, double /*tol*/) {
    Report r{"haar-character"};
    for (int p : {2, 3, 5}) {
        Field f = Qp(p);
        Rng rng(seed, 100 + p);
        for (int m = -3; m <= 3; ++m) {
            int exact = 0, total = 200;
            for (int t = 0; t < total; ++t) {
                PAdic z = (t % 17 == 0) ? PAdic::zero(f) : random_element(f, rng, -6, 6, 10);
                CycSum got = char_ball_integral<CycSum>(z, Ball{PAdic::zero(f), m});
                bool inside = z.is_zero() || -z.ord() <= m;
                CycSum want = inside ? CycSum::scalar(p, rat_pow(p, -m)) : CycSum(p);
                if (got == want) ++exact;
            }
            add_case(r, "p" + std::to_string(p) + "-m" + std::to_string(m),
                     "p=" + std::to_string(p) + " m=" + std::to_string(m) +
                         " seed=" + std::to_string(seed),
                     "200/200 exact", std::to_string(exact) + "/200 exact", exact == total);
        }
    }
    return r;
}

// ---- suite: fourier -------------------------------------------------------------
// exact transforms of ball indicators and the reflection identity

inline Report run_fourier(std::uint64_t seed, double /*tol*/) {
    Report r{"fourier"};
    for (int p : {2, 3, 5}) {
        Field f = Qp(p);
        for (int m = -3; m <= 3; ++m) {
            LcFn<CycSum> ind = LcFn<CycSum>::zero_fn(f);
            ind.add_piece(Ball{PAdic::zero(f), m}, CycSum::scalar(p, Rat(1)));
            LcFn<CycSum> got = fourier_lc(ind);
            LcFn<CycSum> want = LcFn<CycSum>::zero_fn(f);
            want.add_piece(Ball{PAdic::zero(f), -m}, CycSum::scalar(p, rat_pow(p, -m)));
            add_case(r, "indicator-p" + std::to_string(p) + "-m" + std::to_string(m),
                     "p=" + std::to_string(p) + " m=" + std::to_string(m), "exact transform",
                     lc_equal(got, want) ? "exact transform" : "mismatch", lc_equal(got, want));
        }
    }
    // double transform equals the reflection, on random piecewise functions
    int done = 0;
    for (int p : {2, 3, 5}) {
        Field f = Qp(p);
        Rng rng(seed, 200 + p);
        int quota = (p == 2) ? 18 : 16;  // 50 total
        for (int t = 0; t < quota; ++t, ++done) {
            int rr = 1 + int(rng.below(2));
            int L = int(rng.below(2));
            auto centers = detail::ball_centers(f, L, rr);
            LcFn<CycSum> fn = LcFn<CycSum>::zero_fn(f);
            int k = 1 + int(rng.below(4));
            std::vector<size_t> used;
            for (int i = 0; i < k; ++i) {
                size_t idx = rng.below(centers.size());
                bool dup = false;
                for (size_t u : used) dup |= (u == idx);
                if (dup) continue;
                used.push_back(idx);
                Rat v(long(rng.range(-5, 6)), long(1 + rng.below(3)));
                fn.add_piece(Ball{centers[idx], rr}, CycSum::scalar(p, v));
            }
            LcFn<CycSum> twice = fourier_lc(fourier_lc(fn));
            LcFn<CycSum> refl = LcFn<CycSum>::zero_fn(f);
            for (const auto& [b, v] : fn.pieces) refl.add_piece(Ball{-b.center, b.m}, v);
            bool pass = lc_equal(twice, refl);
            add_case(r, "double-transform-" + std::to_string(done),
                     "p=" + std::to_string(p) + " t=" + std::to_string(t) +
                         " seed=" + std::to_string(seed),
                     "F(F(f)) = f(-x) exactly", pass ? "exact" : "mismatch", pass);
        }
    }
    return r;
}

// ---- suite: charfun -------------------------------------------------------------
// normalization, boundedness, convolution factorization, positive definiteness

inline Report run_charfun(std::uint64_t seed, double tol) {
    if (tol <= 0) tol = 1e-12;
    Report r{"charfun"};
    Field f = Qp(3);
    std::vector<ShellMeasure1D> ms = {
        shell_measure_thm320(f, 2, Rat(3), -6),
        custom_measure(f, -2, {Rat(1, 3), Rat(1, 4), Rat(1, 4), Rat(1, 12), Rat(1, 12)},
                       PAdic::zero(f)),
        exp_measure(f, unit_shifted(f, -1), PAdic::zero(f), 2, -8, 10),
    };
    {
        bool pass = true;
        for (const auto& m : ms) pass &= std::abs(charfun(m, PAdic::zero(f)) - 1.0) < 1e-12;
        add_case(r, "theta-at-zero", "3 measures", "theta(0) = 1", pass ? "1" : "off", pass);
    }
    {
        Rng rng(seed, 301);
        bool pass = true;
        for (int t = 0; t < 100; ++t) {
            PAdic z = random_element(f, rng, -5, 6, 12);
            for (const auto& m : ms) pass &= std::abs(charfun(m, z)) <= 1.0 + 1e-12;
        }
        add_case(r, "theta-bounded", "100 z, seed=" + std::to_string(seed), "|theta| <= 1",
                 pass ? "bounded" : "exceeds 1", pass);
    }
    {
        // convolution factorizes the characteristic function
        auto a = custom_measure(f, -1, {Rat(1, 2), Rat(1, 4), Rat(1, 4)}, unit_shifted(f, 0));
        auto b = custom_measure(f, -2, {Rat(1, 3), Rat(1, 3), Rat(1, 3)}, PAdic::zero(f));
        auto c = convolve(a, b);
        Rng rng(seed, 302);
        double worst = 0;
        for (int t = 0; t < 100; ++t) {
            PAdic z = random_element(f, rng, -5, 6, 12);
            worst = std::max(worst, std::abs(charfun(c, z) - charfun(a, z) * charfun(b, z)));
        }
        add_case(r, "convolution-factorizes", "100 z, seed=" + std::to_string(seed),
                 "max err < " + fmt(tol), fmt(worst), worst < tol);
    }
    {
        // symmetric (centered) measures have real characteristic functions
        Rng rng(seed, 303);
        double worst = 0;
        for (int t = 0; t < 100; ++t) {
            PAdic z = random_element(f, rng, -5, 6, 12);
            worst = std::max(worst, std::abs(charfun(ms[0], z).imag()));
        }
        add_case(r, "symmetric-real", "100 z, seed=" + std::to_string(seed),
                 "max |Im| < 1e-12", fmt(worst), worst < 1e-12);
    }
    {
        // Gram matrices on 20-point grids stay numerically positive semidefinite
        Rng rng(seed, 304);
        bool pass = true;
        double worst = 0;
        for (const auto& m : ms) {
            std::vector<PAdic> zs;
            for (int t = 0; t < 20; ++t) zs.push_back(random_element(f, rng, -4, 5, 12));
            double mineig = positive_definite_probe(
                [&](const PAdic& z) { return charfun(m, z); }, zs);
            worst = std::min(worst, mineig);
            pass &= mineig >= -1e-10;
        }
        add_case(r, "gram-psd", "3 measures x 20 points, seed=" + std::to_string(seed),
                 "min eig >= -1e-10", fmt(worst), pass);
    }
    return r;
}

// ---- suite: quasi-invariance -----------------------------------------------------
// shift-density identities and exact normalization of the density

inline Report run_quasi_invariance(std::uint64_t seed, double /*tol*/) {
    Report r{"quasi-invariance"};
    Field f = Qp(3);
    Rng rng(seed, 400);
    // 500 random (a, b, x) triples in dimensions 1..6
    for (int block = 0; block < 10; ++block) {
        int chain_ok = 0, inv_ok = 0, total = 50;
        for (int t = 0; t < total; ++t) {
            int dim = 1 + int(rng.below(6));
            ProductMeasure mu;
            for (int i = 0; i < dim; ++i)
                mu.components.push_back(shell_measure_thm320(f, 2, Rat(3), -4));
            std::vector<PAdic> a, b, x, ab, xa, xpa, na;
            for (int i = 0; i < dim; ++i) {
                a.push_back(random_element(f, rng, -3, 5, 14));
                b.push_back(random_element(f, rng, -3, 5, 14));
                x.push_back(random_element(f, rng, -3, 5, 14));
                ab.push_back(a[i] + b[i]);
                xa.push_back(x[i] - a[i]);
                xpa.push_back(x[i] + a[i]);
                na.push_back(-a[i]);
            }
            auto lhs = product_rho(mu, ab, x, dim);
            auto r1 = product_rho(mu, a, x, dim);
            auto r2 = product_rho(mu, b, xa, dim);
            if (lhs.defined && r1.defined && r2.defined && lhs.value == r1.value * r2.value)
                ++chain_ok;
            auto li = product_rho(mu, na, x, dim);
            auto ri = product_rho(mu, a, xpa, dim);
            if (li.defined && ri.defined && li.value * ri.value == Rat(1)) ++inv_ok;
        }
        add_case(r, "identities-block-" + std::to_string(block),
                 "50 triples, seed=" + std::to_string(seed) + " block=" + std::to_string(block),
                 "50 chain + 50 inversion exact",
                 std::to_string(chain_ok) + " chain, " + std::to_string(inv_ok) + " inversion",
                 chain_ok == total && inv_ok == total);
    }
    // exact normalization of the density over an exhaustive cell partition
    Field f2 = Qp(2);
    Rng rng2(seed, 401);
    for (int dim = 1; dim <= 4; ++dim) {
        ProductMeasure mu;
        for (int i = 0; i < dim; ++i)
            mu.components.push_back(custom_measure(
                f2, -1, {Rat(1, 2), Rat(1, 4), Rat(1, 8), Rat(1, 8)}, PAdic::zero(f2)));
        bool pass = true;
        for (int rep = 0; rep < 2; ++rep) {
            std::vector<PAdic> a;
            for (int i = 0; i < dim; ++i) a.push_back(random_element(f2, rng2, -1, 4, 12));
            Rat total(0);
            bool all_defined = true;
            CellWalk walk(f2, dim, 1, 3);
            walk.run([&](const std::vector<PAdic>& x) {
                auto d = product_rho(mu, a, x, dim);
                if (!d.defined) {
                    all_defined = false;
                    return;
                }
                total += d.value * cell_mass(mu, x, 3);
            });
            pass &= all_defined && total == Rat(1);
        }
        add_case(r, "normalization-dim" + std::to_string(dim),
                 "dim=" + std::to_string(dim) + " seed=" + std::to_string(seed),
                 "integral of density = 1 exactly", pass ? "1" : "off", pass);
    }
    return r;
}

// ---- suite: cov-3.24 --------------------------------------------------------------
// change-of-variables densities transport cell masses under affine and
// piecewise affine bijections

inline Report run_cov(std::uint64_t seed, double /*tol*/) {
    Report r{"cov-3.24"};
    Rng rng(seed, 500);
    for (int i = 0; i < 50; ++i) {
        int p = (i % 2 == 0) ? 2 : 3;
        int dim = (p == 2) ? 2 + (i / 2) % 3 : 2;
        Field f = Qp(p);
        ProductMeasure mu;
        for (int k = 0; k < dim; ++k)
            mu.components.push_back(custom_measure(
                f, -1, {Rat(1, 2), Rat(1, 4), Rat(1, 8), Rat(1, 8)}, PAdic::zero(f)));
        MatrixK u = random_gl_zp(f, rng, dim);
        std::vector<PAdic> c;
        for (int k = 0; k < dim; ++k) c.push_back(random_element(f, rng, -1, 3, 12));
        bool cells_ok = true;
        Rat total(0);
        CellWalk walk(f, dim, 1, 2);
        walk.run([&](const std::vector<PAdic>& x) {
            Rat mx = cell_mass(mu, x, 2);
            std::vector<PAdic> y = matvec(u, x);
            for (int k = 0; k < dim; ++k) y[k] = y[k] + c[k];
            Rat my = cell_mass(mu, y, 2);
            auto d = affine_cov_density(u, c, mu, y);
            if (!d.defined || d.value * my != mx) cells_ok = false;
            if (d.defined) total += d.value * my;
        });
        bool pass = cells_ok && total == Rat(1);
        add_case(r, "affine-" + std::to_string(i),
                 "p=" + std::to_string(p) + " dim=" + std::to_string(dim) +
                     " seed=" + std::to_string(seed) + " i=" + std::to_string(i),
                 "per-cell transport exact, mass 1",
                 pass ? "exact" : (cells_ok ? "mass off" : "cell mismatch"), pass);
    }
    // piecewise affine bijections built from ball permutations and shell scalings
    Field f = Qp(3);
    for (int t = 0; t < 20; ++t) {
        int shape = t % 3;  // 2, 3, or 4 pieces
        int coord = int(rng.below(2));
        ProductMeasure mu;
        for (int k = 0; k < 2; ++k)
            mu.components.push_back(
                custom_measure(f, 0, {Rat(1, 3), Rat(1, 3), Rat(1, 3)}, PAdic::zero(f)));
        auto zero2 = [&] { return std::vector<PAdic>(2, PAdic::zero(f)); };
        auto id2 = [&] { return MatrixK::identity(f, 2); };
        auto ball_dom = [&](long c0, int m) {
            CylinderSet s;
            s.cs.resize(coord + 1);
            s.cs[coord].kind = CoordConstraint::ball;
            s.cs[coord].b = Ball{PAdic::from_rational(f, c0, 1), m};
            return s;
        };
        auto shell_dom = [&](int j) {
            CylinderSet s;
            s.cs.resize(coord + 1);
            s.cs[coord].kind = CoordConstraint::shell;
            s.cs[coord].j = j;
            s.cs[coord].shell_center = PAdic::zero(f);
            return s;
        };
        auto shift_piece = [&](CylinderSet dom, long a0) {
            PolygonalMap::Piece pc{std::move(dom), zero2(), id2()};
            pc.a[coord] = PAdic::from_rational(f, a0, 1);
            return pc;
        };
        PolygonalMap pm;
        if (shape == 0) {
            // 2 pieces: identity inside B(0, 1/3), doubling on the unit shell
            pm.pieces.push_back(shift_piece(ball_dom(0, 1), 0));
            PolygonalMap::Piece pc{shell_dom(0), zero2(), id2()};
            pc.v.e[coord][coord] = PAdic::from_rational(f, 2, 1);
            pm.pieces.push_back(std::move(pc));
        } else if (shape == 1) {
            // 3 pieces: cyclic rotation of the three radius-1/3 balls
            pm.pieces.push_back(shift_piece(ball_dom(0, 1), 1));
            pm.pieces.push_back(shift_piece(ball_dom(1, 1), 1));
            pm.pieces.push_back(shift_piece(ball_dom(2, 1), -2));
        } else {
            // 4 pieces: identity core, doubling on the |x| = 1/3 shell, swap
            // of the two unit-shell balls
            pm.pieces.push_back(shift_piece(ball_dom(0, 2), 0));
            PolygonalMap::Piece pc{shell_dom(1), zero2(), id2()};
            pc.v.e[coord][coord] = PAdic::from_rational(f, 2, 1);
            pm.pieces.push_back(std::move(pc));
            pm.pieces.push_back(shift_piece(ball_dom(1, 1), 1));
            pm.pieces.push_back(shift_piece(ball_dom(2, 1), -1));
        }
        bool cells_ok = true;
        Rat total(0);
        CellWalk walk(f, 2, 0, 3);
        walk.run([&](const std::vector<PAdic>& x) {
            Rat mx = cell_mass(mu, x, 3);
            std::vector<PAdic> y = nam::apply(pm, x);
            Rat my = cell_mass(mu, y, 3);
            auto d = polygonal_cov_density(pm, mu, y);
            if (!d.defined || d.value * my != mx) cells_ok = false;
            if (d.defined) total += d.value * my;
        });
        bool pass = cells_ok && total == Rat(1);
        add_case(r, "polygonal-" + std::to_string(t),
                 "pieces=" + std::to_string(pm.pieces.size()) + " coord=" +
                     std::to_string(coord) + " t=" + std::to_string(t),
                 "per-cell transport exact, mass 1",
                 pass ? "exact" : (cells_ok ? "mass off" : "cell mismatch"), pass);
    }
    return r;
}

// ---- suite: kakutani ---------------------------------------------------------------
// Hellinger affinities against an independent cell-sum computation

inline Report run_kakutani(std::uint64_t seed, double tol) {
    if (tol <= 0) tol = 1e-9;
    Report r{"kakutani"};
    Field f = Qp(3);
    Rng rng(seed, 600);
    for (int t = 0; t < 20; ++t) {
        std::vector<ShellMeasure1D> comps;
        std::vector<PAdic> shifts;
        for (int j = 0; j < 12; ++j) {
            std::vector<Rat> w;
            for (int k = 0; k < 4; ++k) w.push_back(Rat(1 + long(rng.below(6)), 1));
            comps.push_back(custom_measure(f, -2, w, PAdic::zero(f)));
            shifts.push_back(random_element(f, rng, -2, 5, 12));
        }
        auto res = kakutani_check(comps, shifts, 12);
        bool range_ok = true;
        double worst = 0;
        for (int j = 0; j < 12; ++j) {
            double b = res.betas[j];
            range_ok &= (b > 0.0 && b <= 1.0 + 1e-12);
            // direct Hellinger affinity: cell sums over the common refinement
            double direct = 0;
            for (const PAdic& c : detail::ball_centers(f, 2, 1)) {
                Rat m1 = mass_of_ball(comps[j], Ball{c, 1});
                Rat m2 = mass_of_ball(comps[j], Ball{c - shifts[j], 1});
                direct += std::sqrt(to_double(m1) * to_double(m2));
            }
            worst = std::max(worst, std::abs(b - direct));
        }
        add_case(r, "random-sequence-" + std::to_string(t),
                 "t=" + std::to_string(t) + " seed=" + std::to_string(seed),
                 "betas in (0,1], match direct sums within " + fmt(tol), fmt(worst),
                 range_ok && worst < tol);
    }
    {
        // shifts inside the terminal balls leave every factor untouched
        std::vector<ShellMeasure1D> comps;
        std::vector<PAdic> shifts;
        for (int j = 0; j < 12; ++j) {
            comps.push_back(shell_measure_thm320(f, 2, Rat(3), -4));
            shifts.push_back(unit_shifted(f, 3 + j));
        }
        auto res = kakutani_check(comps, shifts, 12);
        bool pass = res.verdict == KakutaniVerdict::equivalent_trend;
        for (double b : res.betas) pass &= (b == 1.0);
        add_case(r, "constancy-radius-family", "12 terminal-ball shifts",
                 "all beta exactly 1, equivalent trend", pass ? "all 1" : "off", pass);
    }
    {
        // identical unit shifts force a geometric decay of the partial products
        std::vector<ShellMeasure1D> comps(12, shell_measure_thm320(f, 2, Rat(3), -4));
        std::vector<PAdic> shifts(12, unit_shifted(f, 0));
        auto res = kakutani_check(comps, shifts, 12);
        double b1 = res.betas[0];
        double prod = 1;
        for (double b : res.betas) prod *= b;
        bool pass = b1 > 0 && b1 < 1 && std::abs(prod - std::pow(b1, 12)) < 1e-12 &&
                    res.verdict == KakutaniVerdict::singular_trend;
        add_case(r, "unit-shift-power-law", "12 identical unit shifts",
                 "geometric partial products, singular trend", pass ? "geometric" : "off", pass);
    }
    return r;
}

// ---- suite: pseudo-diff -------------------------------------------------------------
// closed forms, finite additivity, and the brute-force double-sum check

inline Report run_pseudo_diff(std::uint64_t seed, double tol) {
    if (tol <= 0) tol = 1e-9;
    Report r{"pseudo-diff"};
    const std::vector<std::complex<double>> orders = {{0.5, 0}, {1, 0}, {1.5, 0}, {1, 1}};
    for (int p : {2, 3, 5}) {
        Field f = Qp(p);
        LcFn<std::complex<double>> ind = LcFn<std::complex<double>>::zero_fn(f);
        ind.add_piece(Ball{PAdic::zero(f), 0}, {1, 0});
        double worst_in = 0, worst_out = 0;
        for (auto b : orders) {
            std::complex<double> want =
                (1.0 - 1.0 / p) * detail::cpow_p(p, -1, b) / (1.0 - detail::cpow_p(p, -1, b));
            for (PAdic x : {PAdic::zero(f), unit_shifted(f, 0), unit_shifted(f, 2)})
                worst_in = std::max(worst_in, std::abs(pd(b, ind, x).value - want));
            for (int l = 1; l <= 3; ++l) {
                PAdic x = unit_shifted(f, -l);
                std::complex<double> wout = -detail::cpow_p(p, -l, 1.0 + b);
                worst_out = std::max(worst_out, std::abs(pd(b, ind, x).value - wout));
            }
        }
        add_case(r, "closed-form-p" + std::to_string(p), "p=" + std::to_string(p),
                 "inside and outside values within " + fmt(tol),
                 fmt(std::max(worst_in, worst_out)), std::max(worst_in, worst_out) < tol);
    }
    Field f = Qp(3);
    ProductMeasure mu;
    mu.components.push_back(shell_measure_thm320(f, 2, Rat(3), -6));
    std::vector<PAdic> z = {unit_shifted(f, 0)};
    {
        std::complex<double> total{0, 0};
        for (int d = 0; d < 3; ++d) {
            PAdic c = PAdic::from_rational(f, d, 1).shifted(1);
            total += measure_pd({1, 0}, mu, z, ball_cell(f, c, 2)).value;
        }
        std::complex<double> whole =
            measure_pd({1, 0}, mu, z, ball_cell(f, PAdic::zero(f), 1)).value;
        double err = std::abs(whole - total);
        add_case(r, "finite-additivity", "3-way cell split", "split sums to parent within 1e-12",
                 fmt(err), err < 1e-12);
    }
    {
        // brute-force double sum with the critical shells refined to depth 6
        CylinderSet cell = ball_cell(f, PAdic::zero(f), 1);
        Rat g0 = measure_mass(mu, cell);
        double worst = 0;
        for (std::complex<double> b : {std::complex<double>{0.5, 0}, {1, 0}}) {
            PDResult got = measure_pd(b, mu, z, cell, 1e-12);
            std::complex<double> oracle{0, 0};
            const int D = 6;
            for (int l = -4; l <= 6; ++l) {
                std::complex<double> shell{0, 0};
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
            worst = std::max(worst, std::abs(got.value - oracle));
        }
        add_case(r, "double-sum-oracle", "b in {1/2, 1}, seed=" + std::to_string(seed),
                 "within " + fmt(tol), fmt(worst), worst < tol);
    }
    return r;
}

// ---- suite: vladimirov ---------------------------------------------------------------
// semigroup property of the fractional operator orders

inline Report run_vladimirov(std::uint64_t seed, double tol) {
    if (tol <= 0) tol = 1e-6;
    Report r{"vladimirov"};
    Field f = Qp(3);
    LcFn<std::complex<double>> psi = LcFn<std::complex<double>>::zero_fn(f);
    psi.add_piece(Ball{PAdic::zero(f), 1}, {1, 0});
    psi.add_piece(Ball{unit_shifted(f, 0), 1}, {-0.5, 0.25});
    {
        bool pass = true;
        for (int p : {2, 3, 5})
            pass &= std::abs(vladimirov_const(p, {1, 0}) -
                             std::complex<double>{double(p) * p / (p + 1), 0}) < 1e-12;
        add_case(r, "normalizing-constant", "p in {2,3,5}", "c_1 = p^2/(p+1)",
                 pass ? "match" : "off", pass);
    }
    {
        Rng rng(seed, 701);
        bool pass = true;
        for (int t = 0; t < 10; ++t) {
            PAdic x = random_element(f, rng, -2, 3, 12);
            pass &= (vladimirov({0, 0}, psi, x) == psi.eval(x));
        }
        add_case(r, "order-zero-identity", "10 x, seed=" + std::to_string(seed),
                 "exact identity", pass ? "exact" : "off", pass);
    }
    {
        const std::vector<std::pair<std::complex<double>, std::complex<double>>> combos = {
            {{0.5, 0}, {0.5, 0}}, {{-1, 0}, {1, 0}}, {{1, 0}, {1, 0}}};
        Rng rng(seed, 702);
        for (size_t ci = 0; ci < combos.size(); ++ci) {
            auto [b_inner, b_outer] = combos[ci];
            RadialTailFn g = vladimirov_fn(b_inner, psi);
            double worst = 0;
            for (int t = 0; t < 6; ++t) {
                PAdic x = random_element(f, rng, -1, 3, 12);
                std::complex<double> lhs = vladimirov_apply(b_outer, g, x);
                std::complex<double> sum = b_inner + b_outer;
                std::complex<double> rhs = std::abs(sum) < 1e-15
                                               ? psi.eval(x)
                                               : vladimirov(sum, psi, x);
                worst = std::max(worst, std::abs(lhs - rhs));
            }
            add_case(r, "composition-" + std::to_string(ci),
                     "orders " + fmt(b_outer) + " after " + fmt(b_inner) +
                         ", seed=" + std::to_string(seed),
                     "within " + fmt(tol), fmt(worst), worst < tol);
        }
    }
    return r;
}

// ---- suite: scde -----------------------------------------------------------------------
// triangular factorization with pivoting reconstructs exactly

inline Report run_scde(std::uint64_t seed, double /*tol*/) {
    Report r{"scde"};
    Field f = Qp(3);
    PAdic one = PAdic::from_rational(f, 1, 1);
    {
        Rng rng(seed, 801);
        int done = 0, exact = 0, unit_dets = 0, d_ord_ok = 0, forced = 0;
        while (done < 100) {
            int n = 1 + int(rng.below(6));
            // wide digit windows so the comparison still covers 12 digits
            // after cancellation inside the minors
            MatrixK a = random_matrix(f, rng, n, -2, 2, 36);
            if (det(a).is_zero()) continue;
            if (done % 5 == 0 && n >= 2) {
                a.e[0][0] = PAdic::zero(f);
                if (det(a).is_zero()) continue;
                ++forced;
            }
            auto s = scde_decompose(a);
            MatrixK rec = scde_reconstruct(s);
            bool ok = true;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) ok &= peq(rec.e[i][j], a.e[i][j]);
            exact += ok;
            unit_dets += peq(det(s.C), one) && peq(det(s.E), one);
            d_ord_ok += det(s.D).ord() == det(a).ord();
            ++done;
        }
        bool pass = exact == 100 && unit_dets == 100 && d_ord_ok == 100 && forced >= 15;
        add_case(r, "random-reconstruction", "100 matrices, seed=" + std::to_string(seed),
                 "100 exact, unit det C and E, |det| in D",
                 std::to_string(exact) + " exact, " + std::to_string(forced) + " forced pivots",
                 pass);
    }
    {
        Rng rng(seed, 802);
        bool pass = true;
        for (int t = 0; t < 25; ++t) {
            MatrixK a = random_matrix(f, rng, 4, -2, 3);
            MatrixK b = random_matrix(f, rng, 4, -2, 3);
            pass &= peq(det(matmul(a, b)), det(a) * det(b));
        }
        add_case(r, "det-multiplicative", "25 pairs, seed=" + std::to_string(seed),
                 "det(AB) = det(A) det(B) exactly", pass ? "exact" : "off", pass);
    }
    {
        Rng rng(seed, 803);
        bool pass = true;
        int checked = 0;
        for (int t = 0; t < 40 && checked < 10; ++t) {
            MatrixK a = MatrixK::identity(f, 3);
            for (int i = 0; i < 3; ++i)
                for (int j = i; j < 3; ++j) {
                    a.e[i][j] = random_element(f, rng, 0, 3, 16);
                    a.e[j][i] = a.e[i][j];
                }
            std::vector<int> i01 = {0, 1};
            if (det(a).is_zero() || a.e[0][0].is_zero() ||
                detail::minor_det(a.e, i01, i01).is_zero())
                continue;
            auto s = scde_decompose(a);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) pass &= peq(s.E.e[i][j], s.C.e[j][i]);
            ++checked;
        }
        add_case(r, "symmetric-transpose", "10 symmetric matrices, seed=" + std::to_string(seed),
                 "E equals C transposed exactly", pass ? "exact" : "off", pass && checked == 10);
    }
    return r;
}

// ---- suite: concentration ------------------------------------------------------------
// weak convergence to the point mass, smoothing pairing, tail-bound inequality

inline Report run_concentration(std::uint64_t /*seed*/, double /*tol*/) {
    Report r{"concentration"};
    Field f = Qp(3);
    {
        // test function with a tiny constancy ball at 0 so the error stays
        // strictly positive along the family
        LcFn<std::complex<double>> fn = LcFn<std::complex<double>>::zero_fn(f);
        fn.add_piece(Ball{PAdic::zero(f), 5}, {2, 0});
        fn.add_piece(Ball{unit_shifted(f, 0), 1}, {-1, 0});
        double f0 = fn.eval(PAdic::zero(f)).real();
        double prev = 1e9;
        bool strict = true;
        double last = 1e9;
        for (int e = 1; e <= 6; ++e) {
            auto g = gaussian_like_measure(f, unit_shifted(f, -e), -10, 16);
            double err = std::abs(integrate_against(fn, g) - f0);
            strict &= (err < prev);
            prev = err;
            last = err;
        }
        add_case(r, "weak-convergence", "|xi| = 3^e, e = 1..6",
                 "strictly decreasing, final < 1e-3", fmt(last), strict && last < 1e-3);
    }
    {
        ProductMeasure mu;
        for (int j = 1; j <= 3; ++j) mu.components.push_back(shell_measure_thm320(f, j, Rat(3), -6));
        double prev = -1, last = 0;
        bool mono = true, bounded = true;
        for (int e = 1; e <= 6; ++e) {
            double v = smoothing_mass(mu, unit_shifted(f, -e), 3);
            bounded &= (v >= 0.0 && v <= 1.0 + 1e-9);
            mono &= (v > prev);
            prev = v;
            last = v;
        }
        add_case(r, "smoothing-mass", "|xi| = 3^e, e = 1..6", "monotone to 1 within 5e-3",
                 fmt(last), mono && bounded && std::abs(last - 1.0) < 5e-3);
    }
    // mu({x : nu_hat(x) <= l}) <= int (1 - mu_hat) dnu / (1 - l), both sides
    // exact on the common shell-cell refinement
    for (int dim : {1, 2, 3}) {
        ProductMeasure mu, nu;
        for (int i = 0; i < dim; ++i) {
            mu.components.push_back(
                custom_measure(f, -2, {Rat(1, 3), Rat(1, 4), Rat(1, 4), Rat(1, 12), Rat(1, 12)},
                               PAdic::zero(f)));
            nu.components.push_back(
                custom_measure(f, -2, {Rat(1, 2), Rat(1, 4), Rat(1, 8), Rat(1, 16), Rat(1, 16)},
                               PAdic::zero(f)));
        }
        auto radial_table = [&](const ShellMeasure1D& other) {
            std::vector<Rat> vals;
            for (int j = -2; j <= 2; ++j) vals.push_back(charfun_radial(other, unit_shifted(f, j)));
            return vals;
        };
        auto nu_on_mu = radial_table(nu.components[0]);
        auto mu_on_nu = radial_table(mu.components[0]);
        bool pass = nu_on_mu.back() == Rat(1);
        for (int li = 1; li <= 9; ++li) {
            Rat l(li, 10);
            Rat lhs(0);
            std::function<void(int, Rat, Rat)> rec = [&](int i, Rat mass, Rat prod) {
                if (i == dim) {
                    if (prod <= l) lhs += mass;
                    return;
                }
                for (int j = -2; j <= 2; ++j)
                    rec(i + 1, mass * mu.components[i].weight(j), prod * nu_on_mu[j + 2]);
            };
            rec(0, Rat(1), Rat(1));
            Rat integral(0);
            std::function<void(int, Rat, Rat)> rec2 = [&](int i, Rat mass, Rat prod) {
                if (i == dim) {
                    integral += mass * (Rat(1) - prod);
                    return;
                }
                for (int j = -2; j <= 2; ++j)
                    rec2(i + 1, mass * nu.components[i].weight(j), prod * mu_on_nu[j + 2]);
            };
            rec2(0, Rat(1), Rat(1));
            pass &= (lhs <= integral / (Rat(1) - l));
        }
        add_case(r, "tail-bound-dim" + std::to_string(dim),
                 "dim=" + std::to_string(dim) + " l=0.1..0.9",
                 "exact inequality at all levels", pass ? "holds" : "violated", pass);
    }
    return r;
}

}  // namespace suites

inline std::vector<std::string> suite_names() {
    return {"haar-character", "fourier",    "charfun",  "quasi-invariance", "cov-3.24",
            "kakutani",       "pseudo-diff", "vladimirov", "scde",          "concentration"};
}

inline Report run_suite(const std::string& name, std::uint64_t seed, double tol = 0) {
    using Fn = Report (*)(std::uint64_t, double);
    static const std::vector<std::pair<std::string, Fn>> table = {
        {"haar-character", suites::run_haar_character},
        {"fourier", suites::run_fourier},
        {"charfun", suites::run_charfun},
        {"quasi-invariance", suites::run_quasi_invariance},
        {"cov-3.24", suites::run_cov},
        {"kakutani", suites::run_kakutani},
        {"pseudo-diff", suites::run_pseudo_diff},
        {"vladimirov", suites::run_vladimirov},
        {"scde", suites::run_scde},
        {"concentration", suites::run_concentration},
    };
    for (const auto& [n, fn] : table) {
        if (n != name) continue;
        auto t0 = std::chrono::steady_clock::now();
        Report rep = fn(seed, tol);
        auto t1 = std::chrono::steady_clock::now();
        rep.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        return rep;
    }
    throw std::invalid_argument("unknown suite: " + name);
}

}  // namespace nam
