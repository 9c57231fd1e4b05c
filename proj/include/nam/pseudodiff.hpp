#pragma once

#include <complex>

#include "locally_constant.hpp"
#include "product_measure.hpp"

namespace nam {

struct PDResult {
    std::complex<double> value{0, 0};
    double tail_bound = 0;
    int l_min = 0, l_max = 0;  // shells actually summed
};

namespace detail {
// p^(l * w) for complex w
inline std::complex<double> cpow_p(int p, double l, std::complex<double> w) {
    return std::exp(std::log(double(p)) * l * w);
}
}  // namespace detail

inline Ball unit_ball_region(const Field& f) { return Ball{PAdic::zero(f), 0}; }

// PD(b, f)(x) = int (f(x) - f(y)) |x-y|^{-1-b} dv(y).  Shells strictly inside
// the constancy radius of f are skipped outright (their integrand vanishes
// identically); shells beyond the pieces form a geometric tail summed in
// closed form, which needs Re b > 0 unless f(x) equals the default value.
inline PDResult pd(std::complex<double> b, const LcFn<std::complex<double>>& f, const PAdic& x,
                   bool unit_ball = false, double tol = 1e-12) {
    const Field& fd = f.field;
    int p = fd.p;
    std::complex<double> fx = f.eval(x);
    PDResult r;
    r.tail_bound = 0;

    if (unit_ball) {
        if (!x.is_zero() && x.ord() < 0) {
            // x outside the unit ball: |x - y| = |x| on all of B(0,1)
            std::complex<double> ib = integrate_lc(f, unit_ball_region(fd));
            r.value = (fx - ib) * detail::cpow_p(p, x.ord(), 1.0 + b);
            r.l_min = r.l_max = x.ord();
            return r;
        }
        int rc = f.constancy_exponent();
        r.l_min = 0;
        r.l_max = rc - 1;
        for (int l = 0; l < rc; ++l) {
            std::complex<double> il = integrate_lc(f, Ball{x, l}) - integrate_lc(f, Ball{x, l + 1});
            Rat vol = rat_pow(p, -l) * Rat(p - 1, p);
            std::complex<double> diff = fx * to_double(vol) - il;
            r.value += diff * detail::cpow_p(p, l, 1.0 + b);
        }
        return r;
    }

    if (f.pieces.empty()) return r;  // constant function
    int rc = f.constancy_exponent();
    int lmin = rc;
    for (auto& [ball, v] : f.pieces) {
        PAdic d = x - ball.center;
        int cand = (d.is_zero() || d.ord() >= ball.m) ? ball.m : d.ord();
        lmin = std::min(lmin, cand);
    }
    r.l_min = lmin;
    r.l_max = rc - 1;
    for (int l = lmin; l < rc; ++l) {
        std::complex<double> il = integrate_lc(f, Ball{x, l}) - integrate_lc(f, Ball{x, l + 1});
        Rat vol = rat_pow(p, -l) * Rat(p - 1, p);
        std::complex<double> diff = fx * to_double(vol) - il;
        r.value += diff * detail::cpow_p(p, l, 1.0 + b);
    }
    std::complex<double> outer_diff = fx - f.default_value;
    if (std::abs(outer_diff) > 0) {
        if (b.real() <= 0)
            throw divergence_error("pd: non-cancelling outer tail with Re b <= 0");
        // sum over shells l <= lmin - 1 of outer_diff (1 - 1/p) p^{l b}
        std::complex<double> denom = 1.0 - detail::cpow_p(p, -1.0, b);
        r.value += outer_diff * (1.0 - 1.0 / p) * detail::cpow_p(p, lmin - 1.0, b) / denom;
        r.l_min = lmin;  // tail summed analytically beyond this
    }
    return r;
}

// ---- pseudo-differentiation of measures --------------------------------------

// mass of the shifted cylinder set S - t z (each constraint center moved)
inline Rat shifted_cylinder_mass(const ProductMeasure& mu, const CylinderSet& s,
                                 const std::vector<PAdic>& z, const PAdic& t) {
    CylinderSet sh = s;
    for (size_t i = 0; i < sh.cs.size(); ++i) {
        if (i >= z.size() || z[i].is_zero()) continue;
        PAdic d = t * z[i];
        switch (sh.cs[i].kind) {
            case CoordConstraint::none: break;
            case CoordConstraint::ball: sh.cs[i].b.center = sh.cs[i].b.center - d; break;
            case CoordConstraint::shell: sh.cs[i].shell_center = sh.cs[i].shell_center - d; break;
        }
    }
    return measure_mass(mu, sh);
}

// constancy exponent of t -> mu(-t z + S): the mass cannot change under
// |delta z_i| below the finest constraint scale of coordinate i
inline int measure_pd_constancy(const ProductMeasure& mu, const CylinderSet& s,
                                const std::vector<PAdic>& z) {
    int rc = 0;
    for (size_t i = 0; i < s.cs.size(); ++i) {
        if (i >= z.size() || z[i].is_zero()) continue;
        int scale;
        switch (s.cs[i].kind) {
            case CoordConstraint::none: continue;
            case CoordConstraint::ball: scale = s.cs[i].b.m; break;
            case CoordConstraint::shell: scale = s.cs[i].j + 1; break;
        }
        // also the measure's own cell structure moves with the shift
        scale = std::max(scale, mu.components[i].n);
        rc = std::max(rc, scale - z[i].ord());
    }
    return rc;
}

// PD(b, g)(0) for g(t) = mu(-t z + S): shells of t below the constancy
// radius vanish; shells within the window are refined to sub-balls on which
// g is exactly constant; the outer region is summed numerically against the
// measure's decaying tail with a reported bound.
inline PDResult measure_pd(std::complex<double> b, const ProductMeasure& mu,
                           const std::vector<PAdic>& z, const CylinderSet& s, double tol = 1e-9) {
    const Field& f = mu.components.at(0).field;
    int p = f.p;
    Rat g0 = measure_mass(mu, s);
    PDResult r;
    bool anyz = false;
    for (auto& zi : z)
        if (!zi.is_zero()) anyz = true;
    if (!anyz) return r;  // g constant
    int rc = measure_pd_constancy(mu, s, z);
    // window floor: below the component windows the masses decay; start the
    // numeric outer sum where shifts leave every window
    int lmin = rc;
    for (size_t i = 0; i < s.cs.size(); ++i) {
        if (i >= z.size() || z[i].is_zero()) continue;
        lmin = std::min(lmin, mu.components[i].jmin - z[i].ord() - 2);
    }
    r.l_max = rc - 1;
    r.l_min = lmin;
    // The integrand is constant on each t-shell except where the shifted
    // constraint center can cancel against its offset from the measure's
    // center; those critical shells are refined just deep enough to resolve
    // the cancellation (up to the terminal scale, past which masses agree).
    auto shell_term = [&](int l) {
        int depth = 0;
        for (size_t i = 0; i < s.cs.size(); ++i) {
            if (i >= z.size() || z[i].is_zero()) continue;
            PAdic d = PAdic::zero(f);
            int scale;
            switch (s.cs[i].kind) {
                case CoordConstraint::none: continue;
                case CoordConstraint::ball:
                    d = s.cs[i].b.center - mu.components[i].center;
                    scale = std::max(s.cs[i].b.m, mu.components[i].n);
                    break;
                case CoordConstraint::shell:
                    d = s.cs[i].shell_center - mu.components[i].center;
                    scale = std::max(s.cs[i].j + 1, mu.components[i].n);
                    break;
            }
            int e = l + z[i].ord();
            if (!d.is_zero() && d.ord() == e) depth = std::max(depth, scale + 1 - e);
        }
        if (depth <= 0) {
            PAdic t = PAdic::from_rational(f, 1, 1).shifted(l);
            Rat gl = shifted_cylinder_mass(mu, s, z, t);
            double vol = std::pow(double(p), -l) * (1.0 - 1.0 / p);
            return to_double(g0 - gl) * vol * detail::cpow_p(p, l, 1.0 + b);
        }
        long long count = 1;
        for (int i = 1; i < depth; ++i) count *= p;
        if (count > 200000) throw coverage_error("measure_pd: shell refinement too large");
        double subvol = std::pow(double(p), -double(l + depth));
        std::complex<double> acc{0, 0};
        for (long long u = 0; u < count; ++u)
            for (int lead = 1; lead < p; ++lead) {
                Int unit = Int(lead) + Int(p) * Int(u);
                PAdic t = PAdic::from_rational(f, unit, Int(1), depth + 2).shifted(l);
                Rat gl = shifted_cylinder_mass(mu, s, z, t);
                acc += to_double(g0 - gl) * subvol;
            }
        return acc * detail::cpow_p(p, l, 1.0 + b);
    };
    for (int l = lmin; l < rc; ++l) r.value += shell_term(l);
    // outer region |t| > p^{-lmin}: g decays with the component tails; sum
    // numerically until the terms fall under tol, then bound the rest
    double prev = 1e300;
    for (int l = lmin - 1; l > lmin - 400; --l) {
        // g is radial to first order out here; one representative suffices
        PAdic t = PAdic::from_rational(f, 1, 1).shifted(l);
        Rat gl = shifted_cylinder_mass(mu, s, z, t);
        double vol = std::pow(double(p), -l) * (1.0 - 1.0 / p);
        std::complex<double> term =
            to_double(g0 - gl) * vol * detail::cpow_p(p, l, 1.0 + b);
        r.value += term;
        double mag = std::abs(term);
        if (mag < 1e-17 * (std::abs(r.value) + 1e-300) && mag <= prev) {
            r.tail_bound = mag * 10;
            return r;
        }
        prev = mag;
    }
    if (b.real() <= 0) throw divergence_error("measure_pd: outer region does not settle");
    r.tail_bound = prev * 10;
    return r;
}

// ---- the measure nu = D^b_a mu ------------------------------------------------

struct PseudoDiffMeasure {
    std::complex<double> order;
    std::vector<CylinderSet> cells;
    std::vector<std::complex<double>> values;
    std::complex<double> value(size_t i) const { return values.at(i); }
};

// nu(cell) = int [mu(-lambda a + cell) - mu(cell)] |lambda|^{-1-b} dv(lambda),
// i.e. the negative of measure_pd on each cell
inline PseudoDiffMeasure tilde_D_measure(std::complex<double> b, const ProductMeasure& mu,
                                         const std::vector<PAdic>& a,
                                         const std::vector<CylinderSet>& cells,
                                         double tol = 1e-9) {
    PseudoDiffMeasure out;
    out.order = b;
    out.cells = cells;
    for (const auto& c : cells) {
        PDResult r = measure_pd(b, mu, a, c, tol);
        out.values.push_back(-r.value);
    }
    return out;
}

// l_mu(a, cell) = (D^1_a mu)(cell) / mu(cell)
inline std::complex<double> log_pseudo_derivative(const ProductMeasure& mu,
                                                  const std::vector<PAdic>& a,
                                                  const CylinderSet& cell, double tol = 1e-9) {
    Rat mass = measure_mass(mu, cell);
    if (mass == Rat(0)) throw std::domain_error("log_pseudo_derivative: zero-mass cell");
    PDResult r = measure_pd({1.0, 0.0}, mu, a, cell, tol);
    return -r.value / to_double(mass);
}

}  // namespace nam
