#pragma once

#include <cmath>

#include "product_measure.hpp"
#include "shell_measure.hpp"

namespace nam {

// C_q(xi) with C_q(xi)^{-1} = sum_l [p^{lq} - p^{(l-1)q}] exp(-p^{2l} |xi|^2),
// truncated with a certified tail: terms with l -> -inf are bounded by
// p^{lq}(1 - p^{-q}) and sum geometrically; terms with l -> +inf die under
// the exponential.
inline double gaussian_normalizer(double xi_norm, int q, const Field& f, double tol) {
    if (tol <= 0) throw std::invalid_argument("gaussian_normalizer: tol must be positive");
    if (xi_norm <= 0) throw std::invalid_argument("gaussian_normalizer: |xi| must be positive");
    double p = f.p;
    double inv = 0;
    // upward until the exponential kills the terms
    for (int l = 0;; ++l) {
        double t = (std::pow(p, l * q) - std::pow(p, (l - 1.0) * q)) *
                   std::exp(-std::pow(p, 2.0 * l) * xi_norm * xi_norm);
        inv += t;
        if (l > 0 && t < tol * 0.5) break;
        if (l > 4000) throw divergence_error("gaussian_normalizer: no upper convergence");
    }
    for (int l = -1;; --l) {
        double t = (std::pow(p, l * q) - std::pow(p, (l - 1.0) * q)) *
                   std::exp(-std::pow(p, 2.0 * l) * xi_norm * xi_norm);
        inv += t;
        // remaining lower tail is geometric with ratio p^-q
        double bound = std::pow(p, (l - 1.0) * q) / (1.0 - std::pow(p, -double(q)));
        if (bound < tol * 0.5) break;
    }
    return 1.0 / inv;
}

// nu_xi(dx) = C(xi) exp(-|x xi|^2) v(dx) as shell weights on [jmin, n],
// renormalized; the window must hold 1 - tol of the mass.
inline ShellMeasure1D gaussian_like_measure(const Field& f, const PAdic& xi, int jmin, int n,
                                            double tol = 1e-9) {
    if (xi.is_zero()) throw std::invalid_argument("gaussian_like_measure: xi must be nonzero");
    double p = f.p;
    double xn = xi.norm_d();
    auto raw = [&](int j) {  // shell mass before normalization
        double r = std::pow(p, -double(j)) * xn;
        double e = r * r;
        if (e > 700) return 0.0;
        return std::pow(p, -double(j)) * (1.0 - 1.0 / p) * std::exp(-e);
    };
    double all = 0;
    for (int j = -300; j < 300; ++j) all += raw(j);
    double inwin = 0;
    for (int j = jmin; j < n; ++j) inwin += raw(j);
    double term = 0;
    for (int j = n; j < n + 300; ++j) term += raw(j);
    inwin += term;
    if ((all - inwin) / all > tol)
        throw coverage_error("gaussian_like_measure: window does not hold 1 - tol of the mass");
    ShellMeasure1D m;
    m.field = f;
    m.kind = MeasureKind::custom;
    m.jmin = jmin;
    m.n = n;
    m.center = PAdic::zero(f);
    m.w.resize(n - jmin + 1);
    Rat s(0);
    for (int j = jmin; j < n; ++j) {
        m.w[j - jmin] = rationalize(raw(j) / inwin);
        s += m.w[j - jmin];
    }
    m.w[n - jmin] = Rat(1) - s;  // absorb rounding so mass is exactly 1
    return m;
}

// Smoothing pairing int F_n(gamma_{xi,n})(x) mu_{L_n}(dx).  The Fourier
// transform of the product Gaussian-like density factorizes, and each factor
// is radial, so the pairing is a product of exact shell sums.
inline double smoothing_mass(const ProductMeasure& mu, const PAdic& xi, int n_trunc,
                             int jmin = -12, int nwin = 12) {
    if (n_trunc > mu.dim()) throw coverage_error("smoothing_mass: truncation exceeds dimension");
    const Field& f = mu.components.empty() ? Qp(3) : mu.components[0].field;
    ShellMeasure1D g = gaussian_like_measure(f, xi, jmin, nwin);
    double out = 1.0;
    for (int i = 0; i < n_trunc; ++i) {
        const ShellMeasure1D& mi = mu.components[i];
        // F(gamma)(x) depends only on |x|: it is the characteristic function
        // of the measure gamma dv, evaluated at x
        double acc = 0;
        for (int j = mi.jmin; j <= mi.n; ++j) {
            double wm = to_double(mi.weight(j));
            if (wm == 0) continue;
            PAdic x = PAdic::from_rational(f, 1, 1).shifted(j);
            if (j == mi.n && mi.kind == MeasureKind::dirac && mi.center.is_zero()) {
                acc += wm * to_double(g.total());  // F(gamma)(0) = total mass
            } else {
                acc += wm * to_double(charfun_radial(g, x));
            }
        }
        if (mi.tail != Rat(0)) {
            // |F(gamma)| <= 1: a few explicit tail shells, remainder bounded
            // by the leftover tail mass (loose but within the 5e-3 budget)
            for (int j = mi.jmin - 1; j > mi.jmin - 40; --j) {
                PAdic x = PAdic::from_rational(f, 1, 1).shifted(j);
                acc += to_double(mi.tail_weight(j)) * to_double(charfun_radial(g, x));
            }
        }
        out *= acc;
    }
    return out;
}

}  // namespace nam
