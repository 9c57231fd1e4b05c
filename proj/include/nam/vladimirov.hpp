#pragma once

#include "pseudodiff.hpp"

namespace nam {

// Normalization making the semigroup law hold on characters: with
// D^b = c_b PD(b, .), one gets D^b chi_xi = |xi|^b chi_xi, hence
// D^a D^b = D^{a+b}.  For b = 1 this is the familiar p^2/(p+1).
inline std::complex<double> vladimirov_const(int p, std::complex<double> b) {
    return (detail::cpow_p(p, 1.0, b) - 1.0) / (1.0 - detail::cpow_p(p, -1.0, 1.0 + b));
}

// integral of log_p |x - y| over the ball B(c, p^-m)
inline double log_kernel_ball(const Field& f, const PAdic& x, const Ball& ball) {
    double p = f.p;
    PAdic d = x - ball.center;
    if (!d.is_zero() && d.ord() < ball.m) {
        // constant distance p^{-ord}
        return double(-d.ord()) * std::pow(p, -double(ball.m));
    }
    // x inside: sum_{l >= m} (-l) (1 - 1/p) p^{-l}
    double r = 1.0 / p;
    double m = ball.m;
    double sum_l = std::pow(r, m) * (m - (m - 1.0) * r) / ((1.0 - r) * (1.0 - r));
    return -(1.0 - r) * sum_l;
}

// antidifferentiation: D^{-1} psi as the log-kernel convolution; the
// constant -(1 - 1/p) makes the kernel's transform equal |xi|^{-1} exactly
inline std::complex<double> vladimirov_antiderivative(const LcFn<std::complex<double>>& psi,
                                                      const PAdic& x) {
    if (!psi.compactly_supported())
        throw std::domain_error("vladimirov_antiderivative: needs compact support");
    const Field& f = psi.field;
    double kappa = -(1.0 - 1.0 / f.p);
    std::complex<double> acc{0, 0};
    for (const auto& [ball, v] : psi.pieces) acc += v * log_kernel_ball(f, x, ball);
    return kappa * acc;
}

// D^b psi(x) for locally constant compactly supported psi; direct kernel for
// Re b > 0, identity for b = 0, log-kernel antidifferentiation for b = -1
inline std::complex<double> vladimirov(std::complex<double> b,
                                       const LcFn<std::complex<double>>& psi, const PAdic& x,
                                       double tol = 1e-9) {
    if (b == std::complex<double>{0, 0}) return psi.eval(x);
    if (b == std::complex<double>{-1, 0}) return vladimirov_antiderivative(psi, x);
    if (b.real() <= 0) throw std::domain_error("vladimirov: direct kernel needs Re b > 0");
    return vladimirov_const(psi.field.p, b) * pd(b, psi, x, false, tol).value;
}

// Image of a compactly supported function under D^b: locally constant on
// B(0, p^L) plus an exact radial tail (A + B k) p^{-k s} at |x| = p^k, k > L.
struct RadialTailFn {
    LcFn<std::complex<double>> core;
    int L = 0;
    std::complex<double> A{0, 0}, B{0, 0}, s{0, 0};

    std::complex<double> eval(const PAdic& x) const {
        if (x.is_zero() || x.ord() >= -L) return core.eval(x);
        double k = -x.ord();
        return (A + B * k) * detail::cpow_p(core.field.p, -k, s);
    }
};

inline RadialTailFn vladimirov_fn(std::complex<double> b, const LcFn<std::complex<double>>& psi,
                                  int margin = 2) {
    const Field& f = psi.field;
    RadialTailFn g;
    g.L = psi.support_exponent() + margin;  // tail formulas valid outside the
                                            // support; margin widens the core
    int m = std::max(psi.constancy_exponent(), 0);
    g.core = LcFn<std::complex<double>>::zero_fn(f);
    for (const PAdic& c : detail::ball_centers(f, g.L, m))
        g.core.add_piece(Ball{c, m}, vladimirov(b, psi, c));
    std::complex<double> total = integrate_lc(psi);
    if (b == std::complex<double>{-1, 0}) {
        g.A = {0, 0};
        g.B = -(1.0 - 1.0 / f.p) * total;
        g.s = {0, 0};
    } else if (b == std::complex<double>{0, 0}) {
        g.A = g.B = {0, 0};
        g.s = {1, 0};
    } else {
        g.A = -vladimirov_const(f.p, b) * total;
        g.B = {0, 0};
        g.s = 1.0 + b;
    }
    return g;
}

namespace detail {
// sum_{k >= K} r^k and sum_{k >= K} k r^k for |r| < 1
inline std::complex<double> geo(std::complex<double> r, double K) {
    return std::pow(r, K) / (1.0 - r);
}
inline std::complex<double> geo_k(std::complex<double> r, double K) {
    return std::pow(r, K) * (K - (K - 1.0) * r) / ((1.0 - r) * (1.0 - r));
}
}  // namespace detail

// D^a g(x) for a RadialTailFn g, Re a > 0, |x| <= p^L: core shells are
// enumerated on the exact constancy refinement, the far region is summed in
// closed form against the radial tail
inline std::complex<double> vladimirov_apply(std::complex<double> a, const RadialTailFn& g,
                                             const PAdic& x) {
    if (a.real() <= 0) throw std::domain_error("vladimirov_apply: needs Re a > 0");
    const Field& f = g.core.field;
    int p = f.p;
    if (!x.is_zero() && x.ord() < -g.L)
        throw coverage_error("vladimirov_apply: point outside the core region");
    std::complex<double> gx = g.eval(x);
    int rc = g.core.constancy_exponent();
    std::complex<double> acc{0, 0};
    for (int l = -g.L; l < rc; ++l) {
        // sub-balls of radius p^-rc composing the shell |y - x| = p^-l
        long long count = 1;
        for (int i = 1; i < rc - l; ++i) count *= p;
        double subvol = std::pow(double(p), -double(rc));
        std::complex<double> shell{0, 0};
        for (long long u = 0; u < count; ++u)
            for (int lead = 1; lead < p; ++lead) {
                Int unit = Int(lead) + Int(p) * Int(u);
                PAdic y = x + PAdic::from_rational(f, unit, Int(1), rc - l + 2).shifted(l);
                shell += (gx - g.eval(y)) * subvol;
            }
        acc += shell * detail::cpow_p(p, l, 1.0 + a);
    }
    // far region |y| = p^k, k > L: |x - y| = p^k
    double K = g.L + 1;
    std::complex<double> ra = detail::cpow_p(p, -1.0, a);
    std::complex<double> rsa = detail::cpow_p(p, -1.0, g.s + a);
    std::complex<double> far = gx * detail::geo(ra, K) - g.A * detail::geo(rsa, K) -
                               g.B * detail::geo_k(rsa, K);
    acc += (1.0 - 1.0 / p) * far;
    return vladimirov_const(p, a) * acc;
}

}  // namespace nam
