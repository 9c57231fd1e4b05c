#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "locally_constant.hpp"
#include "shell_measure.hpp"

namespace nam {

// Finite truncation of a product measure on c0(K): independent coordinates,
// each a one-dimensional shell measure.
struct ProductMeasure {
    std::vector<ShellMeasure1D> components;
    int dim() const { return static_cast<int>(components.size()); }
};

// Per-coordinate constraint of a cylinder set: a ball, a shell (exact norm
// p^-j relative to the coordinate center of the constraint), or none.
struct CoordConstraint {
    enum Kind { none, ball, shell } kind = none;
    Ball b;      // for ball
    int j = 0;   // for shell: |x - shell_center| = p^-j
    PAdic shell_center;
};

struct CylinderSet {
    std::vector<CoordConstraint> cs;  // length <= dim; missing = unconstrained
};

inline Rat measure_mass(const ShellMeasure1D& m, const CoordConstraint& c) {
    switch (c.kind) {
        case CoordConstraint::none:
            return m.total();
        case CoordConstraint::ball:
            return mass_of_ball(m, c.b);
        case CoordConstraint::shell: {
            // exact norm set relative to c.shell_center
            PAdic d = c.shell_center - m.center;
            // strictly concentric only: an offset of exactly the shell radius
            // moves the set (unlike a ball, which absorbs such shifts)
            if (d.is_zero() || d.ord() > c.j) {
                // concentric: the measure's own cell (terminal shell = the
                // terminal ball by convention)
                if (c.j == m.n) return m.w[m.n - m.jmin];
                if (c.j > m.n) {
                    // exact-norm set strictly inside the terminal ball:
                    // uniform slice of it
                    return m.w[m.n - m.jmin] * rat_pow(m.field.p, m.n - c.j) *
                           Rat(m.field.p - 1, m.field.p);
                }
                return m.weight(c.j);
            }
            int j0 = d.ord();
            if (j0 > c.j) {
                // the shell lies inside one cell of the measure: uniform slice
                Rat vol = rat_pow(m.field.p, -c.j) * Rat(m.field.p - 1, m.field.p);
                return m.density(std::min(j0, m.n)) * vol;
            }
            if (j0 == c.j) {
                // shell around an off-center point at the same radius: it meets
                // the cells j0..n of the measure; decompose as ball minus ball
                Ball outer{c.shell_center, c.j}, inner{c.shell_center, c.j + 1};
                return mass_of_ball(m, outer) - mass_of_ball(m, inner);
            }
            // j0 < c.j: the whole shell sits in the measure's cell j0
            Rat vol = rat_pow(m.field.p, -c.j) * Rat(m.field.p - 1, m.field.p);
            return m.density(std::min(j0, m.n)) * vol;
        }
    }
    return Rat(0);
}

inline Rat measure_mass(const ProductMeasure& mu, const CylinderSet& s) {
    if (static_cast<int>(s.cs.size()) > mu.dim())
        throw coverage_error("measure_mass: cylinder base exceeds truncation");
    Rat out(1);
    for (size_t i = 0; i < s.cs.size(); ++i) out *= measure_mass(mu.components[i], s.cs[i]);
    return out;
}

// ---- quasi-invariance ------------------------------------------------------

// partial product rho(z, x) = prod_{j <= N} d(m_j; z_j, x_j)
inline DensityValue product_rho(const ProductMeasure& mu, const std::vector<PAdic>& z,
                                const std::vector<PAdic>& x, int N) {
    if (N > mu.dim() || N > static_cast<int>(z.size()) || N > static_cast<int>(x.size()))
        throw std::invalid_argument("product_rho: truncation exceeds inputs");
    DensityValue out;
    out.value = Rat(1);
    out.defined = true;
    for (int j = 0; j < N; ++j) {
        DensityValue d = shift_density(mu.components[j], z[j], x[j]);
        if (!d.defined) return DensityValue{};
        out.value *= d.value;
    }
    return out;
}

enum class KakutaniVerdict { equivalent_trend, singular_trend, inconclusive };

inline std::string to_string(KakutaniVerdict v) {
    switch (v) {
        case KakutaniVerdict::equivalent_trend: return "equivalent-trend";
        case KakutaniVerdict::singular_trend: return "singular-trend";
        default: return "inconclusive";
    }
}

struct KakutaniResult {
    std::vector<double> betas;
    KakutaniVerdict verdict = KakutaniVerdict::inconclusive;
};

// Hellinger criterion for product-measure equivalence under a shift
// sequence: beta_j per coordinate, verdict from the partial-product trend.
inline KakutaniResult kakutani_check(const std::vector<ShellMeasure1D>& components,
                                     const std::vector<PAdic>& shifts, int horizon) {
    if (components.size() != shifts.size())
        throw std::invalid_argument("kakutani_check: length mismatch");
    horizon = std::min<int>(horizon, static_cast<int>(components.size()));
    KakutaniResult r;
    double logprod = 0;
    bool singular = false;
    double last_increment = 0;
    for (int j = 0; j < horizon; ++j) {
        double b = hellinger_shift(components[j], shifts[j]);
        r.betas.push_back(b);
        if (b <= 0) { singular = true; last_increment = 1e9; continue; }
        last_increment = 1.0 - b;
        logprod += std::log(b);
    }
    if (singular || logprod < std::log(1e-9) || last_increment > 1e-3) {
        r.verdict = KakutaniVerdict::singular_trend;
    } else if (last_increment < 1e-9 && logprod > std::log(1e-3)) {
        r.verdict = KakutaniVerdict::equivalent_trend;
    } else {
        r.verdict = KakutaniVerdict::inconclusive;
    }
    return r;
}

// law of lambda * x when x follows m (shells shift by ord(lambda))
inline ShellMeasure1D scale_measure(const ShellMeasure1D& m, const PAdic& lambda) {
    if (lambda.is_zero()) throw std::invalid_argument("scale_measure: zero scalar");
    ShellMeasure1D out = m;
    int o = lambda.ord();
    out.jmin += o;
    out.n += o;
    out.center = lambda * m.center;
    if (out.kind == MeasureKind::exp_q) out.xi_norm *= lambda.norm_d();
    return out;
}

// int |x|^q dm about the origin (not the center); exact shell sums with the
// shift decomposition handling an off-origin center
inline double moment_about_zero(const ShellMeasure1D& m, double q) {
    double p = m.field.p;
    auto inball = [&](int n) {  // E|y|^q for y uniform on B(0, p^-n)
        return (1.0 - 1.0 / p) / (1.0 - std::pow(p, -q - 1.0)) * std::pow(p, -q * n);
    };
    const PAdic& c = m.center;
    if (c.is_zero() || c.ord() >= m.n) {
        double s = 0;
        for (int j = m.jmin; j < m.n; ++j)
            s += to_double(m.w[j - m.jmin]) * std::pow(p, -q * j);
        s += to_double(m.w[m.n - m.jmin]) *
             (m.kind == MeasureKind::dirac ? (c.is_zero() ? 0.0 : std::pow(c.norm_d(), q))
                                           : inball(m.n));
        if (m.tail != Rat(0)) {
            for (int j = m.jmin - 1; j > m.jmin - 600; --j) {
                Rat wj = m.tail_weight(j);
                if (wj == Rat(0) && j < m.jmin - 4) break;
                double t = to_double(wj) * std::pow(p, -q * j);
                s += t;
                if (t != 0 && t < 1e-18 * std::abs(s)) break;
            }
        }
        return s;
    }
    // x = c + y with y radial: distribution of |x| from the exact shift split
    if (m.tail != Rat(0)) throw coverage_error("moment_about_zero: off-origin center with tail");
    ShellMeasure1D m0 = m;
    m0.center = PAdic::zero(m.field);
    auto cells = shift_cells(m0, c);
    double s = 0;
    for (auto& [j, row] : cells) {
        double wj = to_double(m.weight(j));
        for (auto& [k, frac] : row)
            s += wj * to_double(frac) * (k == m.n ? inball(m.n) : std::pow(p, -q * k));
    }
    return s;
}

// psi_{q,mu}(z) = int |sum_j z_j x_j|^q dmu: the integrand's law is the
// convolution of the per-coordinate scaled laws, which stays exactly
// representable in shell form.
inline double moment_psi(const ProductMeasure& mu, const std::vector<PAdic>& z, double q) {
    std::vector<ShellMeasure1D> active;
    for (size_t i = 0; i < z.size() && i < mu.components.size(); ++i)
        if (!z[i].is_zero()) active.push_back(scale_measure(mu.components[i], z[i]));
    if (active.empty()) return 0.0;
    if (active.size() == 1) return moment_about_zero(active[0], q);
    ShellMeasure1D law = active[0];
    for (size_t i = 1; i < active.size(); ++i) law = convolve(law, active[i]);
    return moment_about_zero(law, q);
}

// ---- integration of locally constant functions against shell measures ------

inline double integrate_against(const LcFn<std::complex<double>>& f, const ShellMeasure1D& m,
                                double* imag_out = nullptr) {
    std::complex<double> acc{0, 0};
    Rat covered(0);
    for (const auto& [ball, value] : f.pieces) {
        Rat mass = mass_of_ball(m, ball);
        covered += mass;
        acc += value * to_double(mass);
    }
    acc += f.default_value * to_double(m.total() - covered);
    if (imag_out) *imag_out = acc.imag();
    return acc.real();
}

// ---- characteristic functional of a product measure -------------------------

inline std::complex<double> charfun(const ProductMeasure& mu, const std::vector<PAdic>& z) {
    std::complex<double> out{1, 0};
    for (size_t i = 0; i < z.size() && i < mu.components.size(); ++i)
        out *= charfun(mu.components[i], z[i]);
    return out;
}

// minimum eigenvalue of the Gram matrix G_{lj} = theta(z_l - z_j)
inline double positive_definite_probe(
    const std::function<std::complex<double>(const PAdic&)>& theta, const std::vector<PAdic>& zs) {
    const int n = static_cast<int>(zs.size());
    Eigen::MatrixXcd g(n, n);
    for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j) g(l, j) = theta(zs[l] - zs[j]);
    // symmetrize against roundoff; the exact Gram matrix is Hermitian
    Eigen::MatrixXcd h = 0.5 * (g + g.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    return es.eigenvalues().minCoeff();
}

// sup over sampled pairs (x, y) with |<x-y, S_c(x-y)>| < 1 of |Re(theta(y) - theta(x))|
inline double minlos_probe(
    const std::function<std::complex<double>(const std::vector<PAdic>&)>& theta,
    const std::vector<PAdic>& sc_diag,
    const std::vector<std::pair<std::vector<PAdic>, std::vector<PAdic>>>& pairs) {
    double sup = 0;
    for (const auto& [x, y] : pairs) {
        bool first = true;
        PAdic val;
        bool inside = true;
        for (size_t j = 0; j < sc_diag.size() && j < x.size(); ++j) {
            PAdic zj = x[j] - y[j];
            if (zj.is_zero()) continue;
            PAdic term = zj * sc_diag[j] * zj;
            if (first) { val = term; first = false; }
            else val = val + term;
        }
        if (!first && !val.is_zero() && val.ord() <= 0) inside = false;
        if (!inside) continue;
        double d = std::abs(std::real(theta(y) - theta(x)));
        sup = std::max(sup, d);
    }
    return sup;
}

}  // namespace nam
