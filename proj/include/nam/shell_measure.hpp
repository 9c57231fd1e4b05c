#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <vector>

#include "cyclotomic.hpp"
#include "errors.hpp"
#include "field.hpp"

namespace nam {

enum class MeasureKind { custom, thm320, exp_q, dirac };

// Radial probability measure on K with an optional center: exact weight w_j
// on the shell {|x - x0| = p^-j} for j in [jmin, n) and on the terminal ball
// {|x - x0| <= p^-n}.  Mass below the window floor (shells j < jmin) is kept
// as a single analytic tail number; presets can answer queries inside the
// tail analytically, custom measures raise a coverage error there.
struct ShellMeasure1D {
    Field field;
    MeasureKind kind = MeasureKind::custom;
    int jmin = 0;
    int n = 0;
    std::vector<Rat> w;  // index j - jmin, size n - jmin + 1
    Rat tail = Rat(0);   // mass of shells j < jmin
    PAdic center;        // x0

    // thm320 parameters (weight ratio between consecutive shells is ratio320)
    Rat ratio320 = Rat(0);  // r^(-n)
    // exp preset parameters
    double xi_norm = 0.0;
    int q = 0;
    double cprime = 1.0;

    Rat weight(int j) const {
        if (j >= jmin && j <= n) return w[j - jmin];
        if (j > n) throw std::invalid_argument("weight: no shell beyond the terminal ball");
        return tail_weight(j);
    }

    // analytic weight of a shell strictly below the window floor
    Rat tail_weight(int j) const {
        switch (kind) {
            case MeasureKind::thm320: {
                Rat v = w[0];
                for (int k = jmin; k > j; --k) v *= ratio320;
                return v;
            }
            case MeasureKind::exp_q: {
                double t = std::pow(double(field.p), -double(j)) / (cprime * xi_norm);
                double ex = std::pow(t, q);
                if (ex > 700) return Rat(0);  // underflows past any Haar volume
                double vol = std::pow(double(field.p), -double(j)) * (1.0 - 1.0 / field.p);
                return rationalize(vol * std::exp(-ex) * exp_norm);
            }
            case MeasureKind::dirac:
                return Rat(0);
            default:
                throw coverage_error("tail_weight: query below the window of a custom measure");
        }
    }

    // sum of the weights of all shells k <= j (j below the window floor)
    Rat tail_mass_upto(int j) const {
        if (j >= jmin) throw std::invalid_argument("tail_mass_upto: inside window");
        switch (kind) {
            case MeasureKind::thm320:
                // geometric: w(j) * (1 + rho + rho^2 + ...)
                return tail_weight(j) / (Rat(1) - ratio320);
            case MeasureKind::exp_q: {
                Rat s(0);
                for (int k = j; k > j - 64; --k) {
                    Rat t = tail_weight(k);
                    s += t;
                    if (to_double(t) < 1e-300) break;
                }
                return s;
            }
            case MeasureKind::dirac:
                return Rat(0);
            default:
                throw coverage_error("tail_mass_upto: custom measure has no analytic tail");
        }
    }

    double exp_norm = 1.0;  // cached normalizer for exp-preset tail queries

    Rat shell_volume(int j) const {
        if (j < n) return rat_pow(field.p, -j) * Rat(field.p - 1, field.p);
        return rat_pow(field.p, -n);
    }

    // per-shell density value f(j) = w_j / vol(S_j)
    Rat density(int j) const { return weight(j) / shell_volume(std::min(j, n)); }

    // shell index of x (relative to the center), clipped to the terminal ball
    int shell_of(const PAdic& x) const {
        PAdic y = x - center;
        if (y.is_zero()) return n;
        return std::min(y.ord(), n);
    }

    Rat total() const {
        Rat s = tail;
        for (const Rat& v : w) s += v;
        return s;
    }
};

inline ShellMeasure1D dirac_measure(const Field& f, const PAdic& at) {
    ShellMeasure1D m;
    m.field = f;
    m.kind = MeasureKind::dirac;
    m.jmin = 0;
    m.n = 0;
    m.w = {Rat(1)};
    m.center = at;
    return m;
}

// Geometric shell weights a(j,n) = r^{n(j-n)} (1-r^{-n}) (1-1/p) p^{-n}
// for j < n and a(n,n) = (1-r^{-2n}) p^{-n}, with the (geometric) mass of
// the shells below j_min summed analytically and the total renormalized to
// exactly 1.
inline ShellMeasure1D shell_measure_thm320(const Field& f, int n, const Rat& r, int jmin) {
    if (r <= Rat(1)) throw divergence_error("shell_measure_thm320: r must exceed 1");
    if (jmin >= n) throw std::invalid_argument("shell_measure_thm320: j_min must be below n");
    ShellMeasure1D m;
    m.field = f;
    m.kind = MeasureKind::thm320;
    m.jmin = jmin;
    m.n = n;
    m.center = PAdic::zero(f);
    Rat rn = rat_pow(r, -n);  // ratio a(j-1)/a(j)
    m.ratio320 = rn;
    Rat pn = rat_pow(f.p, -n);
    Rat base = (Rat(1) - rn) * Rat(f.p - 1, f.p) * pn;
    m.w.resize(n - jmin + 1);
    Rat aj = base;  // a(n-1, n) = r^{-n} * base ... build downward from j = n-1
    for (int j = n - 1; j >= jmin; --j) {
        aj = base * rat_pow(r, n * (j - n));
        m.w[j - jmin] = aj;
    }
    m.w[n - jmin] = (Rat(1) - rat_pow(r, -2 * n)) * pn;
    // analytic lower tail: geometric with ratio r^-n
    m.tail = m.w[0] * rn / (Rat(1) - rn);
    Rat Z = m.total();
    for (Rat& v : m.w) v /= Z;
    m.tail /= Z;
    return m;
}

namespace detail {

// q-th moment of the normalized radial weights exp(-(p^-j/(k*|xi|))^q),
// divided by |xi|^q; used to calibrate the internal scale of exp_measure
inline double exp_moment_ratio(int p, int q, double kappa) {
    double num = 0, den = 0;
    for (int v = -220; v <= 60; ++v) {
        double pv = std::pow(double(p), v);
        double e = std::exp(-std::pow(pv / kappa, q));
        num += std::pow(pv, q) * pv * e;
        den += pv * e;
    }
    return num / den;
}

}  // namespace detail

// Measure with density C(xi) exp(-|(x-x0)/(C' xi)|^q) against Haar measure,
// in shell-weight form.  Two constants are fixed: C makes the mass 1 and
// the internal scale C' is calibrated so that the q-th moment identity
// int |x-x0|^q dnu = |xi|^q  holds exactly on shell sums (a real-variable
// scaling argument gives the identity only after this calibration).
inline ShellMeasure1D exp_measure(const Field& f, const PAdic& xi, const PAdic& x0, int q,
                                  int jmin, int n, double tol = 1e-12) {
    if (xi.is_zero()) throw std::invalid_argument("exp_measure: xi must be nonzero");
    if (q < 1) throw std::invalid_argument("exp_measure: q must be positive");
    // calibrate kappa in [1, p] with moment ratio 1 (log-periodic, so a root
    // exists in one period; bisect on a sign change)
    double lo = 1.0, hi = double(f.p);
    double flo = detail::exp_moment_ratio(f.p, q, lo) - 1.0;
    double fhi = detail::exp_moment_ratio(f.p, q, hi) - 1.0;
    if (flo * fhi > 0) {
        // scan one period for a bracket
        bool found = false;
        double prev = lo, fprev = flo;
        for (int i = 1; i <= 64 && !found; ++i) {
            double x = 1.0 + (double(f.p) - 1.0) * i / 64.0;
            double fx = detail::exp_moment_ratio(f.p, q, x) - 1.0;
            if (fprev * fx <= 0) { lo = prev; flo = fprev; hi = x; found = true; }
            prev = x; fprev = fx;
        }
        if (!found) throw divergence_error("exp_measure: moment calibration has no root");
    }
    for (int i = 0; i < 80; ++i) {
        double mid = 0.5 * (lo + hi);
        double fm = detail::exp_moment_ratio(f.p, q, mid) - 1.0;
        if (flo * fm <= 0) hi = mid; else { lo = mid; flo = fm; }
    }
    double kappa = 0.5 * (lo + hi);

    ShellMeasure1D m;
    m.field = f;
    m.kind = MeasureKind::exp_q;
    m.jmin = jmin;
    m.n = n;
    m.center = x0;
    m.xi_norm = xi.norm_d();
    m.q = q;
    m.cprime = kappa;
    m.w.resize(n - jmin + 1);
    double scale = kappa * m.xi_norm;
    auto raw = [&](int j) {
        double vol = std::pow(double(f.p), -double(j)) * (1.0 - 1.0 / f.p);
        return vol * std::exp(-std::pow(std::pow(double(f.p), -double(j)) / scale, q));
    };
    double Z = 0;
    for (int v = -220; v <= 60; ++v) {
        double pv = std::pow(double(f.p), v);
        Z += pv * (1.0 - 1.0 / f.p) * std::exp(-std::pow(pv / scale, q));
    }
    double inwin = 0;
    for (int j = jmin; j < n; ++j) inwin += raw(j);
    // terminal ball: everything below radius p^-n
    double term = 0;
    for (int j = n; j < n + 400; ++j) term += raw(j);
    inwin += term;
    if ((Z - inwin) / Z > tol)
        throw coverage_error("exp_measure: window does not hold 1 - tol of the mass");
    for (int j = jmin; j < n; ++j) m.w[j - jmin] = rationalize(raw(j) / Z);
    m.w[n - jmin] = rationalize(term / Z);
    m.exp_norm = 1.0 / Z;
    // force exact total mass 1 by absorbing the rounding into the terminal ball
    Rat s(0);
    for (int j = jmin; j < n; ++j) s += m.w[j - jmin];
    m.tail = rationalize((Z - inwin) / Z);
    m.w[n - jmin] = Rat(1) - s - m.tail;
    return m;
}

// custom measure from explicit weights (normalized; zero analytic tail)
inline ShellMeasure1D custom_measure(const Field& f, int jmin, std::vector<Rat> weights,
                                     const PAdic& center) {
    ShellMeasure1D m;
    m.field = f;
    m.kind = MeasureKind::custom;
    m.jmin = jmin;
    m.n = jmin + static_cast<int>(weights.size()) - 1;
    m.w = std::move(weights);
    m.center = center;
    Rat Z = m.total();
    if (Z == Rat(0)) throw std::invalid_argument("custom_measure: zero mass");
    for (Rat& v : m.w) v /= Z;
    return m;
}

// ---- mass of sets --------------------------------------------------------

inline Rat mass_of_shell(const ShellMeasure1D& m, int j) {
    if (m.kind == MeasureKind::dirac) return j >= m.n ? Rat(1) : Rat(0);
    return m.weight(j);
}

// mass of a ball under the measure (exact ultrametric geometry: the ball is
// either centered, inside one shell, or contains the whole window)
inline Rat mass_of_ball(const ShellMeasure1D& m, const Ball& b) {
    const Field& f = m.field;
    PAdic c = b.center - m.center;
    if (m.kind == MeasureKind::dirac)
        return (c.is_zero() || c.ord() >= b.m) ? Rat(1) : Rat(0);
    if (c.is_zero() || c.ord() >= b.m) {
        // centered ball B(0, p^-m): all shells j >= b.m
        int mm = b.m;
        if (mm > m.n) {
            // strictly inside the terminal ball: uniform density there
            return m.w[m.n - m.jmin] * rat_pow(f.p, m.n - mm);
        }
        Rat s(0);
        for (int j = std::max(mm, m.jmin); j <= m.n; ++j) s += m.w[j - m.jmin];
        if (mm < m.jmin && m.tail != Rat(0)) {
            // includes the tail shells j in [mm, jmin): subtract what stays outside
            s += m.tail - m.tail_mass_upto(mm - 1);
        }
        return s;
    }
    // ball away from the center: contained in the shell of its own center
    int j0 = c.ord();
    if (j0 < m.jmin && m.tail == Rat(0)) return Rat(0);  // beyond a full window
    Rat dens = j0 <= m.n ? m.weight(std::min(j0, m.n)) / m.shell_volume(std::min(j0, m.n))
                         : m.w[m.n - m.jmin] / m.shell_volume(m.n);
    return dens * rat_pow(f.p, -b.m);
}

// ---- shifted masses and densities ----------------------------------------

// Exact decomposition of the mass transport under x -> x + a: for each cell
// (shell or terminal ball) of the original measure, the fractions of its
// mass that land in each cell of the measure around the shifted center.
// Cells are indexed j in [jmin, n] with j = n meaning the terminal ball.
// Returns, for source cell j, a map target cell -> fraction (fractions of
// the source cell's own volume, independent of the weights).
//
// Geometry (j0 = ord(a), all relative to the center):
//   source shell j != j0 maps to shell min(j, j0) entirely;
//   the terminal ball maps into shell j0 (when j0 < n);
//   shell j0 splits: a fraction (1-2/p)/(1-1/p) stays in shell j0, a
//   fraction p^{j0-k} lands in each shell k > j0 and p^{j0-n} p/(p-1) in
//   the terminal ball.
inline std::map<int, std::map<int, Rat>> shift_cells(const ShellMeasure1D& m, const PAdic& a) {
    const Field& f = m.field;
    std::map<int, std::map<int, Rat>> out;
    if (a.is_zero() || a.ord() >= m.n) {
        for (int j = m.jmin; j <= m.n; ++j) out[j][j] = Rat(1);
        return out;
    }
    int j0 = a.ord();
    for (int j = m.jmin; j <= m.n; ++j) {
        if (j == j0 && j < m.n) {
            if (f.p > 2) out[j][j] = Rat(f.p - 2, f.p - 1);
            for (int k = j0 + 1; k < m.n; ++k) out[j][k] = rat_pow(f.p, j0 - k);
            out[j][m.n] = rat_pow(f.p, j0 - m.n) * Rat(f.p, f.p - 1);
        } else {
            out[j][std::min(j, j0)] = Rat(1);
        }
    }
    return out;
}

struct DensityValue {
    Rat value = Rat(0);
    bool defined = false;
};

// Radon-Nikodym density d mu(. - a) / d mu at the point x, exact.  Undefined
// (defined = false) when the denominator cell has zero mass, or when either
// point falls below the window of a custom measure.
inline DensityValue shift_density(const ShellMeasure1D& m, const PAdic& a, const PAdic& x) {
    DensityValue r;
    if (m.kind == MeasureKind::dirac) {
        // translate of a point mass is singular unless a = 0
        if (a.is_zero() || a.ord() >= m.n) { r.value = Rat(1); r.defined = true; }
        return r;
    }
    auto dens = [&](int j) -> std::optional<Rat> {
        if (j < m.jmin && m.kind == MeasureKind::custom) return std::nullopt;
        return m.density(std::min(j, m.n));
    };
    PAdic ys = x - a - m.center;
    PAdic yt = x - m.center;
    int rjs = ys.is_zero() ? m.n : std::min(ys.ord(), m.n);
    int rjt = yt.is_zero() ? m.n : std::min(yt.ord(), m.n);
    auto num = dens(rjs), den = dens(rjt);
    if (!num || !den || *den == Rat(0)) return r;
    r.value = *num / *den;
    r.defined = true;
    return r;
}

// ---- convolution ----------------------------------------------------------

// Convolution of two windowed measures with zero analytic tail, computed via
// coefficients against the idempotent family of centered ball Haar measures
// H_j (H_j * H_k = H_{min(j,k)}).  Centers add.
inline ShellMeasure1D convolve(const ShellMeasure1D& a, const ShellMeasure1D& b) {
    if (a.field.p != b.field.p || a.field.kind != b.field.kind)
        throw std::invalid_argument("convolve: mismatched fields");
    if (a.kind == MeasureKind::dirac) {
        ShellMeasure1D out = b;
        out.center = b.center + a.center;
        return out;
    }
    if (b.kind == MeasureKind::dirac) return convolve(b, a);
    if (a.tail != Rat(0) || b.tail != Rat(0))
        throw coverage_error("convolve: needs measures with zero analytic tail");
    const Field& f = a.field;
    // express each as sum_j c_j H_j: uniform measure on shell j equals
    // (p H_j - H_{j+1}) / (p - 1); the terminal ball weight sits on H_n
    auto coeffs = [&](const ShellMeasure1D& m) {
        std::map<int, Rat> c;
        for (int j = m.jmin; j < m.n; ++j) {
            Rat wj = m.w[j - m.jmin];
            c[j] += wj * Rat(f.p, f.p - 1);
            c[j + 1] -= wj * Rat(1, f.p - 1);
        }
        c[m.n] += m.w[m.n - m.jmin];
        return c;
    };
    auto ca = coeffs(a), cb = coeffs(b);
    std::map<int, Rat> cc;
    for (auto& [j, x] : ca)
        for (auto& [k, y] : cb) cc[std::min(j, k)] += x * y;
    int jlo = cc.begin()->first, jhi = cc.rbegin()->first;
    // convert back: mass of shell j is (coefficient mass of H_j family)
    // H_j gives shell k >= j mass (1-1/p)p^{k-j}... easier: mass of ball
    // B(0, p^-t) under sum c_j H_j is sum_j c_j min(1, p^{j-t}).
    auto ball_mass = [&](int t) {
        Rat s(0);
        for (auto& [j, cj] : cc) s += cj * (j >= t ? Rat(1) : rat_pow(f.p, j - t));
        return s;
    };
    ShellMeasure1D out;
    out.field = f;
    out.kind = MeasureKind::custom;
    out.jmin = jlo;
    out.n = jhi;
    out.center = a.center + b.center;
    out.w.resize(jhi - jlo + 1);
    for (int j = jlo; j < jhi; ++j) out.w[j - jlo] = ball_mass(j) - ball_mass(j + 1);
    out.w[jhi - jlo] = ball_mass(jhi);
    return out;
}

// ---- characteristic function ----------------------------------------------

// Exact average of the standard character over the shells: with e = -ord(z),
// the average of chi(z x) over the unit-normalized shell |x| = p^-j is 1 for
// e <= j, -1/(p-1) for e = j + 1 and 0 otherwise; over the terminal ball it
// is the indicator of e <= n.
inline Rat charfun_radial(const ShellMeasure1D& m, const PAdic& z) {
    if (z.is_zero()) return m.total();
    int e = -z.ord();
    Rat s(0);
    for (int j = m.jmin; j < m.n; ++j) {
        if (e <= j) s += m.w[j - m.jmin];
        else if (e == j + 1) s -= m.w[j - m.jmin] / Rat(m.field.p - 1);
    }
    if (e <= m.n) s += m.w[m.n - m.jmin];
    if (m.tail != Rat(0)) {
        // tail shells j < jmin: contribute 1 when e <= j, i.e. e < jmin
        if (e < m.jmin) {
            // shells j in [e, jmin) give 1, shell e-1 gives -1/(p-1), below 0
            Rat inc = m.tail - m.tail_mass_upto(e - 1);
            s += inc;
            if (e - 1 < m.jmin) s -= m.tail_weight(e - 1) / Rat(m.field.p - 1);
        } else if (e == m.jmin) {
            s -= m.tail_weight(e - 1) / Rat(m.field.p - 1);
        }
    }
    return s;
}

// full characteristic function theta(z) = chi(z x0) * radial part
inline std::complex<double> charfun(const ShellMeasure1D& m, const PAdic& z) {
    double rad = to_double(charfun_radial(m, z));
    if (m.kind == MeasureKind::dirac) {
        if (z.is_zero()) return {1.0, 0.0};
        rad = 1.0;  // point mass: only the center phase
    }
    std::complex<double> ph{1.0, 0.0};
    if (!z.is_zero() && !m.center.is_zero()) ph = character_eval(z, m.center).to_complex();
    return ph * rad;
}

// ---- moments and Hellinger affinity ----------------------------------------

// int |x - x0|^q dmu as a double (terminal ball and analytic tails summed to
// machine precision)
inline double moment_q(const ShellMeasure1D& m, int q) {
    double s = 0;
    double p = m.field.p;
    for (int j = m.jmin; j < m.n; ++j)
        s += to_double(m.w[j - m.jmin]) * std::pow(p, -double(q) * j);
    // terminal ball: uniform on B(0, p^-n); int |x|^q over it against
    // normalized Haar is (1-1/p)/(1-p^{-q-1}) * p^{-qn}
    double term = to_double(m.w[m.n - m.jmin]);
    if (m.kind == MeasureKind::dirac) {
        // point mass at the center contributes nothing
        term = 0;
    } else if (m.kind == MeasureKind::exp_q) {
        // non-uniform inside the terminal ball: sum the true shell weights
        double scale = m.cprime * m.xi_norm;
        term = 0;
        for (int j = m.n; j < m.n + 400; ++j) {
            double pj = std::pow(p, -double(j));
            term += pj * (1.0 - 1.0 / p) *
                    std::exp(-std::pow(pj / scale, m.q)) * m.exp_norm * std::pow(pj, q);
        }
    } else {
        term *= (1.0 - 1.0 / p) / (1.0 - std::pow(p, -double(q) - 1.0)) * std::pow(p, -double(q) * m.n);
    }
    s += term;
    if (m.tail != Rat(0)) {
        for (int j = m.jmin - 1; j > m.jmin - 600; --j) {
            Rat wj = m.tail_weight(j);
            if (wj == Rat(0) && j < m.jmin - 4) break;
            double t = to_double(wj) * std::pow(p, -double(q) * j);
            s += t;
            if (t != 0 && t < 1e-18 * std::abs(s)) break;
        }
    }
    return s;
}

// Hellinger affinity between the measure and its translate by a:
// beta = int sqrt(d mu(.-a)/d mu) d mu, computed cell by cell with the exact
// shift decomposition (exact value 1 when |a| <= p^-n).
inline double hellinger_shift(const ShellMeasure1D& m, const PAdic& a) {
    if (a.is_zero() || a.ord() >= m.n) return 1.0;
    if (m.kind == MeasureKind::dirac) return 0.0;
    int j0 = a.ord();
    double tail_in = 0;
    if (m.tail != Rat(0)) {
        if (j0 >= m.jmin) {
            // tail shells stay below the window on both sides; the density
            // ratio is 1 there, so the tail contributes its full mass
            tail_in = to_double(m.tail);
        } else {
            throw coverage_error("hellinger_shift: shift larger than the window");
        }
    }
    // beta = sum over pieces P = {x in cell k, x - a in cell j} of
    // vol(P) sqrt(d_j d_k) where d_j is the (uniform) density on cell j.
    // shift_cells gives vol(P) as a fraction of vol(cell j).
    auto cells = shift_cells(m, a);
    double beta = tail_in;
    auto dens = [&](int j) { return to_double(m.weight(j)) / to_double(m.shell_volume(j)); };
    for (auto& [j, row] : cells) {
        double dj = dens(j);
        if (dj == 0) continue;
        double vj = to_double(m.shell_volume(j));
        for (auto& [k, frac] : row) {
            double dk = dens(k);
            if (dk == 0) continue;
            beta += to_double(frac) * vj * std::sqrt(dj * dk);
        }
    }
    return beta;
}

}  // namespace nam
