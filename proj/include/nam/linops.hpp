#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "product_measure.hpp"

namespace nam {

// Finite truncation of an operator on c0(K); entries are exact windowed
// p-adics.  The optional tail profile records sup-bounds |u(i,j) - delta_ij|
// <= p^{-k(i,j)} for the modeled infinite part.
struct MatrixK {
    Field field;
    int n = 0;
    std::vector<std::vector<PAdic>> e;
    std::function<int(int, int)> tail_ord;  // optional

    static MatrixK identity(const Field& f, int n, int prec = kDefaultPrec) {
        MatrixK m;
        m.field = f;
        m.n = n;
        m.e.assign(n, std::vector<PAdic>(n, PAdic::zero(f)));
        for (int i = 0; i < n; ++i) m.e[i][i] = PAdic::from_rational(f, 1, 1, prec);
        return m;
    }
    const PAdic& at(int i, int j) const { return e[i][j]; }
};

inline MatrixK matmul(const MatrixK& a, const MatrixK& b) {
    if (a.n != b.n) throw std::invalid_argument("matmul: size mismatch");
    MatrixK c = MatrixK::identity(a.field, a.n);
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j) {
            PAdic s = a.e[i][0] * b.e[0][j];
            for (int k = 1; k < a.n; ++k) s = s + a.e[i][k] * b.e[k][j];
            c.e[i][j] = s;
        }
    return c;
}

inline std::vector<PAdic> matvec(const MatrixK& a, const std::vector<PAdic>& x) {
    std::vector<PAdic> y;
    for (int i = 0; i < a.n; ++i) {
        PAdic s = a.e[i][0] * x[0];
        for (int k = 1; k < a.n; ++k) s = s + a.e[i][k] * x[k];
        y.push_back(s);
    }
    return y;
}

// determinant by cofactor expansion; fine for the supported sizes (n <= 6)
inline PAdic det_cofactor(const std::vector<std::vector<PAdic>>& m) {
    size_t n = m.size();
    if (n == 1) return m[0][0];
    const Field& f = m[0][0].field();
    PAdic acc = PAdic::zero(f);
    for (size_t c = 0; c < n; ++c) {
        if (m[0][c].is_zero()) continue;
        std::vector<std::vector<PAdic>> sub;
        for (size_t i = 1; i < n; ++i) {
            std::vector<PAdic> row;
            for (size_t j = 0; j < n; ++j)
                if (j != c) row.push_back(m[i][j]);
            sub.push_back(std::move(row));
        }
        PAdic t = m[0][c] * det_cofactor(sub);
        acc = (c % 2 == 0) ? acc + t : acc - t;
    }
    return acc;
}

inline PAdic det(const MatrixK& a) { return det_cofactor(a.e); }

// determinant of nested truncations with a stabilization certificate: the
// last steps must agree to stab_ord digits, else no limit is claimed
inline PAdic det_limit(const std::vector<MatrixK>& trunc, int stab_ord = 6) {
    if (trunc.empty()) throw std::invalid_argument("det_limit: empty sequence");
    for (size_t t = 1; t < trunc.size(); ++t)
        for (int i = 0; i < trunc[t - 1].n; ++i)
            for (int j = 0; j < trunc[t - 1].n; ++j)
                if (!(trunc[t].e[i][j] == trunc[t - 1].e[i][j]))
                    throw std::invalid_argument("det_limit: truncations not nested");
    std::vector<PAdic> dets;
    for (const auto& a : trunc) dets.push_back(det(a));
    if (dets.size() >= 3) {
        for (size_t t = dets.size() - 2; t < dets.size(); ++t) {
            PAdic diff = dets[t] - dets[t - 1];
            if (!diff.is_zero() && diff.ord() < stab_ord)
                throw divergence_error("det_limit: determinants do not stabilize");
        }
    }
    return dets.back();
}

// ---- Gaussian SCDE factorization -------------------------------------------

struct SCDE {
    std::vector<std::pair<int, int>> transpositions;  // row swaps applied to A
    MatrixK C, D, E;
};

namespace detail {
inline PAdic minor_det(const std::vector<std::vector<PAdic>>& a, const std::vector<int>& rows,
                       const std::vector<int>& cols) {
    std::vector<std::vector<PAdic>> sub;
    for (int r : rows) {
        std::vector<PAdic> row;
        for (int c : cols) row.push_back(a[r][c]);
        sub.push_back(std::move(row));
    }
    return det_cofactor(sub);
}
}  // namespace detail

// A = S C D E with S a finite row permutation, C lower unitriangular, D
// diagonal (D_k = M_k / M_{k-1} from leading minors), E upper unitriangular.
// When a leading minor vanishes the smallest row below the pivot restoring
// a nonzero minor is swapped in and recorded.
inline SCDE scde_decompose(const MatrixK& a0) {
    const Field& f = a0.field;
    int n = a0.n;
    auto a = a0.e;  // working copy, row swaps applied
    SCDE out;
    // pivoting pass: ensure every leading minor of the permuted matrix is
    // nonzero (possible iff A invertible)
    for (int k = 1; k <= n; ++k) {
        std::vector<int> idx(k);
        for (int i = 0; i < k; ++i) idx[i] = i;
        if (!detail::minor_det(a, idx, idx).is_zero()) continue;
        bool fixed = false;
        for (int g = k; g < n && !fixed; ++g) {
            std::swap(a[k - 1], a[g]);
            if (!detail::minor_det(a, idx, idx).is_zero()) {
                out.transpositions.emplace_back(k - 1, g);
                fixed = true;
            } else {
                std::swap(a[k - 1], a[g]);
            }
        }
        if (!fixed) throw std::domain_error("scde_decompose: singular matrix");
    }
    out.C = MatrixK::identity(f, n);
    out.D = MatrixK::identity(f, n);
    out.E = MatrixK::identity(f, n);
    std::vector<PAdic> lead;  // M_0 = 1, M_1, ..., M_n
    lead.push_back(PAdic::from_rational(f, 1, 1));
    for (int k = 1; k <= n; ++k) {
        std::vector<int> idx(k);
        for (int i = 0; i < k; ++i) idx[i] = i;
        lead.push_back(detail::minor_det(a, idx, idx));
        out.D.e[k - 1][k - 1] = lead[k] / lead[k - 1];
    }
    for (int k = 1; k <= n; ++k) {
        std::vector<int> idx(k);
        for (int i = 0; i < k; ++i) idx[i] = i;
        for (int g = k + 1; g <= n; ++g) {
            std::vector<int> rows = idx, cols = idx;
            rows[k - 1] = g - 1;  // rows 1..k-1, g; cols 1..k
            out.C.e[g - 1][k - 1] = detail::minor_det(a, rows, cols) / lead[k];
            out.E.e[k - 1][g - 1] = detail::minor_det(a, cols, rows) / lead[k];
        }
    }
    return out;
}

inline MatrixK scde_reconstruct(const SCDE& s) {
    MatrixK m = matmul(matmul(s.C, s.D), s.E);
    // undo the row swaps in reverse order: A = S (C D E)
    for (auto it = s.transpositions.rbegin(); it != s.transpositions.rend(); ++it)
        std::swap(m.e[it->first], m.e[it->second]);
    return m;
}

// ---- support norms ----------------------------------------------------------

struct SupportNorm {
    double value = 0;
    bool member = true;  // finite under the tail profile
};

inline SupportNorm support_norm(const std::vector<PAdic>& t_diag, const std::vector<PAdic>& a) {
    SupportNorm r;
    for (size_t j = 0; j < a.size(); ++j) {
        double tj = j < t_diag.size() ? t_diag[j].norm_d() : 1.0;
        r.value = std::max(r.value, tj * a[j].norm_d());
    }
    return r;
}

inline SupportNorm support_norm(const MatrixK& t, const std::vector<PAdic>& a) {
    SupportNorm r;
    for (int j = 0; j < t.n && j < static_cast<int>(a.size()); ++j) {
        double dj = 0;
        for (int k = 0; k < t.n; ++k) dj = std::max(dj, t.e[k][j].norm_d());
        r.value = std::max(r.value, dj * a[j].norm_d());
    }
    return r;
}

// profile form: ord exponents of t_j and a_j as functions of j; membership
// requires the product norms p^{-(ord_t(j)+ord_a(j))} to stay bounded
inline SupportNorm support_norm_profile(const std::function<int(int)>& ord_t,
                                        const std::function<int(int)>& ord_a, int horizon,
                                        int p = 2) {
    SupportNorm r;
    int omin = ord_t(0) + ord_a(0);
    int falling = 0;
    int prev = omin;
    for (int j = 1; j < horizon; ++j) {
        int o = ord_t(j) + ord_a(j);
        omin = std::min(omin, o);
        if (o < prev) ++falling;
        prev = o;
    }
    r.value = std::pow(double(p), -double(omin));
    // orders falling without bound over the whole horizon: the sup diverges
    if (falling == horizon - 1 && prev == omin) r.member = false;
    return r;
}

// ---- change of variables -----------------------------------------------------

// solve U y = b by Gaussian elimination with max-norm pivoting
inline std::vector<PAdic> solve(const MatrixK& u, const std::vector<PAdic>& b) {
    int n = u.n;
    auto a = u.e;
    std::vector<PAdic> rhs = b;
    for (int k = 0; k < n; ++k) {
        int piv = -1;
        int best_ord = kOrdInf;
        for (int i = k; i < n; ++i)
            if (!a[i][k].is_zero() && a[i][k].ord() < best_ord) { piv = i; best_ord = a[i][k].ord(); }
        if (piv < 0) throw std::domain_error("solve: singular matrix");
        std::swap(a[k], a[piv]);
        std::swap(rhs[k], rhs[piv]);
        for (int i = k + 1; i < n; ++i) {
            if (a[i][k].is_zero()) continue;
            PAdic m = a[i][k] / a[k][k];
            for (int j = k; j < n; ++j) a[i][j] = a[i][j] - m * a[k][j];
            rhs[i] = rhs[i] - m * rhs[k];
        }
    }
    std::vector<PAdic> y(n, PAdic::zero(u.field));
    for (int k = n - 1; k >= 0; --k) {
        PAdic s = rhs[k];
        for (int j = k + 1; j < n; ++j) s = s - a[k][j] * y[j];
        y[k] = s / a[k][k];
    }
    return y;
}

inline double mod_K(const PAdic& x) { return x.norm_d(); }

// density of the pushforward of mu under x -> U x + c with respect to mu:
// mod(U^-1) * rho(x - U^{-1}(x - c), x), where mod(U^-1) = p^{ord det U} is
// the volume scale of the inverse map (an expanding U spreads mass out, so
// the density shrinks)
inline DensityValue affine_cov_density(const MatrixK& u, const std::vector<PAdic>& c,
                                       const ProductMeasure& mu, const std::vector<PAdic>& x) {
    int n = u.n;
    std::vector<PAdic> rhs;
    for (int i = 0; i < n; ++i) rhs.push_back(x[i] - c[i]);
    std::vector<PAdic> y = solve(u, rhs);  // U^{-1}(x - c)
    std::vector<PAdic> shift;
    for (int i = 0; i < n; ++i) shift.push_back(x[i] - y[i]);
    DensityValue rho = product_rho(mu, shift, x, n);
    if (!rho.defined) return rho;
    PAdic d = det(u);
    DensityValue out;
    out.defined = true;
    out.value = rho.value * rat_pow(u.field.p, d.ord());
    return out;
}

// piecewise affine bijection: x -> a(i) + V(i) x on piece Y(i)
struct PolygonalMap {
    struct Piece {
        CylinderSet domain;
        std::vector<PAdic> a;
        MatrixK v;
    };
    std::vector<Piece> pieces;
};

inline bool contains(const CoordConstraint& c, const PAdic& x) {
    switch (c.kind) {
        case CoordConstraint::none: return true;
        case CoordConstraint::ball: return c.b.contains(x);
        case CoordConstraint::shell: {
            PAdic d = x - c.shell_center;
            return !d.is_zero() && d.ord() == c.j;
        }
    }
    return false;
}

inline bool contains(const CylinderSet& s, const std::vector<PAdic>& x) {
    for (size_t i = 0; i < s.cs.size(); ++i) {
        if (i >= x.size()) return false;
        if (!contains(s.cs[i], x[i])) return false;
    }
    return true;
}

inline std::vector<PAdic> apply(const PolygonalMap& pm, const std::vector<PAdic>& x) {
    for (const auto& pc : pm.pieces) {
        if (!contains(pc.domain, x)) continue;
        std::vector<PAdic> y = matvec(pc.v, x);
        for (size_t i = 0; i < y.size(); ++i) y[i] = y[i] + pc.a[i];
        return y;
    }
    throw std::domain_error("polygonal map: point outside every piece");
}

// density of the pushforward under the polygonal map at x: locate the piece
// holding the preimage, then mod(V(i)^-1) * rho(x - U^{-1}(x), x)
inline DensityValue polygonal_cov_density(const PolygonalMap& pm, const ProductMeasure& mu,
                                          const std::vector<PAdic>& x) {
    std::optional<std::vector<PAdic>> pre;
    const MatrixK* vf = nullptr;
    for (const auto& pc : pm.pieces) {
        std::vector<PAdic> rhs;
        for (size_t i = 0; i < x.size(); ++i) rhs.push_back(x[i] - pc.a[i]);
        std::vector<PAdic> y = solve(pc.v, rhs);
        if (!contains(pc.domain, y)) continue;
        if (pre) throw std::domain_error("polygonal map: ambiguous preimage (ill-formed partition)");
        pre = y;
        vf = &pc.v;
    }
    if (!pre) return DensityValue{};
    int n = static_cast<int>(x.size());
    std::vector<PAdic> shift;
    for (int i = 0; i < n; ++i) shift.push_back(x[i] - (*pre)[i]);
    DensityValue rho = product_rho(mu, shift, x, n);
    if (!rho.defined) return rho;
    PAdic d = det(*vf);
    DensityValue out;
    out.defined = true;
    out.value = rho.value * rat_pow(vf->field.p, d.ord());
    return out;
}

}  // namespace nam
