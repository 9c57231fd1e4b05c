#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "cyclotomic.hpp"
#include "errors.hpp"
#include "field.hpp"

namespace nam {

// Value algebra used by the integration and Fourier routines.  The CycSum
// instantiation is the exact path; complex<double> is the numeric path.
template <class V>
struct value_ops;

template <>
struct value_ops<CycSum> {
    static CycSum zero(int p) { return CycSum(p); }
    static CycSum from_rat(int p, const Rat& r) { return CycSum::scalar(p, r); }
    static CycSum mul_phase(const CycSum& v, const Phase& ph, int p) {
        return v * CycSum::root(p, ph);
    }
    static CycSum scale(const CycSum& v, const Rat& r) { return v * r; }
    static std::complex<double> approx(const CycSum& v) { return v.to_complex(); }
};

template <>
struct value_ops<std::complex<double>> {
    using C = std::complex<double>;
    static C zero(int) { return {0.0, 0.0}; }
    static C from_rat(int, const Rat& r) { return {to_double(r), 0.0}; }
    static C mul_phase(const C& v, const Phase& ph, int) { return v * ph.to_complex(); }
    static C scale(const C& v, const Rat& r) { return v * to_double(r); }
    static C approx(const C& v) { return v; }
};

// Locally constant function: finitely many disjoint ball pieces over a
// default value (0 for compactly supported functions).
template <class V>
struct LcFn {
    Field field;
    std::vector<std::pair<Ball, V>> pieces;
    V default_value;

    static LcFn zero_fn(const Field& f) {
        return LcFn{f, {}, value_ops<V>::zero(f.p)};
    }

    void add_piece(Ball b, V v) {
        for (auto& [ob, ov] : pieces)
            if (!ob.disjoint(b)) throw std::invalid_argument("LcFn: overlapping pieces");
        pieces.emplace_back(std::move(b), std::move(v));
    }

    V eval(const PAdic& x) const {
        for (auto& [b, v] : pieces)
            if (b.contains(x)) return v;
        return default_value;
    }

    bool compactly_supported() const {
        if constexpr (std::is_same_v<V, CycSum>) return default_value.is_zero();
        else return default_value == value_ops<V>::zero(field.p);
    }

    // exponent of the constancy radius: constant on every ball B(c, p^-m)
    int constancy_exponent() const {
        int m = 0;
        for (auto& [b, v] : pieces) m = std::max(m, b.m);
        return m;
    }

    // exponent of the support bound: pieces lie inside B(0, p^L)
    int support_exponent() const {
        int L = 0;
        for (auto& [b, v] : pieces) {
            L = std::max(L, -b.m);
            if (!b.center.is_zero()) L = std::max(L, -b.center.ord());
        }
        return L;
    }

    LcFn reflected() const {
        LcFn r = *this;
        for (auto& [b, v] : r.pieces) b.center = -b.center;
        return r;
    }
};

// Haar measure normalized by v(B(0,1)) = 1: a ball of radius p^-m has mass
// p^-m, independent of the center.
inline Rat haar_ball(const Field& f, int m) { return rat_pow(f.p, -m); }

// intersection of two balls (nested or disjoint)
inline std::optional<Ball> ball_intersect(const Ball& a, const Ball& b) {
    if (a.contains_ball(b)) return b;
    if (b.contains_ball(a)) return a;
    return std::nullopt;
}

// integral over a ball region
template <class V>
V integrate_lc(const LcFn<V>& f, const Ball& region) {
    using ops = value_ops<V>;
    int p = f.field.p;
    V acc = ops::scale(f.default_value, haar_ball(f.field, region.m));
    for (auto& [b, v] : f.pieces) {
        auto cap = ball_intersect(b, region);
        if (!cap) continue;
        Rat mass = haar_ball(f.field, cap->m);
        acc = acc + ops::scale(v, mass) + ops::scale(-f.default_value, mass);
    }
    return acc;
}

// integral over the whole field; requires compact support
template <class V>
V integrate_lc(const LcFn<V>& f) {
    using ops = value_ops<V>;
    if (!f.compactly_supported())
        throw divergence_error("integrate_lc: non-zero default over the whole field");
    V acc = ops::zero(f.field.p);
    for (auto& [b, v] : f.pieces) acc = acc + ops::scale(v, haar_ball(f.field, b.m));
    return acc;
}

// integral of x -> chi(z x) over B(c, p^-m): chi(z c) p^-m when |z| <= p^m,
// 0 otherwise (ball-character orthogonality)
template <class V>
V char_ball_integral(const PAdic& z, const Ball& b) {
    using ops = value_ops<V>;
    const Field& f = b.field();
    if (!z.is_zero() && -z.ord() > b.m) return ops::zero(f.p);
    V v = ops::from_rat(f.p, haar_ball(f, b.m));
    if (!z.is_zero() && !b.center.is_zero())
        v = ops::mul_phase(v, character_eval(z, b.center), f.p);
    return v;
}

// integral of f(x) chi(z x) over the whole field (f compactly supported)
template <class V>
V char_weighted_integral(const LcFn<V>& f, const PAdic& z) {
    using ops = value_ops<V>;
    if (!f.compactly_supported())
        throw divergence_error("char_weighted_integral: non-compact support");
    V acc = ops::zero(f.field.p);
    for (auto& [b, v] : f.pieces) {
        V cb = char_ball_integral<V>(z, b);
        acc = acc + v * cb;
    }
    return acc;
}

namespace detail {

// all centers of balls of radius p^-r inside B(0, p^L), as exact elements
inline std::vector<PAdic> ball_centers(const Field& f, int L, int r) {
    if (L + r < 0) return {PAdic::zero(f)};
    Int count = int_pow(f.p, L + r);
    if (count > 400000) throw std::invalid_argument("ball_centers: refinement too large");
    long n = count.convert_to<long>();
    std::vector<PAdic> cs;
    cs.reserve(n);
    for (long k = 0; k < n; ++k)
        cs.push_back(PAdic::from_rational(f, Int(k), int_pow(f.p, L),
                                          std::max(kDefaultPrec, L + r + 2)));
    return cs;
}

}  // namespace detail

// Fourier transform of a compactly supported locally constant function,
// returned in the same representation.  Exact for the CycSum value type.
template <class V>
LcFn<V> fourier_lc(const LcFn<V>& f) {
    using ops = value_ops<V>;
    if (!f.compactly_supported())
        throw divergence_error("fourier_lc: non-compact support");
    const Field& fd = f.field;
    LcFn<V> out = LcFn<V>::zero_fn(fd);
    if (f.pieces.empty()) return out;
    // transform support: |z| <= p^m*, constancy: balls of radius p^-r
    int mstar = f.constancy_exponent();
    int r = 0;
    for (auto& [b, v] : f.pieces) {
        r = std::max(r, -b.m);
        if (!b.center.is_zero()) r = std::max(r, -b.center.ord());
    }
    auto value_at = [&](const PAdic& z) {
        return char_weighted_integral(f, z);
    };
    if (mstar + r <= 0) {
        V v = value_at(PAdic::zero(fd));
        bool nz = true;
        if constexpr (std::is_same_v<V, CycSum>) nz = !v.is_zero();
        if (nz) out.add_piece(Ball{PAdic::zero(fd), -mstar}, v);
        return out;
    }
    for (PAdic& c : detail::ball_centers(fd, mstar, r)) {
        V v = value_at(c);
        bool keep = true;
        if constexpr (std::is_same_v<V, CycSum>) keep = !v.is_zero();
        else keep = std::abs(v) != 0.0;
        if (keep) out.pieces.emplace_back(Ball{c, r}, v);
    }
    return out;
}

// exact comparison (CycSum path) on the common refinement of two functions
inline bool lc_equal(const LcFn<CycSum>& a, const LcFn<CycSum>& b) {
    if (!(a.default_value - b.default_value).is_zero()) return false;
    int L = std::max(a.support_exponent(), b.support_exponent());
    int r = std::max({a.constancy_exponent(), b.constancy_exponent(), 0});
    for (auto& fn : {a, b})
        for (auto& [ball, v] : fn.pieces)
            if (!ball.center.is_zero()) r = std::max(r, -ball.center.ord());
    for (PAdic& c : detail::ball_centers(a.field, L, r))
        if (!(a.eval(c) - b.eval(c)).is_zero()) return false;
    return true;
}

}  // namespace nam
