#pragma once

#include <algorithm>
#include <climits>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"
#include "rng.hpp"

namespace nam {

// Scalar fields: Q_p (carrying arithmetic) and F_p((theta)) (digitwise
// arithmetic, |theta| = 1/p).  Both are handled by one digit-window type.
enum class FieldKind { char_zero, char_p };

struct Field {
    FieldKind kind = FieldKind::char_zero;
    int p = 2;

    bool operator==(const Field& o) const { return kind == o.kind && p == o.p; }
    bool operator!=(const Field& o) const { return !(*this == o); }
};

inline Field Qp(int p) { return Field{FieldKind::char_zero, p}; }
inline Field Fp_theta(int p) { return Field{FieldKind::char_p, p}; }

inline constexpr int kOrdInf = INT_MAX / 4;
inline constexpr int kDefaultPrec = 12;

namespace detail {

inline long mod_inverse(long a, long p) {
    long t = 0, newt = 1, r = p, newr = ((a % p) + p) % p;
    while (newr != 0) {
        long q = r / newr;
        std::swap(t, newt);
        newt -= q * t;
        std::swap(r, newr);
        newr -= q * r;
    }
    if (r != 1) throw std::domain_error("mod_inverse: not invertible");
    return ((t % p) + p) % p;
}

}  // namespace detail

// An element known to the precision of its digit window: the stored value is
// sum digits[i] * p^(ord+i), correct modulo p^(ord + digits.size()).  The
// leading digit is nonzero; trailing zeros are significant (they are known).
class PAdic {
  public:
    PAdic() : field_{FieldKind::char_zero, 2}, ord_(kOrdInf) {}

    static PAdic zero(const Field& f) {
        PAdic x;
        x.field_ = f;
        x.ord_ = kOrdInf;
        return x;
    }

    static PAdic from_digits(const Field& f, int ord, std::vector<int> digits) {
        PAdic x;
        x.field_ = f;
        x.ord_ = ord;
        x.digits_ = std::move(digits);
        for (int& d : x.digits_) {
            if (d < 0 || d >= f.p) throw std::invalid_argument("digit out of range");
        }
        x.normalize_leading();
        return x;
    }

    // Base-p expansion of num/den, truncated to `prec` digits from the
    // leading one.  In characteristic p the integers are read digitwise as
    // polynomials in theta and den must be coprime to p.
    static PAdic from_rational(const Field& f, const Int& num, const Int& den,
                               int prec = kDefaultPrec) {
        if (den == 0) throw std::domain_error("from_rational: zero denominator");
        if (num == 0) return zero(f);
        if (prec < 1) throw std::invalid_argument("from_rational: prec < 1");
        return f.kind == FieldKind::char_zero ? parse_char_zero(f, num, den, prec)
                                              : parse_char_p(f, num, den, prec);
    }

    static PAdic from_rat(const Field& f, const Rat& r, int prec = kDefaultPrec) {
        return from_rational(f, r.numerator(), r.denominator(), prec);
    }

    static PAdic from_rational(const Field& f, long num, long den, int prec = kDefaultPrec) {
        return from_rational(f, Int(num), Int(den), prec);
    }

    static PAdic from_int(const Field& f, long v, int prec = kDefaultPrec) {
        return from_rational(f, Int(v), Int(1), prec);
    }

    const Field& field() const { return field_; }
    bool is_zero() const { return ord_ >= kOrdInf; }
    int ord() const { return ord_; }  // kOrdInf for zero
    int prec() const { return static_cast<int>(digits_.size()); }
    const std::vector<int>& digits() const { return digits_; }

    // |x| as exact rational; |0| = 0.
    Rat norm() const { return is_zero() ? Rat(0) : rat_pow(field_.p, -ord_); }
    double norm_d() const { return is_zero() ? 0.0 : std::pow(double(field_.p), -double(ord_)); }

    // coefficient of p^l; throws if l is beyond the valid window
    int digit_at(int l) const {
        if (is_zero()) return 0;
        if (l < ord_) return 0;
        if (l >= ord_ + prec())
            throw precision_error("digit_at: position beyond valid window");
        return digits_[l - ord_];
    }

    PAdic operator-() const {
        if (is_zero()) return *this;
        PAdic r = *this;
        int p = field_.p;
        if (field_.kind == FieldKind::char_p) {
            for (int& d : r.digits_) d = (p - d) % p;
        } else {
            // complement: -x == sum (p-1-d_i) p^(ord+i) + p^ord, truncated
            r.digits_[0] = p - r.digits_[0];
            for (size_t i = 1; i < r.digits_.size(); ++i) r.digits_[i] = p - 1 - r.digits_[i];
        }
        r.normalize_leading();
        return r;
    }

    PAdic operator+(const PAdic& o) const {
        check_same_field(o);
        if (is_zero()) return o;
        if (o.is_zero()) return *this;
        int lo = std::min(ord_, o.ord_);
        int hi = std::min(ord_ + prec(), o.ord_ + o.prec());  // known-until bound
        if (hi <= lo) {
            // one operand lies entirely below the other's resolution
            return ord_ < o.ord_ ? *this : o;
        }
        std::vector<long long> c(hi - lo, 0);
        accumulate(c, lo, hi, *this, 1);
        accumulate(c, lo, hi, o, 1);
        return from_coeffs(field_, lo, std::move(c));
    }

    PAdic operator-(const PAdic& o) const { return *this + (-o); }

    PAdic operator*(const PAdic& o) const {
        check_same_field(o);
        if (is_zero() || o.is_zero()) return zero(field_);
        int outp = std::min(prec(), o.prec());
        std::vector<long long> c(outp + 1, 0);
        int p = field_.p;
        for (int i = 0; i < prec() && i <= outp; ++i) {
            if (digits_[i] == 0) continue;
            for (int j = 0; j < o.prec() && i + j <= outp; ++j)
                c[i + j] += static_cast<long long>(digits_[i]) * o.digits_[j];
            if (field_.kind == FieldKind::char_zero && (i & 15) == 15)
                carry_pass(c, p);  // keep coefficients small
        }
        if (field_.kind == FieldKind::char_zero)
            carry_pass(c, p);
        else
            for (auto& v : c) v %= p;
        c.resize(outp);
        PAdic r = from_coeffs(field_, ord_ + o.ord_, std::move(c));
        return r;
    }

    PAdic operator/(const PAdic& o) const {
        check_same_field(o);
        if (o.is_zero()) throw std::domain_error("division by zero");
        if (is_zero()) return zero(field_);
        int p = field_.p;
        int m = std::min(prec(), o.prec());
        long binv = detail::mod_inverse(o.digits_[0], p);
        std::vector<long long> r(m + o.prec() + 1, 0);
        for (int i = 0; i < std::min<int>(prec(), static_cast<int>(r.size())); ++i)
            r[i] = digits_[i];
        std::vector<int> q(m, 0);
        for (int i = 0; i < m; ++i) {
            long cur = static_cast<long>(((r[i] % p) + p) % p);
            int qi = static_cast<int>((cur * binv) % p);
            q[i] = qi;
            if (qi != 0) {
                for (int j = 0; j < o.prec() && i + j < static_cast<int>(r.size()); ++j)
                    r[i + j] -= static_cast<long long>(qi) * o.digits_[j];
            }
            // renormalize position i (and push borrows upward in char zero)
            if (field_.kind == FieldKind::char_zero) {
                for (int j = i; j < static_cast<int>(r.size()) - 1; ++j) {
                    if (r[j] >= 0 && r[j] < p) break;
                    long long t = r[j] / p;
                    if (r[j] % p < 0) t -= 1;
                    r[j] -= t * p;
                    r[j + 1] += t;
                }
            } else {
                r[i] = ((r[i] % p) + p) % p;
            }
        }
        PAdic res;
        res.field_ = field_;
        res.ord_ = ord_ - o.ord_;
        res.digits_ = std::move(q);
        res.normalize_leading();
        return res;
    }

    PAdic inv(int prec_hint = 0) const {
        PAdic one = from_int(field_, 1, prec_hint > 0 ? prec_hint : prec());
        return one / *this;
    }

    // exact equality of the stored expansions
    bool operator==(const PAdic& o) const {
        return field_ == o.field_ && ord_ == o.ord_ && digits_ == o.digits_;
    }
    bool operator!=(const PAdic& o) const { return !(*this == o); }

    // agreement modulo p^k: ord(x - y) >= k (or exact zero difference)
    bool approx_equal(const PAdic& o, int k) const {
        PAdic d = *this - o;
        return d.is_zero() || d.ord() >= k;
    }

    // exact rational value of the stored window (char zero only)
    Rat to_rational() const {
        if (field_.kind != FieldKind::char_zero)
            throw std::domain_error("to_rational: characteristic-p element");
        if (is_zero()) return Rat(0);
        Rat s(0);
        for (int i = 0; i < prec(); ++i)
            if (digits_[i] != 0) s += Rat(digits_[i]) * rat_pow(field_.p, ord_ + i);
        return s;
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::string s = "p^" + std::to_string(ord_) + " * (";
        for (int i = 0; i < prec(); ++i) {
            if (i) s += " ";
            s += std::to_string(digits_[i]);
        }
        s += ")_" + std::to_string(field_.p);
        return s;
    }

    // scale by p^k (theta^k in characteristic p): exact shift of the window
    PAdic shifted(int k) const {
        if (is_zero()) return *this;
        PAdic r = *this;
        r.ord_ += k;
        return r;
    }

  private:
    Field field_;
    int ord_;
    std::vector<int> digits_;

    void check_same_field(const PAdic& o) const {
        if (field_ != o.field_) throw std::invalid_argument("mixed-field arithmetic");
    }

    void normalize_leading() {
        size_t i = 0;
        while (i < digits_.size() && digits_[i] == 0) ++i;
        if (i == digits_.size()) {
            digits_.clear();
            ord_ = kOrdInf;
            return;
        }
        if (i > 0) {
            digits_.erase(digits_.begin(), digits_.begin() + static_cast<long>(i));
            ord_ += static_cast<int>(i);
        }
    }

    static void carry_pass(std::vector<long long>& c, int p) {
        long long carry = 0;
        for (auto& v : c) {
            v += carry;
            carry = v / p;
            if (v % p < 0) carry -= 1;
            v -= carry * p;
        }
    }

    static void accumulate(std::vector<long long>& c, int lo, int hi, const PAdic& x, int sgn) {
        for (int i = 0; i < x.prec(); ++i) {
            int pos = x.ord_ + i;
            if (pos < lo || pos >= hi) continue;
            c[pos - lo] += sgn * static_cast<long long>(x.digits_[i]);
        }
    }

    static PAdic from_coeffs(const Field& f, int lo, std::vector<long long> c) {
        int p = f.p;
        if (f.kind == FieldKind::char_zero)
            carry_pass(c, p);
        else
            for (auto& v : c) v = ((v % p) + p) % p;
        PAdic r;
        r.field_ = f;
        r.ord_ = lo;
        r.digits_.reserve(c.size());
        for (auto v : c) r.digits_.push_back(static_cast<int>(v));
        r.normalize_leading();
        return r;
    }

    static PAdic parse_char_zero(const Field& f, Int num, Int den, int prec) {
        int p = f.p;
        int v = 0;
        while (num % p == 0) { num /= p; ++v; }
        while (den % p == 0) { den /= p; --v; }
        Int pden = den < 0 ? -den : den;
        if (den < 0) num = -num;
        long dinv = detail::mod_inverse(static_cast<long>(pden % p), p);
        std::vector<int> digits(prec);
        for (int i = 0; i < prec; ++i) {
            long nmod = static_cast<long>(((num % p) + p) % p);
            int a = static_cast<int>((nmod * dinv) % p);
            digits[i] = a;
            num = (num - a * pden) / p;
        }
        return from_digits(f, v, std::move(digits));
    }

    static PAdic parse_char_p(const Field& f, Int num, Int den, int prec) {
        int p = f.p;
        int v = 0;
        while (num % p == 0) { num /= p; ++v; }
        if (den % p == 0)
            throw std::invalid_argument("char-p rational: denominator must be coprime to p");
        auto poly = [&](Int m) {
            bool neg = m < 0;
            if (neg) m = -m;
            std::vector<int> c;
            while (m != 0) {
                int d = static_cast<int>(m % p);
                c.push_back(neg ? (p - d) % p : d);
                m /= p;
            }
            return c;
        };
        std::vector<int> a = poly(num), b = poly(den);
        PAdic pa = from_digits(f, v, std::move(a));
        PAdic pb = from_digits(f, 0, std::move(b));
        // pad to requested precision before dividing
        pa.digits_.resize(std::max<size_t>(pa.digits_.size(), prec), 0);
        pb.digits_.resize(std::max<size_t>(pb.digits_.size(), prec), 0);
        return pa / pb;
    }
};

// fractional part {x}_p = sum of the negative-index digits, as an exact
// rational in [0,1); in characteristic p it is (theta-coefficient at -1)/p
inline Rat frac_part(const PAdic& x) {
    if (x.is_zero() || x.ord() >= 0) return Rat(0);
    const Field& f = x.field();
    if (f.kind == FieldKind::char_p) {
        int d = x.digit_at(-1);  // throws precision_error when not covered
        return Rat(d, f.p);
    }
    if (x.ord() + x.prec() < 0)
        throw precision_error("frac_part: window does not reach p^0");
    Rat s(0);
    for (int l = x.ord(); l < 0; ++l) {
        int d = x.digit_at(l);
        if (d != 0) s += Rat(d) * rat_pow(f.p, l);
    }
    // already in [0,1): digits are in [0,p) and positions are below 0
    return s;
}

// Closed ball B(c, p^-m).
struct Ball {
    PAdic center;
    int m;

    const Field& field() const { return center.field(); }
    Rat radius() const { return rat_pow(field().p, -m); }
    Rat haar() const { return rat_pow(field().p, -m); }

    bool contains(const PAdic& x) const {
        PAdic d = x - center;
        return d.is_zero() || d.ord() >= m;
    }

    bool contains_ball(const Ball& o) const { return o.m >= m && contains(o.center); }

    // ultrametric: two balls are nested or disjoint
    bool disjoint(const Ball& o) const { return !contains_ball(o) && !o.contains_ball(*this); }
};

inline Ball unit_ball(const Field& f) { return Ball{PAdic::zero(f), 0}; }

// exact phase in [0,1) with p-power denominator; the character value is
// exp(2 pi i * phase)
struct Phase {
    Rat v;

    Phase() : v(0) {}
    explicit Phase(Rat r) : v(std::move(r)) { reduce(); }

    void reduce() {
        Int n = v.numerator(), d = v.denominator();
        Int m = n % d;
        if (m < 0) m += d;
        v = Rat(m, d);
    }

    Phase operator+(const Phase& o) const { return Phase(v + o.v); }
    Phase operator-() const { return Phase(-v); }
    bool operator==(const Phase& o) const { return v == o.v; }
    bool is_trivial() const { return v.numerator() == 0; }

    std::complex<double> to_complex() const {
        double t = 2.0 * 3.14159265358979323846 * to_double(v);
        return {std::cos(t), std::sin(t)};
    }
};

// standard rank-zero additive character evaluated at xi * x
inline Phase character_eval(const PAdic& xi, const PAdic& x) {
    if (xi.is_zero() || x.is_zero()) return Phase();
    return Phase(frac_part(xi * x));
}

inline PAdic random_element(const Field& f, Rng& rng, int ord_lo, int ord_hi,
                            int prec = kDefaultPrec) {
    int o = static_cast<int>(rng.range(ord_lo, ord_hi));
    std::vector<int> d(prec);
    d[0] = 1 + static_cast<int>(rng.below(f.p - 1));
    for (int i = 1; i < prec; ++i) d[i] = static_cast<int>(rng.below(f.p));
    return PAdic::from_digits(f, o, std::move(d));
}

}  // namespace nam
