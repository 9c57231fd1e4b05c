#pragma once

#include <complex>
#include <map>

#include "field.hpp"
#include "rational.hpp"

namespace nam {

// Exact element of Q(zeta) where zeta runs over p-power roots of unity:
// a finite sum  c_k * e^(2 pi i k / p^level).  Exponents are kept in the
// canonical basis (top base-p digit of k at most p-2), so zero sums reduce
// to the empty sum and equality is decidable.
class CycSum {
  public:
    explicit CycSum(int p = 2) : p_(p), level_(0) {}

    static CycSum scalar(int p, const Rat& c) {
        CycSum s(p);
        if (c != Rat(0)) s.terms_[0] = c;
        return s;
    }

    // c * e^(2 pi i phase); the phase denominator must be a p power
    static CycSum root(int p, const Phase& ph, const Rat& c = Rat(1)) {
        if (c == Rat(0)) return CycSum(p);
        Int den = ph.v.denominator();
        int level = 0;
        while (den != 1) {
            if (den % p != 0)
                throw std::invalid_argument("CycSum: phase denominator is not a p power");
            den /= p;
            ++level;
        }
        CycSum s(p);
        s.level_ = level;
        Int kk = ph.v.numerator() * (int_pow(p, level) / ph.v.denominator());
        long long k = kk.convert_to<long long>();
        s.terms_[k] = c;
        s.reduce();
        return s;
    }

    int p() const { return p_; }
    bool is_zero() const { return terms_.empty(); }

    bool operator==(const CycSum& o) const {
        return p_ == o.p_ && level_ == o.level_ && terms_ == o.terms_;
    }
    bool operator!=(const CycSum& o) const { return !(*this == o); }

    CycSum operator+(const CycSum& o) const {
        check(o);
        CycSum a = *this, b = o;
        int L = std::max(a.level_, b.level_);
        a.lift(L);
        b.lift(L);
        for (auto& [k, c] : b.terms_) a.terms_[k] += c;
        a.reduce();
        return a;
    }

    CycSum operator-() const {
        CycSum r = *this;
        for (auto& [k, c] : r.terms_) c = -c;
        return r;
    }

    CycSum operator-(const CycSum& o) const { return *this + (-o); }

    CycSum operator*(const CycSum& o) const {
        check(o);
        CycSum a = *this, b = o;
        int L = std::max(a.level_, b.level_);
        a.lift(L);
        b.lift(L);
        CycSum r(p_);
        r.level_ = L;
        long long mod = pw(L);
        for (auto& [k1, c1] : a.terms_)
            for (auto& [k2, c2] : b.terms_) r.terms_[(k1 + k2) % mod] += c1 * c2;
        r.reduce();
        return r;
    }

    CycSum operator*(const Rat& c) const {
        if (c == Rat(0)) return CycSum(p_);
        CycSum r = *this;
        for (auto& [k, v] : r.terms_) v *= c;
        return r;
    }

    CycSum conj() const {
        CycSum r(p_);
        r.level_ = level_;
        long long mod = pw(level_);
        for (auto& [k, c] : terms_) r.terms_[(mod - k) % mod] += c;
        r.reduce();
        return r;
    }

    bool is_real() const { return *this == conj(); }

    // exact rational value if the sum is a scalar
    bool rational_value(Rat& out) const {
        if (terms_.empty()) { out = Rat(0); return true; }
        if (level_ == 0 && terms_.size() == 1 && terms_.begin()->first == 0) {
            out = terms_.begin()->second;
            return true;
        }
        return false;
    }

    std::complex<double> to_complex() const {
        std::complex<double> s(0, 0);
        double mod = static_cast<double>(pw(level_));
        for (auto& [k, c] : terms_) {
            double t = 2.0 * 3.14159265358979323846 * (static_cast<double>(k) / mod);
            s += to_double(c) * std::complex<double>(std::cos(t), std::sin(t));
        }
        return s;
    }

  private:
    int p_;
    int level_;
    std::map<long long, Rat> terms_;

    long long pw(int l) const {
        long long r = 1;
        for (int i = 0; i < l; ++i) r *= p_;
        return r;
    }

    void check(const CycSum& o) const {
        if (p_ != o.p_) throw std::invalid_argument("CycSum: mixed primes");
    }

    void lift(int L) {
        if (L == level_) return;
        long long f = 1;
        for (int i = level_; i < L; ++i) f *= p_;
        std::map<long long, Rat> t;
        for (auto& [k, c] : terms_) t[k * f] = c;
        terms_ = std::move(t);
        level_ = L;
    }

    void reduce() {
        // canonicalize exponents using 1 + z^(p^(L-1)) + ... + z^((p-1)p^(L-1)) = 0
        bool changed = true;
        while (changed) {
            changed = false;
            if (level_ > 0) {
                long long q = pw(level_ - 1);
                for (auto it = terms_.begin(); it != terms_.end();) {
                    long long k = it->first;
                    if (k / q == p_ - 1) {
                        Rat c = it->second;
                        it = terms_.erase(it);
                        long long t = k - (p_ - 1) * q;
                        for (int i = 0; i <= p_ - 2; ++i) terms_[t + i * q] -= c;
                        changed = true;
                    } else {
                        ++it;
                    }
                }
            }
            for (auto it = terms_.begin(); it != terms_.end();)
                it = it->second == Rat(0) ? terms_.erase(it) : std::next(it);
            // drop the level if every exponent is divisible by p
            while (level_ > 0) {
                bool all = true;
                for (auto& [k, c] : terms_)
                    if (k % p_ != 0) { all = false; break; }
                if (!all) break;
                std::map<long long, Rat> t;
                for (auto& [k, c] : terms_) t[k / p_] = c;
                terms_ = std::move(t);
                --level_;
                changed = true;
            }
        }
    }
};

}  // namespace nam
