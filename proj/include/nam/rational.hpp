#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace nam {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::rational<Int>;

inline Int int_pow(long base, long exp) {
    if (exp < 0) throw std::invalid_argument("int_pow: negative exponent");
    Int r = 1, b = base;
    while (exp > 0) {
        if (exp & 1) r *= b;
        b *= b;
        exp >>= 1;
    }
    return r;
}

// p^e as an exact rational, e may be negative.
inline Rat rat_pow(long p, long e) {
    if (e >= 0) return Rat(int_pow(p, e), 1);
    return Rat(1, int_pow(p, -e));
}

inline Rat rat_pow(const Rat& b, long e) {
    if (e >= 0) {
        Rat r(1);
        for (long i = 0; i < e; ++i) r *= b;
        return r;
    }
    Rat r(1);
    for (long i = 0; i < -e; ++i) r /= b;
    return r;
}

inline double to_double(const Rat& r) {
    using boost::multiprecision::cpp_rational;
    cpp_rational q(r.numerator(), r.denominator());
    return q.convert_to<double>();
}

inline std::string to_string(const Rat& r) {
    std::string s = r.numerator().str();
    if (r.denominator() != 1) s += "/" + r.denominator().str();
    return s;
}

// Nearest rational with the given power-of-two denominator; used to embed
// floating-point shell weights into the exact weight representation.
inline Rat rationalize(double x, int bits = 62) {
    if (!std::isfinite(x)) throw std::invalid_argument("rationalize: non-finite");
    bool neg = x < 0;
    if (neg) x = -x;
    Int den = Int(1) << bits;
    // split to avoid overflow of double -> int conversion for large x
    double ip;
    double fp = std::modf(x, &ip);
    Int num = Int(static_cast<long long>(ip)) * den +
              Int(static_cast<long long>(std::llround(fp * std::pow(2.0, bits))));
    if (neg) num = -num;
    return Rat(num, den);
}

}  // namespace nam
