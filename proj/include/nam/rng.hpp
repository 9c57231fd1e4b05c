#pragma once

#include <cstdint>

namespace nam {

// Counter-based generator: stream i of run seed s is splitmix64 applied to
// s xor (i * golden).  Every randomized suite derives all of its draws from
// one of these, so a run is reproducible from the single 64-bit seed.
class Rng {
  public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : state_(seed ^ (stream * 0x9e3779b97f4a7c15ULL)) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, n)
    std::uint64_t below(std::uint64_t n) { return next() % n; }

    // uniform in [lo, hi] inclusive
    long range(long lo, long hi) {
        return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    double uniform01() { return (next() >> 11) * 0x1.0p-53; }

  private:
    std::uint64_t state_;
};

}  // namespace nam
