#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace qtime {

/// Deterministic random source used everywhere randomness is needed.
///
/// The generator is std::mt19937_64, whose raw 64-bit output sequence is fixed
/// by the C++ standard, and all derived draws (bounded integers, uniform reals,
/// normals, shuffles) are implemented here rather than with std::*_distribution,
/// whose outputs vary across standard libraries. Given one seed, every draw is
/// identical across platforms and compilers.
class Rng {
  public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    uint64_t next_u64() { return gen_(); }

    /// Uniform integer in [0, bound) by rejection sampling (bound > 0).
    uint64_t below(uint64_t bound) {
        const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return x % bound;
    }

    /// Uniform double in [0, 1) with 53 bits of precision.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal via Box-Muller; no cached spare, two uniforms per draw.
    double normal() {
        double u1;
        do {
            u1 = uniform01();
        } while (u1 <= 0.0);
        double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    /// In-place Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    std::mt19937_64 gen_;
};

}  // namespace qtime
