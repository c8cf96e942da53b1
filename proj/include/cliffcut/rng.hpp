#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>

namespace cliffcut {

// Deterministic 64-bit PRNG used everywhere randomness is needed.
//
// Algorithms are fixed so that instances are reproducible across versions
// and platforms:
//   - state expansion / seed mixing: SplitMix64 (Steele, Lea, Flood 2014)
//   - stream generation: xoshiro256** 1.0 (Blackman, Vigna 2018)
//   - uniform double in [0,1): top 53 bits scaled by 2^-53
//   - standard normal: Box-Muller, draws consumed in pairs, second cached
//   - exponential: inverse CDF, -mean*log(1-u)
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Derives a child seed from a master seed and a list of context words
// (family tag, size, instance index, ...). Each word is absorbed through
// one SplitMix64 round, so distinct contexts give independent streams.
inline uint64_t derive_seed(uint64_t master, std::initializer_list<uint64_t> words) {
    uint64_t s = master;
    for (uint64_t w : words) {
        s ^= w;
        (void)splitmix64(s);
        s = splitmix64(s);
    }
    return s;
}

class Rng {
  public:
    explicit Rng(uint64_t seed) {
        uint64_t sm = seed;
        for (auto& word : s_) {
            word = splitmix64(sm);
        }
    }

    // xoshiro256** next()
    uint64_t next_u64() {
        uint64_t result = rotl(s_[1] * 5, 7) * 9;
        uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) {
        return a + (b - a) * uniform01();
    }

    // Unbiased integer in [0, n) by rejection.
    uint64_t uniform_int(uint64_t n) {
        if (n == 0) {
            throw std::invalid_argument("uniform_int: n must be positive");
        }
        uint64_t threshold = (0 - n) % n;
        for (;;) {
            uint64_t x = next_u64();
            if (x >= threshold) {
                return x % n;
            }
        }
    }

    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = uniform01();
        double u2 = uniform01();
        // u1 = 0 would send log to -inf; nudge to the smallest representable draw.
        if (u1 <= 0.0) {
            u1 = 0x1.0p-53;
        }
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 2.0 * M_PI * u2;
        cached_ = r * std::sin(theta);
        have_cached_ = true;
        return r * std::cos(theta);
    }

    double normal(double mean, double var) {
        return mean + std::sqrt(var) * normal();
    }

    double exponential(double mean) {
        return -mean * std::log1p(-uniform01());
    }

  private:
    static uint64_t rotl(uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    uint64_t s_[4];
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace cliffcut
