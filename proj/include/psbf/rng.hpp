#pragma once

#include <cstdint>
#include <span>

namespace psbf {

// All randomness flows through this fixed generator (xoshiro256** seeded via
// splitmix64) so that runs reproduce bit-exactly across platforms and
// standard libraries. std::shuffle / std::uniform_int_distribution are
// implementation-defined and deliberately avoided.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic sub-stream seed: chain-mix the master seed with tags.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag) {
    return splitmix64(splitmix64(master) ^ tag);
}
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t t1, std::uint64_t t2) {
    return derive_seed(derive_seed(master, t1), t2);
}
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t t1, std::uint64_t t2,
                                 std::uint64_t t3) {
    return derive_seed(derive_seed(master, t1, t2), t3);
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& word : s_) {
            x += 0x9e3779b97f4a7c15ULL;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            word = z ^ (z >> 31);
        }
    }

    std::uint64_t next() {
        auto rotl = [](std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); };
        std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform in [0, bound), unbiased by rejection.
    std::uint64_t below(std::uint64_t bound) {
        std::uint64_t limit = bound * ((~std::uint64_t(0)) / bound);
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % bound;
    }

    /// Uniform in [lo, hi) with 53-bit resolution.
    double real(double lo, double hi) {
        double u = double(next() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

    /// Fisher-Yates, back to front.
    template <typename T>
    void shuffle(std::span<T> v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = std::size_t(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    std::uint64_t s_[4];
};

}  // namespace psbf
