#pragma once

#include <cstdint>

namespace hh {

// Counter-based per-shot random stream. Each (seed, shot) pair opens an
// independent stream, so sampling order and worker count cannot change
// the bits a given shot sees.
class ShotRng {
  public:
    ShotRng(std::uint64_t seed, std::uint64_t shot)
        : state_(mix(seed ^ 0x9e3779b97f4a7c15ull, shot)) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    bool next_bool() { return next_u64() >> 63; }

    // uniform integer in [0, n)
    std::uint32_t next_below(std::uint32_t n) {
        return std::uint32_t((__uint128_t(next_u64()) * n) >> 64);
    }

  private:
    static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
        std::uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

}  // namespace hh
