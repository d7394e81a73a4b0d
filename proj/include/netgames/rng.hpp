// Deterministic random streams for simulations and generators.
#pragma once

#include <cstdint>

namespace netgames {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// xoshiro256** seeded through splitmix64. Explicit uniform helpers keep the
// draw sequence independent of the standard library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [0, bound) without modulo bias.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t x = next();
      if (x >= threshold) return x % bound;
    }
  }

  bool next_bernoulli(double p) { return next_unit() < p; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t state_[4];
};

// Splitting rule: stream seeds are derived from (master, replication, purpose)
// so any replication of a sweep can be re-run in isolation.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t replication,
                                 std::uint64_t purpose = 0) {
  std::uint64_t s = master ^ (0x9E3779B97F4A7C15ULL * (replication + 1));
  std::uint64_t mixed = splitmix64(s);
  s ^= mixed ^ (0xD1B54A32D192ED03ULL * (purpose + 1));
  return splitmix64(s);
}

}  // namespace netgames
