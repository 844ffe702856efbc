#pragma once

#include <cstdint>
#include <limits>
#include <random>

#include "pfword/bigint.hpp"
#include "pfword/errors.hpp"

namespace pfword {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Deterministic mixing of a master seed with stream coordinates; sweeps use
// it to give every (mechanism, epsilon, trial) cell its own reproducible
// stream.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t x = splitmix64(master);
  x = splitmix64(x ^ (a + 0x9e3779b97f4a7c15ull));
  x = splitmix64(x ^ (b + 0xbf58476d1ce4e5b9ull));
  x = splitmix64(x ^ (c + 0x94d049bb133111ebull));
  return x;
}

// Seeded random stream. mt19937_64 is fully specified by the standard, so
// draw sequences are identical across platforms. Not thread-safe; each
// concurrent sampler owns its own stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // Exact uniform draw in [0, n); rejection removes modulo bias.
  std::uint64_t next_below(std::uint64_t n) {
    if (n == 0) throw DomainError("next_below: empty range");
    if ((n & (n - 1)) == 0) return gen_() & (n - 1);
    constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = kMax - kMax % n;
    std::uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return x % n;
  }

  // Exact uniform draw in [0, n) for arbitrary-precision n: draw
  // bit_length(n-1) bits and reject values >= n (expected < 2 rounds).
  BigInt next_below(const BigInt& n) {
    if (n <= 0) throw DomainError("next_below: empty range");
    if (n == 1) return BigInt(0);
    const unsigned bits = bit_length(n - 1);
    const unsigned words = (bits + 63) / 64;
    const unsigned top_bits = bits - 64 * (words - 1);
    const std::uint64_t top_mask =
        top_bits == 64 ? ~0ull : ((std::uint64_t{1} << top_bits) - 1);
    BigInt x;
    do {
      x = 0;
      for (unsigned w = 0; w < words; ++w) {
        std::uint64_t word = gen_();
        if (w == 0) word &= top_mask;
        x <<= 64;
        x |= BigInt(word);
      }
    } while (x >= n);
    return x;
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

}  // namespace pfword
