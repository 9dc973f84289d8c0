#pragma once
// Counter-based pseudo-random numbers (Philox-4x32-10).  A counter-based
// generator makes every Monte-Carlo estimate a pure function of
// (seed, stream, sample index): samples can be drawn in any order, in
// chunks, or lazily, and the result bytes never change.  Stochastic outputs
// elsewhere in the library always record the seed they were drawn from.

#include <array>
#include <cstdint>

namespace diomax {

/// Philox 4x32 with 10 rounds.  Reference constants from the original
/// "Parallel random numbers: as easy as 1, 2, 3" construction; known-answer
/// vectors are pinned in the unit tests.
class Philox4x32 {
 public:
  using counter_t = std::array<std::uint32_t, 4>;
  using key_t = std::array<std::uint32_t, 2>;

  static counter_t round10(counter_t ctr, key_t key) {
    for (int r = 0; r < 10; ++r) {
      ctr = single_round(ctr, key);
      key[0] += 0x9E3779B9u;  // golden ratio
      key[1] += 0xBB67AE85u;  // sqrt(3)-1
    }
    return ctr;
  }

 private:
  static counter_t single_round(const counter_t& c, const key_t& k) {
    std::uint64_t p0 = std::uint64_t(0xD2511F53u) * c[0];
    std::uint64_t p1 = std::uint64_t(0xCD9E8D57u) * c[2];
    return {std::uint32_t(p1 >> 32) ^ c[1] ^ k[0], std::uint32_t(p1),
            std::uint32_t(p0 >> 32) ^ c[3] ^ k[1], std::uint32_t(p0)};
  }
};

/// Random stream addressed by (seed, stream id, counter).  Each next_u64()
/// consumes half of one Philox block; blocks are indexed by an internal
/// 64-bit counter so streams are effectively inexhaustible.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {}

  std::uint64_t next_u64() {
    if (phase_ == 0) {
      block_ = Philox4x32::round10(
          {std::uint32_t(index_), std::uint32_t(index_ >> 32),
           std::uint32_t(stream_), std::uint32_t(stream_ >> 32)},
          {std::uint32_t(seed_), std::uint32_t(seed_ >> 32)});
      ++index_;
    }
    std::uint64_t hi = block_[2 * phase_], lo = block_[2 * phase_ + 1];
    phase_ ^= 1;
    return (hi << 32) | lo;
  }

  /// Uniform in [0,1) with 53 random bits.
  double next_double() {
    return double(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n).  n must be positive.
  std::uint64_t next_below(std::uint64_t n) {
    // Reject the tail so the distribution is exactly uniform.
    std::uint64_t limit = ~std::uint64_t(0) - (~std::uint64_t(0) % n);
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return v % n;
  }

  /// Standard normal via Box-Muller (one value per call, cached partner).
  double next_gaussian();

 private:
  std::uint64_t seed_, stream_, index_ = 0;
  Philox4x32::counter_t block_{};
  int phase_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Stable 64-bit mix used to derive per-argument RNG streams (e.g. the
/// Monte-Carlo surface integrator keys its stream to the frequency argument
/// so that evaluating the same point twice gives identical values).
std::uint64_t mix_u64(std::uint64_t x);

}  // namespace diomax
