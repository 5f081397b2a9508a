#pragma once

#include <cstdint>
#include <array>

namespace vimlab {

/// Counter-based stream of pseudorandom numbers (Philox4x32-10).
///
/// A stream is fully identified by (seed, stream_id): the same pair always
/// reproduces the same draw sequence, and distinct stream_ids give
/// statistically independent streams. Streams are cheap values; workers
/// derive their own child streams instead of sharing one.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  /// Child stream, independent of this one and of other children.
  RngStream derive(std::uint64_t child) const;
  RngStream derive(std::uint64_t a, std::uint64_t b) const;
  RngStream derive(std::uint64_t a, std::uint64_t b, std::uint64_t c) const;

  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);

  /// Standard normal via Box-Muller (second value cached).
  double normal();
  double normal(double mean, double sd);

  /// Uniform integer in [0, bound), unbiased.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform integer in [lo, hi] inclusive.
  long uniform_int(long lo, long hi);

  /// Raw Philox4x32-10 block; exposed for known-answer tests.
  static std::array<std::uint32_t, 4> philox_block(
      const std::array<std::uint32_t, 4>& counter,
      const std::array<std::uint32_t, 2>& key);

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int buf_pos_ = 4;  // empty
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

/// 64-bit finalizer used for stream derivation (SplitMix64 mixing function).
std::uint64_t mix64(std::uint64_t x);

}  // namespace vimlab
