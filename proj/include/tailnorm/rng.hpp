#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace tailnorm {

/// A seeded random stream. Streams for parallel work are derived from a master
/// seed and an integer key (cell, replicate, ...), so the numbers a replicate
/// sees never depend on how work is scheduled.
class Stream {
 public:
  explicit Stream(std::uint64_t seed);

  /// Substream keyed by (master, key...). Distinct keys give unrelated streams.
  static Stream derive(std::uint64_t master, std::initializer_list<std::uint64_t> key);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();

  /// Standard normal (Marsaglia polar method).
  double normal();

  /// Uniform integer in [0, bound). bound must be positive.
  std::size_t index(std::size_t bound);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Stable 64-bit key for a double, used when a parameter value enters a stream key.
std::uint64_t key_of(double value);

}  // namespace tailnorm
