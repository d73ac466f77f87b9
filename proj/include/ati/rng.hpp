#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace ati {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014). Used to derive seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

/// Seedable generator with a portable output sequence.
///
/// Engine: std::mt19937_64, whose sequence is fixed by the C++ standard.
/// Distributions are implemented here rather than with <random>'s
/// distribution classes, whose algorithms are implementation-defined:
///   uniform01()        (next() >> 11) * 2^-53
///   uniform_int(lo,hi) masked rejection sampling: draw next() & mask until < n
///   bernoulli(p)       uniform01() < p
/// Substreams are keyed by (seed, name): seed' = splitmix64(seed ^ splitmix64(fnv1a64(name))).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream for a named entity, e.g. a track id.
  static Rng substream(std::uint64_t seed, std::string_view name);

  std::uint64_t next() { return engine_(); }
  double uniform01();
  /// Uniform over the closed range [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  bool bernoulli(double p);

 private:
  std::mt19937_64 engine_;
};

}  // namespace ati
