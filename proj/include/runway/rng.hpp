#pragma once

#include <cstdint>

#include "runway/sim_config.hpp"

namespace runway {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) { return splitmix64(h ^ splitmix64(v)); }

/// What a draw is used for. Part of the stream key, so adding a new use never
/// shifts the draws of an existing one.
enum class Purpose : std::uint32_t {
  SystemArrival = 1,
  Transit = 2,
  Rot = 3,
  Benchmark = 4,
  Optimizer = 5,
  Generator = 6,
};

/// Counter-based uniform stream keyed by (seed, replication, entity, purpose).
/// The k-th draw depends only on the key and k, never on what else was drawn,
/// which is what makes common random numbers hold across schedules. A
/// flipped stream returns 1 - u for every u.
class KeyedStream {
 public:
  KeyedStream(std::uint64_t seed, std::uint64_t replication, std::uint64_t entity, Purpose purpose,
              bool flipped = false)
      : key_(hash_combine(hash_combine(hash_combine(splitmix64(seed), replication), entity),
                          static_cast<std::uint64_t>(purpose))),
        flipped_(flipped) {}

  /// Uniform on the open interval (0, 1).
  double uniform() {
    const std::uint64_t bits = splitmix64(key_ + counter_++ * 0xD1B54A32D192ED03ULL);
    const double u = (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
    return flipped_ ? 1.0 - u : u;
  }
  /// The k-th uniform without advancing.
  double uniform_at(std::uint64_t k) const {
    KeyedStream copy = *this;
    copy.counter_ = k;
    return copy.uniform();
  }

  double truncated_normal(const TruncatedNormal& d) { return truncated_normal_quantile(d, uniform()); }
  double beta(const BetaShape& b) { return beta_quantile(b, uniform()); }

  static double truncated_normal_quantile(const TruncatedNormal& d, double u);
  static double beta_quantile(const BetaShape& b, double u);
  static double normal_quantile(double u);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool flipped_;
};

}  // namespace runway
