#pragma once

#include <cstdint>
#include <limits>

namespace fcoord {

/// Counter-based random stream. Draw i of a stream is a pure function of
/// (key, i), so independent workers can consume disjoint counters of the
/// same stream, or distinct substreams, without coordination.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  /// Child stream keyed by (this key, id).
  RngStream substream(std::uint64_t id) const;

  std::uint64_t bits(std::uint64_t counter) const;
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform(std::uint64_t counter) const;

  std::uint64_t key() const { return key_; }

 private:
  struct FromKey {};
  RngStream(FromKey, std::uint64_t key) : key_(key) {}

  std::uint64_t key_;
};

/// Sequential engine over an RngStream; satisfies UniformRandomBitGenerator.
class RngEngine {
 public:
  using result_type = std::uint64_t;

  explicit RngEngine(RngStream stream) : stream_(stream) {}
  explicit RngEngine(std::uint64_t seed) : stream_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return stream_.bits(counter_++); }
  double uniform() { return stream_.uniform(counter_++); }
  /// Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  bool bernoulli(double p) { return uniform() < p; }

 private:
  RngStream stream_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x);

}  // namespace fcoord
