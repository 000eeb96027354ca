#include "freightcoord/rng.hpp"

namespace fcoord {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : key_(mix64(mix64(seed + kGolden) ^ (stream_id * 0xD1B54A32D192ED03ULL + 1))) {}

RngStream RngStream::substream(std::uint64_t id) const {
  return RngStream(FromKey{}, mix64(key_ ^ mix64(id + 0x632BE59BD9B4E019ULL)));
}

std::uint64_t RngStream::bits(std::uint64_t counter) const {
  return mix64(key_ + (counter + 1) * kGolden);
}

double RngStream::uniform(std::uint64_t counter) const {
  return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
}

std::int64_t RngEngine::uniform_int(std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>((*this)());
  // Rejection sampling keeps the draw exactly uniform.
  const std::uint64_t limit = max() - max() % span;
  std::uint64_t x;
  do {
    x = (*this)();
  } while (x >= limit);
  return lo + static_cast<std::int64_t>(x % span);
}

}  // namespace fcoord
