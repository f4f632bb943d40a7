#pragma once

#include <cstdint>
#include <random>

namespace kaclab {

// Stateless 64-bit mixer (SplitMix64 finalizer).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// A random stream addressed by (master seed, counter path). Two streams
// derived from different counters are statistically independent, and the
// stream for a given path never depends on how many other streams were
// created before it. This is what keeps parallel runs bit-identical to
// serial ones.
class RandomStream {
 public:
  using Engine = std::mt19937_64;

  explicit RandomStream(std::uint64_t seed) : key_(mix64(seed)), engine_(key_) {}

  // Independent child stream for sample/task `index`.
  RandomStream substream(std::uint64_t index) const {
    return RandomStream(Tag{}, mix64(key_ ^ mix64(index + 0x632be59bd9b4e019ULL)));
  }

  static RandomStream forSample(std::uint64_t seed, std::uint64_t index) {
    return RandomStream(seed).substream(index);
  }

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform_(engine_); }
  std::uint64_t bits() { return engine_(); }

  Engine& engine() { return engine_; }

 private:
  struct Tag {};
  RandomStream(Tag, std::uint64_t key) : key_(key), engine_(key) {}

  std::uint64_t key_;
  Engine engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace kaclab
