#pragma once

#include <cstdint>
#include <limits>

namespace sfebound {

/// SplitMix64 (Steele, Lea & Flood). Small enough to construct once per
/// trial, which is what makes counter-based seeding cheap. Satisfies
/// UniformRandomBitGenerator so it plugs into <random> distributions.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Seed for item `index` of a run started with `master`. Depends only on the
/// pair, so items can be processed in any order or in parallel.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  SplitMix64 outer(master);
  const std::uint64_t salt = outer();
  SplitMix64 inner(salt ^ (index * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL));
  inner();
  return inner();
}

}  // namespace sfebound
