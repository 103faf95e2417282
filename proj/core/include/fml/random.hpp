#pragma once

#include <cstdint>

namespace fml {

/// SplitMix64: a 64-bit generator whose streams can be split by seed
/// derivation, so every trial of a campaign is reproducible from one number.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform on {0, ..., n-1}.
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

  /// Seed of the independent child stream `index`.
  std::uint64_t split(std::uint64_t index) const {
    SplitMix64 g(state_ ^ (0xd1b54a32d192ed03ull * (index + 1)));
    return g.next();
  }

 private:
  std::uint64_t state_;
};

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return SplitMix64(base).split(index);
}

}  // namespace fml
