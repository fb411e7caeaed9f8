#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace fgr {

// All randomness comes from std::mt19937_64, whose output sequence is fixed
// by the standard. The std distributions are implementation-defined, so the
// few we need are written out here to keep results identical across
// toolchains.

/// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Independent generator for (seed, stream); e.g. one stream per sample.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(mix64(mix64(seed) ^ mix64(stream + 0x632be59bd9b4e019ULL)));
}

/// Uniform in [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& rng) noexcept {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound), unbiased (rejection on the top range).
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t bound) noexcept {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t r;
  do r = rng();
  while (r >= limit);
  return r % bound;
}

/// Standard normal draws by the Box-Muller transform, generated in pairs.
class NormalSource {
 public:
  explicit NormalSource(std::mt19937_64& rng) : rng_(rng) {}

  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform01(rng_);  // (0, 1]
    double u2 = uniform01(rng_);
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 6.283185307179586 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64& rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace fgr
