#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace avocast {

// Seeded random source with a bit-stable stream. std::mt19937_64 output is
// fully specified by the standard; all distribution shaping is done here so
// generated values do not depend on libstdc++ distribution internals.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // [0, 1)
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double normal(double mean, double stddev);

  // [0, n), rejection sampled so every value is equally likely
  std::uint64_t uniform_index(std::uint64_t n);

  std::vector<std::size_t> permutation(std::size_t n);

private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace avocast
