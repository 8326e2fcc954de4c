#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace localgp {

// Seeded generator whose output is identical across standard libraries:
// the engine is fully specified by the standard, and the derived draws below
// avoid the implementation-defined std:: distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer on [0, n), n > 0, by rejection.
  std::uint64_t below(std::uint64_t n);

  // Standard normal by Box-Muller.
  double normal();

 private:
  std::mt19937_64 engine_;
};

// Fisher-Yates shuffle driven by Rng::below.
template <typename T>
void shuffle(std::vector<T>& values, Rng& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(values[i - 1], values[j]);
  }
}

// k distinct indices from [0, n), in the order drawn.
std::vector<std::int64_t> sample_without_replacement(std::int64_t n, std::int64_t k, Rng& rng);

}  // namespace localgp
