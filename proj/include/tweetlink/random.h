#ifndef TWEETLINK_RANDOM_H_
#define TWEETLINK_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace tweetlink {

// The standard distributions are implementation-defined, so everything that
// must be reproducible across toolchains draws through these helpers.
using Rng = std::mt19937_64;

// Uniform integer in [0, n). n must be positive.
inline std::size_t UniformIndex(Rng& rng, std::size_t n) {
  const std::uint64_t range = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = Rng::max() - Rng::max() % range;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return static_cast<std::size_t>(draw % range);
}

// Uniform double in [0, 1) with 53 bits of randomness.
inline double UniformUnit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double UniformRange(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * UniformUnit(rng);
}

template <typename T>
void Shuffle(std::vector<T>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[UniformIndex(rng, i)]);
  }
}

}  // namespace tweetlink

#endif  // TWEETLINK_RANDOM_H_
