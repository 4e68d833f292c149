#pragma once

#include <cstdint>
#include <vector>

namespace dtomo {

// SplitMix64 step. Used as the engine everywhere results must be
// bit-reproducible across platforms and thread counts; std::shuffle and
// the std <random> distributions are not portable in that sense.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Order-sensitive seed combiner for hierarchical streams
// (master seed -> per-image -> per-restart, etc.).
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t tag) {
  std::uint64_t s = base ^ (0x632be59bd9b4e019ull * (tag + 0x9e3779b97f4a7c15ull));
  return splitmix64(s);
}

inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t t1, std::uint64_t t2) {
  return mix_seed(mix_seed(base, t1), t2);
}

inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t t1, std::uint64_t t2,
                              std::uint64_t t3) {
  return mix_seed(mix_seed(base, t1, t2), t3);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() { return splitmix64(state_); }

  // Uniform on [0, 1) with 53-bit resolution.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform on [-1, 1); exact scaling, never returns 1.
  double next_symmetric() { return 2.0 * next_double() - 1.0; }

  // Unbiased integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t limit = ~0ull - ~0ull % n;
    std::uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % n;
  }

 private:
  std::uint64_t state_;
};

// Fisher-Yates with our own engine so shuffles reproduce bit-exactly.
template <typename T>
void shuffle(std::vector<T>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.next_below(i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace dtomo
