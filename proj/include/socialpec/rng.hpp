#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace socialpec {

// splitmix64 step; the workhorse behind every random draw in the project.
// Using our own generator (not <random> distributions) keeps runs
// bit-reproducible across standard libraries.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// One-shot mix of a 64-bit value.
inline std::uint64_t mix64(std::uint64_t x) {
  std::uint64_t s = x;
  return splitmix64(s);
}

// Counter-style stream: the state is derived by hashing a key tuple, so the
// stream for (seed, rollout, ped, t) can be reconstructed anywhere without
// threading generator state through the call tree.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : state_(mix64(seed)) {}

  static RngStream keyed(std::initializer_list<std::uint64_t> fields) {
    std::uint64_t h = 0x6a09e667f3bcc909ull;
    for (std::uint64_t f : fields) h = mix64(h ^ mix64(f));
    return RngStream(h);
  }

  std::uint64_t next_u64() { return splitmix64(state_); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform();  // (0, 1], keeps log() finite
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  // Uniform integer in [0, n); n must be > 0. Rejection sampling avoids
  // modulo bias.
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Fisher-Yates with our own stream; std::shuffle is implementation-defined.
template <typename T>
void shuffle(std::vector<T>& items, RngStream& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace socialpec
