#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace guidrift {

// Deterministic RNG with cheap keyed substreams.
//
// std::* distributions are implementation-defined, so every draw here is
// hand-rolled on top of splitmix64: identical (seed, key) sequences produce
// identical bytes on every platform. Substreams are derived by FNV-1a
// hashing the parent seed with arbitrary key parts, which keeps e.g. the
// detector and OCR draws of the same frame independent of each other and of
// draw-count changes elsewhere.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    // splitmix64 (Steele et al.), public domain reference constants.
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform01() < p;
  }

  // Box-Muller; one value per call (the pair's second half is discarded to
  // keep draw counts position-independent).
  double normal(double sigma) {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return sigma * r * std::cos(6.283185307179586 * u2);
  }

  // Uniform integer in [0, n). Modulo bias is irrelevant at simulator scale.
  uint64_t uniform_int(uint64_t n) { return n == 0 ? 0 : next_u64() % n; }

  int uniform_range(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(uniform_int(static_cast<uint64_t>(hi - lo + 1)));
  }

  // Knuth's product method; fine for the small means used here.
  int poisson(double mean) {
    if (mean <= 0.0) return 0;
    const double limit = std::exp(-mean);
    int k = 0;
    double prod = uniform01();
    while (prod > limit) {
      ++k;
      prod *= uniform01();
    }
    return k;
  }

 private:
  uint64_t state_;
};

inline uint64_t hash_mix(uint64_t h, uint64_t v) {
  // FNV-1a over the value's bytes.
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (i * 8)) & 0xffULL;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline uint64_t hash_mix(uint64_t h, std::string_view s) {
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// substream(seed, parts...) -> independent deterministic stream.
template <typename... Parts>
Rng substream(uint64_t seed, Parts... parts) {
  uint64_t h = 0xcbf29ce484222325ULL;
  h = hash_mix(h, seed);
  (void)std::initializer_list<int>{(h = hash_mix(h, parts), 0)...};
  return Rng(h);
}

}  // namespace guidrift
