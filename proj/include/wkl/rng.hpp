#pragma once

// Deterministic RNG: raw mersenne bits with explicit scalar transforms, so
// that seeded sampling is reproducible bit-for-bit across standard library
// implementations (std distributions are not pinned). Substreams derive
// per-sample seeds by splitmix mixing, making parallel sample evaluation
// order-independent.

#include <cmath>
#include <cstdint>
#include <random>

namespace wkl {

class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed), gen_(seed) {}

  Rng substream(uint64_t index) const {
    uint64_t z = seed_ + 0x9e3779b97f4a7c15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return Rng(z ^ (z >> 31));
  }

  double uniform(double a = 0.0, double b = 1.0) {
    const double u = (gen_() >> 11) * 0x1.0p-53;
    return a + (b - a) * u;
  }

  double normal() {
    const double u1 = uniform(0x1.0p-60, 1.0);
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  int uniform_int(int n) { return static_cast<int>(gen_() % static_cast<uint64_t>(n)); }

 private:
  uint64_t seed_;
  std::mt19937_64 gen_;
};

}  // namespace wkl
