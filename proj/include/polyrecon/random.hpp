#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "polyrecon/types.hpp"

namespace polyrecon {

/// Seeded generator with a pinned algorithm so that experiment records are
/// reproducible across standard-library implementations: raw draws come from
/// std::mt19937_64 (fully specified by the standard), uniforms use the top 53
/// bits, and normals use the Marsaglia polar transform.
class Rng {
 public:
  static constexpr const char* kAlgorithm = "mt19937_64+marsaglia-polar";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double a, b, s;
    do {
      a = 2.0 * uniform() - 1.0;
      b = 2.0 * uniform() - 1.0;
      s = a * a + b * b;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = b * scale;
    has_spare_ = true;
    return a * scale;
  }

  /// Uniform on the unit sphere S^{d-1} (normalized standard Gaussian).
  Vec unit_vector(int d) {
    Vec v(d);
    double norm = 0.0;
    do {
      for (int k = 0; k < d; ++k) v(k) = normal();
      norm = v.norm();
    } while (norm < 1e-300);
    return v / norm;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// splitmix64 finalizer; mixes a base seed with stream coordinates.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(seed) ^ a) ^ (b * 0x632be59bd9b4e019ULL));
}

}  // namespace polyrecon
