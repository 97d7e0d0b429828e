#pragma once

// Seeded random bodies and maps for the randomized suites.
//
// The generator is std::mt19937_64. Doubles are formed from its top 53 bits
// rather than through <random> distributions so that sequences are identical
// across standard library implementations.

#include "aip/affine.hpp"

#include <cstdint>
#include <random>

namespace aip {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi].
  int integer(int lo, int hi) { return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1)); }

  Vec2 in_unit_disk() {
    while (true) {
      const Vec2 v(uniform(-1.0, 1.0), uniform(-1.0, 1.0));
      if (v.squaredNorm() < 1.0) return v;
    }
  }
  Vec2 direction() {
    const double t = uniform(0.0, 2.0 * std::numbers::pi);
    return {std::cos(t), std::sin(t)};
  }

 private:
  std::mt19937_64 engine_;
};

inline Mat2 rotation(double t) {
  Mat2 r;
  r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  return r;
}

/// R(a) diag(s1, s2) R(b), possibly with a reflection; singular values in
/// [1/sqrt(max_cond), sqrt(max_cond)] so cond(A) <= max_cond.
inline Mat2 random_linear(Rng& rng, double max_cond = 50.0) {
  const double lim = 0.5 * std::log(max_cond);
  const Vec2 s(std::exp(rng.uniform(-lim, lim)), std::exp(rng.uniform(-lim, lim)));
  Mat2 a = rotation(rng.uniform(0.0, 2.0 * std::numbers::pi)) * s.asDiagonal() *
           rotation(rng.uniform(0.0, 2.0 * std::numbers::pi));
  if (rng.uniform() < 0.5) a.col(0) *= -1.0;
  return a;
}

inline AffineMap random_affine(Rng& rng, double max_cond = 50.0) {
  return {random_linear(rng, max_cond), Vec2(rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0))};
}

/// Convex hull of k uniform points in the unit disk.
inline Polygon random_hull(Rng& rng, int k) {
  while (true) {
    std::vector<Vec2> pts;
    for (int i = 0; i < k; ++i) pts.push_back(rng.in_unit_disk());
    try {
      return canonicalize(pts);
    } catch (const DegenerateInput&) {
    }
  }
}

/// Hull of k in [5, 30] disk points under a random affine map.
inline Polygon random_body(Rng& rng) {
  const int k = rng.integer(5, 30);
  const Polygon p = random_hull(rng, k);
  return affine_apply(random_affine(rng, 10.0), p);
}

/// The first n bodies of the sequence seeded by `seed`.
inline std::vector<Polygon> random_bodies(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  std::vector<Polygon> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(random_body(rng));
  return out;
}

}  // namespace aip
