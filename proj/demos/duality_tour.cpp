// Dual pairs on random bodies: the centroid is dual to the Santaló point and
// the John point to the Löwner point; the centroid is not self-dual.

#include "aip/counterexample.hpp"
#include "aip/duality.hpp"

#include <cstdio>

int main() {
  using namespace aip;
  const auto bodies = random_bodies(2024, 12);
  const auto id = [](PointId i) { return PointFunction::of(i); };
  const std::pair<PointId, PointId> pairs[] = {{PointId::centroid, PointId::santalo},
                                               {PointId::santalo, PointId::centroid},
                                               {PointId::john, PointId::loewner},
                                               {PointId::centroid, PointId::centroid}};
  for (const auto& [p, q] : pairs) {
    const DualityReport r = dual_residual(id(p), id(q), bodies, 4);
    std::printf("%-9s -> %-9s  max |q(K^p(K)) - p(K)| / diam = %.3e over %zu bodies\n", r.p.c_str(), r.q.c_str(),
                r.max_residual, r.bodies_tested);
  }

  const Polygon k = body_kab(1.0, 2.0);
  const Vec2 g = centroid(polar(k));
  std::printf("g(K(1,2)°) = (%.17g, %.17g), -9/140 = %.17g\n", g.x(), g.y(), -9.0 / 140.0);
}
