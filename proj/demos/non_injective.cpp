// Builds the two-cap point p_{eps,delta} for a few eta and shows that
// z -> p((C - z)°) on the cross-polytope vanishes at two distinct points.

#include "aip/counterexample.hpp"
#include "aip/duality.hpp"

#include <cstdio>

int main() {
  using namespace aip;
  const Polygon c = cross_body();
  for (double eta : {0.25, 0.5, 0.75}) {
    const NonInjectivityCertificate cert = evaluate_certificate(eta, default_eps(eta), solve_delta(eta, default_eps(eta)));
    std::printf("eta=%.2f  eps=%.6e  delta=%.6e  alpha=%.12f  %s\n", eta, cert.eps, cert.delta, cert.alpha_closed,
                cert.passed ? "certified" : cert.failure.c_str());
    const PointFunction pf = PointFunction::caps(cert.eps, cert.delta);
    // z = 0 is reached only from z = 0 itself: the polar there is the square,
    // both caps are the whole body, and nearby bodies have thin caps.
    for (const Vec2& init : {Vec2(0.0, 0.0), Vec2(0.9 * eta, 0.0)}) {
      const PointResult r = polar_preimage(pf, c, init);
      std::printf("    start (%.3f, %.3f) -> root (%.12f, %.12f)  |F| = %.2e\n", init.x(), init.y(), r.value.x(),
                  r.value.y(), r.residual);
    }
  }
}
