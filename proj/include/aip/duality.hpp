#pragma once

// Duality of affine invariant points: φ_p(K) = K^{p(K)}, dual residuals,
// the product [p,q](r) = r∘φ_q∘φ_p − q∘φ_p + p, affine-invariance probes and
// the polar preimage z with p((C − z)°) = 0.

#include "aip/points.hpp"
#include "aip/random.hpp"

#include <functional>
#include <future>
#include <string>
#include <vector>

namespace aip {

/// A point map K -> p(K), possibly a composite of products.
using PointMap = std::function<Vec2(const Polygon&)>;

inline PointMap as_map(const PointFunction& pf) {
  return [pf](const Polygon& k) { return eval(pf, k); };
}

/// φ_p(K) = K^{p(K)} in absolute coordinates.
inline Polygon phi(const PointMap& p, const Polygon& k) { return polar_at(k, p(k)); }
inline Polygon phi(const PointFunction& pf, const Polygon& k) { return polar_at(k, eval(pf, k)); }

/// [p,q](r) as a point map.
inline PointMap product(PointMap p, PointMap q, PointMap r) {
  return [p = std::move(p), q = std::move(q), r = std::move(r)](const Polygon& k) -> Vec2 {
    const Polygon lp = phi(p, k);
    return r(phi(q, lp)) - q(lp) + p(k);
  };
}

inline Vec2 product_apply(const PointFunction& p, const PointFunction& q, const PointFunction& r, const Polygon& k) {
  return product(as_map(p), as_map(q), as_map(r))(k);
}

/// [p,p]^k(p)(K) for k = 1..steps.
inline std::vector<Vec2> iterate_product(const PointFunction& pf, const Polygon& body, int steps) {
  if (steps < 1) throw BadParams("steps must be >= 1");
  const PointMap p = as_map(pf);
  std::vector<Vec2> out;
  PointMap cur = p;
  for (int k = 1; k <= steps; ++k) {
    cur = product(p, p, cur);
    out.push_back(cur(body));
  }
  return out;
}

/// Runs f(i) for i in [0, n) on up to `jobs` threads; results by index.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, int jobs, F&& f) {
  std::vector<T> out(n);
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  std::vector<std::future<void>> workers;
  const std::size_t nj = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
  for (std::size_t w = 0; w < nj; ++w)
    workers.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < n; i += nj) out[i] = f(i);
    }));
  for (auto& w : workers) w.get();
  return out;
}

struct BodyResidual {
  double relative = 0.0;
  double absolute = 0.0;
  bool failed = false;
  std::string error;
};

struct DualityReport {
  std::string p, q;
  std::size_t bodies_tested = 0;
  std::size_t failures = 0;
  double max_residual = 0.0;      ///< max |q(φ_p(K)) - p(K)| / diam(K)
  double max_abs_residual = 0.0;  ///< same, not normalized
  std::size_t worst_body = 0;
  std::vector<BodyResidual> per_body;
  std::string first_error;
};

/// Per-body failures are recorded, not thrown.
inline DualityReport dual_residual(const PointFunction& p, const PointFunction& q, std::span<const Polygon> bodies,
                                   int jobs = 1) {
  DualityReport rep;
  rep.p = p.name();
  rep.q = q.name();
  rep.per_body = parallel_map<BodyResidual>(bodies.size(), jobs, [&](std::size_t i) {
    BodyResidual r;
    try {
      const Polygon& k = bodies[i];
      const Vec2 pk = eval(p, k);
      const Vec2 diff = eval(q, polar_at(k, pk)) - pk;
      r.absolute = diff.norm();
      r.relative = r.absolute / diameter(k);
    } catch (const Error& e) {
      r.failed = true;
      r.error = e.what();
    }
    return r;
  });
  for (std::size_t i = 0; i < rep.per_body.size(); ++i) {
    const auto& r = rep.per_body[i];
    ++rep.bodies_tested;
    if (r.failed) {
      if (rep.failures++ == 0) rep.first_error = r.error;
      continue;
    }
    if (r.relative > rep.max_residual) {
      rep.max_residual = r.relative;
      rep.worst_body = i;
    }
    rep.max_abs_residual = std::max(rep.max_abs_residual, r.absolute);
  }
  return rep;
}

/// max over random T (cond <= 50) of |p(T(P)) - T(p(P))| / diam(T(P)).
/// The maps are drawn up front, so the result does not depend on `jobs`.
inline double invariance_check(const PointMap& p, const Polygon& body, int trials, std::uint64_t seed, int jobs = 1) {
  if (trials < 1) throw BadParams("trials must be >= 1");
  Rng rng(seed);
  std::vector<AffineMap> maps;
  for (int i = 0; i < trials; ++i) maps.push_back(random_affine(rng, 50.0));
  const Vec2 base = p(body);
  const auto dev = parallel_map<double>(maps.size(), jobs, [&](std::size_t i) {
    const Polygon tb = affine_apply(maps[i], body);
    return (p(tb) - maps[i](base)).norm() / diameter(tb);
  });
  return *std::max_element(dev.begin(), dev.end());
}

inline double invariance_check(const PointFunction& pf, const Polygon& body, int trials, std::uint64_t seed,
                               int jobs = 1) {
  return invariance_check(as_map(pf), body, trials, seed, jobs);
}

/// z in int(C) with p((C - z)°) = 0, by damped Newton with a
/// central-difference Jacobian and backtracking on |F|², started at `init`.
/// Roots need not be unique; different starts can find different roots.
inline PointResult polar_preimage(const PointFunction& pf, const Polygon& c, const Vec2& init) {
  const double diam = diameter(c);
  auto f = [&](const Vec2& z) { return eval(pf, polar_about(c, z)); };
  auto ok = [&](const Vec2& z) { return interior_margin(c, z) > 1e-9 * diam; };
  if (!ok(init)) throw PointNotInterior("initial point must be interior");
  Vec2 z = init;
  constexpr int kMaxIter = 100;
  for (int it = 0; it <= kMaxIter; ++it) {
    const Vec2 fz = f(z);
    const double scale = diameter(polar_about(c, z));
    if (fz.norm() < 1e-8 * scale) {
      // One extra Newton step is cheap and usually lands at rounding level.
      if (fz.norm() < 1e-13 * scale || it == kMaxIter) return {z, it, fz.norm()};
    }
    if (it == kMaxIter) break;
    const double h = 1e-7 * std::max(diam, 1e-300);
    Mat2 jac;
    for (int k = 0; k < 2; ++k) {
      const Vec2 e = Vec2::Unit(k) * h;
      jac.col(k) = (f(z + e) - f(z - e)) / (2.0 * h);
    }
    const Vec2 step = -jac.fullPivLu().solve(fz);
    if (!step.allFinite()) break;
    double alpha = 1.0;
    bool moved = false;
    for (; alpha > 1e-10; alpha *= 0.5) {
      const Vec2 y = z + alpha * step;
      if (!ok(y)) continue;
      if (f(y).squaredNorm() < fz.squaredNorm()) {
        z = y;
        moved = true;
        break;
      }
    }
    if (!moved) {
      if (fz.norm() < 1e-8 * scale) return {z, it, fz.norm()};
      break;
    }
  }
  throw ConvergenceFailure("polar preimage iteration did not converge");
}

}  // namespace aip
