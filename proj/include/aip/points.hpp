#pragma once

// Affine invariant points: centroid g, Santaló point s, John point j,
// Löwner point l, the symmetric-core point m and the two-cap family
// p_{ε,δ}.

#include "aip/ellipse.hpp"
#include "aip/polar.hpp"

#include <array>
#include <string>
#include <string_view>

namespace aip {

enum class PointId { centroid, santalo, john, loewner, symcore, capfamily };

inline std::string_view to_string(PointId id) {
  switch (id) {
    case PointId::centroid: return "centroid";
    case PointId::santalo: return "santalo";
    case PointId::john: return "john";
    case PointId::loewner: return "loewner";
    case PointId::symcore: return "symcore";
    case PointId::capfamily: return "capfamily";
  }
  return "?";
}

inline PointId point_id_from_string(std::string_view s) {
  for (auto id : {PointId::centroid, PointId::santalo, PointId::john, PointId::loewner, PointId::symcore,
                  PointId::capfamily})
    if (s == to_string(id)) return id;
  // Short aliases used throughout the literature.
  if (s == "g") return PointId::centroid;
  if (s == "s") return PointId::santalo;
  if (s == "j") return PointId::john;
  if (s == "l") return PointId::loewner;
  if (s == "m") return PointId::symcore;
  throw ParseError("unknown point function '" + std::string(s) + "'");
}

/// An affine invariant point evaluator. Only capfamily uses eps/delta.
struct PointFunction {
  PointId id = PointId::centroid;
  double eps = 0.0;
  double delta = 0.0;

  static PointFunction of(PointId id) {
    if (id == PointId::capfamily) throw BadParams("capfamily needs eps and delta");
    return {id, 0.0, 0.0};
  }
  static PointFunction caps(double eps, double delta) {
    if (!(eps > 0.0) || !(delta > 0.0)) throw BadParams("capfamily requires eps > 0 and delta > 0");
    return {PointId::capfamily, eps, delta};
  }
  /// All implemented points map a body into its interior.
  bool proper() const { return true; }
  std::string name() const { return std::string(to_string(id)); }
};

struct PointResult {
  Vec2 value = Vec2::Zero();
  int iterations = 0;
  double residual = 0.0;
};

// ---------------------------------------------------------------------------
// Santaló point

/// |(P - x)°| and the gradient/Hessian of log|(P - x)°| in closed form.
///
/// With edge normals n_i, offsets d_i and rho_i = 1 / (d_i - <n_i, x>) the
/// polar has vertices rho_i n_i, so its area is
/// (1/2) sum_i cross(n_i, n_{i+1}) rho_i rho_{i+1} and
/// d rho_i / dx = rho_i^2 n_i.
struct PolarAreaJet {
  double area;
  Vec2 grad_log;
  Mat2 hess_log;
};

inline PolarAreaJet polar_area_jet(const Polygon& p, const Vec2& x) {
  const std::size_t n = p.size();
  std::vector<Vec2> nrm(n);
  std::vector<double> rho(n);
  for (std::size_t i = 0; i < n; ++i) {
    nrm[i] = p.normal(i);
    const double d = nrm[i].dot(p[i] - x);
    if (!(d > 0.0)) throw PointNotInterior("polar area needs an interior point");
    rho[i] = 1.0 / d;
  }
  double s = 0.0;
  Vec2 g = Vec2::Zero();
  Mat2 h = Mat2::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    const double c = 0.5 * cross(nrm[i], nrm[j]);
    const double ri = rho[i], rj = rho[j];
    s += c * ri * rj;
    g += c * (ri * ri * rj * nrm[i] + ri * rj * rj * nrm[j]);
    const Mat2 mixed = nrm[i] * nrm[j].transpose();
    h += c * (2.0 * ri * ri * ri * rj * nrm[i] * nrm[i].transpose() + ri * ri * rj * rj * (mixed + mixed.transpose()) +
              2.0 * ri * rj * rj * rj * nrm[j] * nrm[j].transpose());
  }
  return {s, g / s, h / s - g * g.transpose() / (s * s)};
}

inline double polar_area(const Polygon& p, const Vec2& x) { return polar_area_jet(p, x).area; }

/// Minimizer of x -> |(P - x)°|. Damped Newton on the strictly convex
/// log|(P - x)°| from the centroid; converged when the centroid of
/// (P - x)° is below 1e-10 * diam((P - x)°).
inline PointResult santalo_point(const Polygon& p) {
  Vec2 x = centroid(p);
  constexpr int kMaxIter = 200;
  for (int it = 0; it <= kMaxIter; ++it) {
    const Polygon q = polar_about(p, x);
    const double resid = centroid(q).norm();
    if (resid < 1e-10 * diameter(q)) return {x, it, resid};
    if (it == kMaxIter) break;
    const PolarAreaJet jet = polar_area_jet(p, x);
    Vec2 step = -jet.hess_log.ldlt().solve(jet.grad_log);
    if (!(jet.grad_log.dot(step) < 0.0)) step = -jet.grad_log;
    const double f0 = std::log(jet.area);
    double alpha = 1.0;
    for (; alpha > 1e-12; alpha *= 0.5) {
      const Vec2 y = x + alpha * step;
      if (!(interior_margin(p, y) > 0.0)) continue;
      if (std::log(polar_area(p, y)) <= f0 + 1e-4 * alpha * jet.grad_log.dot(step) || resid < 1e-6 * diameter(q)) break;
    }
    x += alpha * step;
  }
  throw ConvergenceFailure("Santaló iteration did not converge");
}

// ---------------------------------------------------------------------------
// Symmetric-core point m(K)

/// |P ∩ (2x - P)|, zero when the intersection is empty.
inline double symcore_area(const Polygon& p, const Vec2& x) {
  if (!(interior_margin(p, x) > 0.0)) return 0.0;
  return intersection_area(p, reflect(p, x));
}

/// Length of segment [a, b] inside the convex polygon.
inline double segment_length_inside(const Polygon& p, const Vec2& a, const Vec2& b) {
  double lo = 0.0, hi = 1.0;
  const Vec2 d = b - a;
  for (const auto& h : halfplanes(p)) {
    const double num = h.offset - h.normal.dot(a);
    const double den = h.normal.dot(d);
    if (den == 0.0) {
      if (num < 0.0) return 0.0;
    } else if (den > 0.0) {
      hi = std::min(hi, num / den);
    } else {
      lo = std::max(lo, num / den);
    }
    if (lo >= hi) return 0.0;
  }
  return (hi - lo) * d.norm();
}

/// Gradient of x -> |P ∩ (2x - P)|: the reflected body translates with
/// velocity 2, so the derivative is 2 * sum over its edges of
/// (outward normal) * (edge length inside P).
inline Vec2 symcore_area_gradient(const Polygon& p, const Vec2& x) {
  const Polygon q = reflect(p, x);
  Vec2 g = Vec2::Zero();
  for (std::size_t i = 0; i < q.size(); ++i) g += q.normal(i) * segment_length_inside(p, q.vertex(i), q.vertex(i + 1));
  return 2.0 * g;
}

namespace detail {

/// Nelder–Mead minimization in the plane.
template <class F>
Vec2 nelder_mead(F&& f, const Vec2& start, double size, double xtol, int max_iter, int* iterations) {
  std::array<Vec2, 3> s{start, start + Vec2(size, 0.0), start + Vec2(0.0, size)};
  std::array<double, 3> v{f(s[0]), f(s[1]), f(s[2])};
  int it = 0;
  for (; it < max_iter; ++it) {
    std::array<int, 3> o{0, 1, 2};
    std::sort(o.begin(), o.end(), [&](int a, int b) { return v[a] < v[b]; });
    s = {s[o[0]], s[o[1]], s[o[2]]};
    v = {v[o[0]], v[o[1]], v[o[2]]};
    const double spread = std::max((s[1] - s[0]).norm(), (s[2] - s[0]).norm());
    if (spread < xtol) break;
    const Vec2 mid = 0.5 * (s[0] + s[1]);
    const Vec2 r = mid + (mid - s[2]);
    const double fr = f(r);
    if (fr < v[0]) {
      const Vec2 e = mid + 2.0 * (mid - s[2]);
      const double fe = f(e);
      if (fe < fr) {
        s[2] = e;
        v[2] = fe;
      } else {
        s[2] = r;
        v[2] = fr;
      }
    } else if (fr < v[1]) {
      s[2] = r;
      v[2] = fr;
    } else {
      const bool outside = fr < v[2];
      const Vec2 c = outside ? Vec2(mid + 0.5 * (r - mid)) : Vec2(mid + 0.5 * (s[2] - mid));
      const double fc = f(c);
      if (fc < std::min(fr, v[2])) {
        s[2] = c;
        v[2] = fc;
      } else {
        for (int k = 1; k < 3; ++k) {
          s[k] = s[0] + 0.5 * (s[k] - s[0]);
          v[k] = f(s[k]);
        }
      }
    }
  }
  if (iterations) *iterations += it;
  return v[0] <= v[1] && v[0] <= v[2] ? s[0] : (v[1] <= v[2] ? s[1] : s[2]);
}

}  // namespace detail

/// Maximizer of |P ∩ (2x - P)|. Nelder–Mead from the centroid, then Newton
/// on the analytic gradient (finite-difference Jacobian); the polished point
/// is kept only if it does not lower the objective. The residual is the norm
/// of the analytic gradient relative to diam(P).
inline PointResult symcore_point(const Polygon& p) {
  const double diam = diameter(p);
  auto neg = [&](const Vec2& x) { return -symcore_area(p, x); };
  int iters = 0;
  Vec2 x = centroid(p);
  double size = 0.25 * interior_margin(p, x);
  for (int restart = 0; restart < 4; ++restart) {
    x = detail::nelder_mead(neg, x, size, 1e-10 * diam, 2000, &iters);
    size = std::max(1e-4 * diam, 0.01 * size);
  }

  double best = symcore_area(p, x);
  const double h = 1e-7 * diam;
  for (int it = 0; it < 30; ++it) {
    const Vec2 g = symcore_area_gradient(p, x);
    if (g.norm() < 1e-14 * diam) break;
    Mat2 jac;
    for (int k = 0; k < 2; ++k) {
      const Vec2 e = Vec2::Unit(k) * h;
      jac.col(k) = (symcore_area_gradient(p, x + e) - symcore_area_gradient(p, x - e)) / (2.0 * h);
    }
    const Vec2 step = -jac.fullPivLu().solve(g);
    if (!step.allFinite()) break;
    const Vec2 y = x + step;
    const double fy = symcore_area(p, y);
    if (!(fy >= best - 1e-15 * best)) break;
    ++iters;
    x = y;
    best = std::max(best, fy);
    if (step.norm() < 1e-15 * diam) break;
  }
  return {x, iters, symcore_area_gradient(p, x).norm() / diam};
}

// ---------------------------------------------------------------------------
// Two-cap family p_{ε,δ}

struct Caps {
  Polygon a;  ///< cap on the side of G
  Polygon b;  ///< cap on the side of -G
  Vec2 g;     ///< G = g((P - g(P))°)
};

/// A = {x in P : <x, G> >= h_P(G) - eps}, B = {x in P : <x, G> <= -h_P(-G) + delta}
/// with G = g((P - g(P))°); A = B = P when G vanishes.
inline Caps caps(const Polygon& p, double eps, double delta) {
  if (!(eps > 0.0) || !(delta > 0.0)) throw BadParams("caps need eps > 0 and delta > 0");
  const Vec2 gp = centroid(p);
  const Vec2 g = centroid(polar_about(p, gp));
  if (g.norm() * diameter(p) <= kEpsGeom) return {p, p, g};
  auto cut = [&](const Halfplane& h) {
    auto c = clip_halfplane(p, h);
    if (!c) throw EmptyResult("cap has no interior");
    return *c;
  };
  Polygon a = cut(Halfplane::make(-g, -(support(p, g) - eps)));
  Polygon b = cut(Halfplane::make(g, -support(p, -g) + delta));
  return {std::move(a), std::move(b), g};
}

/// p_{ε,δ}(P) = g(A ∪ B); weighted centroids when the caps are disjoint,
/// inclusion–exclusion with the overlap polygon otherwise.
inline PointResult cap_point(const Polygon& p, double eps, double delta) {
  const Caps c = caps(p, eps, delta);
  const auto [area_a, g_a] = area_centroid(c.a);
  const auto [area_b, g_b] = area_centroid(c.b);
  Vec2 moment = area_a * g_a + area_b * g_b;
  double total = area_a + area_b;
  if (const auto overlap = intersect(c.a, c.b)) {
    const auto [area_ab, g_ab] = area_centroid(*overlap);
    moment -= area_ab * g_ab;
    total -= area_ab;
  }
  return {moment / total, 0, 0.0};
}

// ---------------------------------------------------------------------------

inline PointResult eval_point(const PointFunction& pf, const Polygon& p) {
  switch (pf.id) {
    case PointId::centroid: return {centroid(p), 0, 0.0};
    case PointId::santalo: return santalo_point(p);
    case PointId::john: {
      SolverInfo info;
      const Ellipse e = john_ellipse(p, &info);
      return {e.center, info.iterations, info.gap};
    }
    case PointId::loewner: {
      SolverInfo info;
      const Ellipse e = loewner_ellipse(p, &info);
      return {e.center, info.iterations, info.gap};
    }
    case PointId::symcore: return symcore_point(p);
    case PointId::capfamily: return cap_point(p, pf.eps, pf.delta);
  }
  throw BadParams("unknown point function");
}

inline Vec2 eval(const PointFunction& pf, const Polygon& p) { return eval_point(pf, p).value; }

}  // namespace aip
