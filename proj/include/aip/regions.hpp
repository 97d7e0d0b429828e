#pragma once

// Affine invariant set mappings approximated by polygons: floating body,
// illumination body, Santaló regions S_c, John regions J_c and
// symmetric-core regions M_c.
//
// Ray-based maps sample the region boundary along rays from its unique
// optimizer point and return the inscribed polygon. The floating body is the
// outer approximation by finitely many cutting halfplanes. Every result
// carries an a-posteriori grid error estimate.

#include "aip/points.hpp"

#include <functional>

namespace aip {

struct Region {
  Polygon polygon;
  int rays = 0;
  double param = 0.0;
  double grid_error = 0.0;
  Vec2 origin = Vec2::Zero();
};

inline std::vector<Vec2> uniform_directions(int m) {
  std::vector<Vec2> d;
  d.reserve(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    const double t = 2.0 * std::numbers::pi * k / m;
    d.emplace_back(std::cos(t), std::sin(t));
  }
  return d;
}

namespace detail {

inline void check_rays(int m) {
  if (m < 64) throw BadParams("at least 64 rays/directions required");
}

/// Distance from c along u (|u| = 1) to the boundary of P; c interior.
inline double exit_distance(const Polygon& p, const Vec2& c, const Vec2& u) {
  double t = std::numeric_limits<double>::infinity();
  for (const auto& h : halfplanes(p)) {
    const double den = h.normal.dot(u);
    if (den > 0.0) t = std::min(t, (h.offset - h.normal.dot(c)) / den);
  }
  return t;
}

/// Largest t in [lo, hi] with inside(t) true; inside(lo) holds and inside
/// is monotone (true then false).
inline double bisect(const std::function<bool(double)>& inside, double lo, double hi, double tol) {
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    (inside(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Max over arcs of the height of the triangle bounded by a chord and the
/// extensions of its two neighbouring chords (the arc of a convex curve lies
/// in that triangle). Falls back to the chord length where the triangle is
/// not well formed.
inline double chord_error(const std::vector<Vec2>& p) {
  const std::size_t n = p.size();
  double err = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const Vec2& a0 = p[(k + n - 1) % n];
    const Vec2& a = p[k];
    const Vec2& b = p[(k + 1) % n];
    const Vec2& b0 = p[(k + 2) % n];
    const Vec2 chord = b - a;
    const double len = chord.norm();
    if (len == 0.0) continue;
    const Vec2 da = a - a0, db = b - b0;
    // A convex curve through three collinear points contains the segment.
    if (std::abs(cross(chord, da)) <= 1e-9 * len * da.norm() || std::abs(cross(chord, db)) <= 1e-9 * len * db.norm())
      continue;
    const double den = cross(da, db);
    double h = len;
    if (std::abs(den) > 1e-300) {
      const double s = cross(b - a, db) / den;  // X = a + s * da
      const Vec2 x = a + s * da;
      const double r = (x - b).dot(db) / std::max(db.squaredNorm(), 1e-300);
      if (s >= 0.0 && r >= 0.0) h = std::min(len, std::abs(cross(chord, x - a)) / len);
    }
    err = std::max(err, h);
  }
  return err;
}

/// Ray-sampled region: for each direction, the boundary point where
/// inside() switches from true to false between the origin and the body
/// boundary (or an explicit outer limit).
inline Region ray_region(const Polygon& p, const Vec2& origin, std::span<const Vec2> dirs,
                         const std::function<bool(const Vec2&)>& inside,
                         const std::function<double(const Vec2&)>& outer_limit, double param) {
  std::vector<Vec2> pts;
  pts.reserve(dirs.size());
  const double tol = 1e-13 * diameter(p);
  for (const Vec2& d : dirs) {
    const Vec2 u = d.normalized();
    const double hi = outer_limit(u);
    const double t = bisect([&](double s) { return inside(origin + s * u); }, 0.0, hi, tol);
    pts.push_back(origin + t * u);
  }
  Polygon poly = canonicalize(pts);
  return {std::move(poly), static_cast<int>(dirs.size()), param, chord_error(pts), origin};
}

inline double distance_to_polygon(const Polygon& p, const Vec2& x) {
  if (contains(p, x)) return 0.0;
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Vec2 a = p.vertex(i), b = p.vertex(i + 1);
    const double t = std::clamp((x - a).dot(b - a) / (b - a).squaredNorm(), 0.0, 1.0);
    d = std::min(d, (a + t * (b - a) - x).norm());
  }
  return d;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Floating body

/// Offset t with |{x in P : <x, u> >= t}| = cut_area (u unit).
inline double cap_offset(const Polygon& p, const Vec2& u, double cut_area) {
  const double hi = support(p, u), lo = -support(p, -u);
  auto cap = [&](double t) {
    const auto c = clip_halfplane(p, {-u, -t});
    return c ? area(*c) : 0.0;
  };
  // cap(t) decreases in t; find the largest t with cap(t) >= cut_area.
  return detail::bisect([&](double t) { return cap(t) >= cut_area; }, lo, hi, 1e-12 * (hi - lo));
}

/// Outer approximation of K_δ from the cutting halfplanes normal to `dirs`.
inline Region floating_body(const Polygon& p, double delta, std::span<const Vec2> dirs) {
  if (!(delta >= 0.0) || !(delta < 4.0 / 9.0)) throw BadParams("floating body needs 0 <= delta < 4/9");
  if (dirs.empty()) throw BadParams("no directions");
  const Vec2 g = centroid(p);
  if (delta == 0.0) return {p, static_cast<int>(dirs.size()), 0.0, 0.0, g};
  const double cut = delta * area(p);
  std::optional<Polygon> body = p;
  std::vector<Vec2> mids;
  for (const Vec2& d : dirs) {
    const Vec2 u = d.normalized();
    const double t = cap_offset(p, u, cut);
    body = clip_halfplane(*body, {u, t});
    if (!body) throw EmptyResult("floating body is empty for this delta");
    // Chord midpoint of the cutting line.
    const Vec2 foot = t * u, along = perp(u);
    double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
    for (const auto& h : halfplanes(p)) {
      const double num = h.offset - h.normal.dot(foot), den = h.normal.dot(along);
      if (den > 0.0) hi = std::min(hi, num / den);
      if (den < 0.0) lo = std::max(lo, num / den);
    }
    if (lo < hi) mids.push_back(foot + 0.5 * (lo + hi) * along);
  }
  double err = 0.0;
  try {
    const Polygon inner = canonicalize(mids);
    for (const auto& v : body->vertices()) err = std::max(err, detail::distance_to_polygon(inner, v));
  } catch (const DegenerateInput&) {
    err = diameter(*body);
  }
  return {std::move(*body), static_cast<int>(dirs.size()), delta, err, g};
}

inline Region floating_body(const Polygon& p, double delta, int m = 256) {
  detail::check_rays(m);
  const auto d = uniform_directions(m);
  return floating_body(p, delta, d);
}

// ---------------------------------------------------------------------------
// Illumination body

/// F_K(x) = |conv(x, K)| = |K| + (1/2) sum_e len_e max(0, <n_e, x> - h_e).
inline double illumination_area(const Polygon& p, const Vec2& x) {
  double f = area(p);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Vec2 n = p.normal(i);
    const double excess = n.dot(x - p[i]);
    if (excess > 0.0) f += 0.5 * p.edge(i).norm() * excess;
  }
  return f;
}

/// conv(P ∪ {boundary points of K^δ along rays from g(P)}).
inline Region illumination_body(const Polygon& p, double delta, std::span<const Vec2> dirs) {
  if (!(delta >= 0.0)) throw BadParams("illumination body needs delta >= 0");
  if (dirs.empty()) throw BadParams("no directions");
  const Vec2 g = centroid(p);
  if (delta == 0.0) return {p, static_cast<int>(dirs.size()), 0.0, 0.0, g};
  const double level = (1.0 + delta) * area(p);
  const double tol = 1e-13 * diameter(p);
  std::vector<Vec2> pts;
  for (const Vec2& d : dirs) {
    const Vec2 u = d.normalized();
    const double lo = detail::exit_distance(p, g, u);
    double hi = 2.0 * lo;
    while (illumination_area(p, g + hi * u) <= level) hi *= 2.0;
    const double t =
        detail::bisect([&](double s) { return illumination_area(p, g + s * u) <= level; }, lo, hi, tol);
    pts.push_back(g + t * u);
  }
  const double err = detail::chord_error(pts);
  std::vector<Vec2> all = pts;
  all.insert(all.end(), p.vertices().begin(), p.vertices().end());
  return {canonicalize(all), static_cast<int>(dirs.size()), delta, err, g};
}

inline Region illumination_body(const Polygon& p, double delta, int m = 256) {
  detail::check_rays(m);
  const auto d = uniform_directions(m);
  return illumination_body(p, delta, d);
}

// ---------------------------------------------------------------------------
// Santaló, John and symmetric-core regions

/// S_c = {z : |P^z| <= (1 + c) |P^{s(P)}|}.
inline Region santalo_region(const Polygon& p, double c, std::span<const Vec2> dirs) {
  if (!(c > 0.0)) throw BadParams("Santaló region needs c > 0");
  const Vec2 s = santalo_point(p).value;
  const double level = (1.0 + c) * polar_area(p, s);
  return detail::ray_region(
      p, s, dirs,
      [&](const Vec2& x) { return interior_margin(p, x) > 0.0 && polar_area(p, x) <= level; },
      [&](const Vec2& u) { return detail::exit_distance(p, s, u); }, c);
}

inline Region santalo_region(const Polygon& p, double c, int m = 256) {
  detail::check_rays(m);
  const auto d = uniform_directions(m);
  return santalo_region(p, c, d);
}

/// J_c = {x : f_K(x) >= c ||f_K||_inf}, rays from the John point.
inline Region john_region(const Polygon& p, double c, std::span<const Vec2> dirs) {
  if (!(c > 0.0) || !(c < 1.0)) throw BadParams("John region needs 0 < c < 1");
  const Vec2 j = john_ellipse(p).center;
  const double level = c * max_centered_area(p, j);
  return detail::ray_region(
      p, j, dirs, [&](const Vec2& x) { return max_centered_area(p, x) >= level; },
      [&](const Vec2& u) { return detail::exit_distance(p, j, u); }, c);
}

inline Region john_region(const Polygon& p, double c, int m = 256) {
  detail::check_rays(m);
  const auto d = uniform_directions(m);
  return john_region(p, c, d);
}

/// M_c = {x : |P ∩ (2x - P)| >= c |P ∩ (2m(P) - P)|}.
inline Region symcore_region(const Polygon& p, double c, std::span<const Vec2> dirs) {
  if (!(c > 0.0) || !(c < 1.0)) throw BadParams("symmetric-core region needs 0 < c < 1");
  const Vec2 m = symcore_point(p).value;
  const double level = c * symcore_area(p, m);
  return detail::ray_region(
      p, m, dirs, [&](const Vec2& x) { return symcore_area(p, x) >= level; },
      [&](const Vec2& u) { return detail::exit_distance(p, m, u); }, c);
}

inline Region symcore_region(const Polygon& p, double c, int m = 256) {
  detail::check_rays(m);
  const auto d = uniform_directions(m);
  return symcore_region(p, c, d);
}

}  // namespace aip
