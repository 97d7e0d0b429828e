#pragma once

// Convex polygons in canonical form and the basic algebra on them: area and
// centroid, support function, halfplane clipping, intersection and
// Hausdorff distance.

#include "aip/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

namespace aip {

class Polygon;
Polygon canonicalize(std::span<const Vec2> points);

/// Strictly convex polygon, counter-clockwise, starting at the
/// lexicographically smallest vertex. Only `canonicalize` constructs one, so
/// every instance satisfies the invariants.
class Polygon {
 public:
  const std::vector<Vec2>& vertices() const { return v_; }
  std::size_t size() const { return v_.size(); }
  const Vec2& operator[](std::size_t i) const { return v_[i]; }
  const Vec2& vertex(std::size_t i) const { return v_[i % v_.size()]; }

  /// Edge i runs from vertex i to vertex i+1.
  Vec2 edge(std::size_t i) const { return vertex(i + 1) - vertex(i); }
  /// Outward unit normal of edge i.
  Vec2 normal(std::size_t i) const {
    const Vec2 e = edge(i);
    return Vec2(e.y(), -e.x()).normalized();
  }

 private:
  explicit Polygon(std::vector<Vec2> v) : v_(std::move(v)) {}
  friend Polygon canonicalize(std::span<const Vec2> points);

  std::vector<Vec2> v_;
};

/// {x : <normal, x> <= offset} with |normal| = 1.
struct Halfplane {
  Vec2 normal;
  double offset = 0.0;

  /// Normalizes (a, beta) so that |a| = 1.
  static Halfplane make(const Vec2& a, double beta) {
    const double n = a.norm();
    if (!(n > kEpsGeom)) throw BadParams("halfplane normal must be nonzero");
    return {a / n, beta / n};
  }
  double eval(const Vec2& x) const { return normal.dot(x) - offset; }
};

namespace detail {

inline double bbox_scale(std::span<const Vec2> pts) {
  Vec2 lo = pts[0], hi = pts[0];
  for (const auto& p : pts) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return (hi - lo).norm();
}

inline double orient(const Vec2& o, const Vec2& a, const Vec2& b) { return cross(a - o, b - o); }

}  // namespace detail

/// Convex hull in canonical order. Collinear and near-collinear vertices are
/// dropped: those within kEpsGeom * scale of the chord through their
/// neighbours, scale being the bounding-box diagonal.
inline Polygon canonicalize(std::span<const Vec2> points) {
  if (points.size() < 3) throw DegenerateInput("need at least 3 points");
  std::vector<Vec2> pts(points.begin(), points.end());
  for (const auto& p : pts)
    if (!std::isfinite(p.x()) || !std::isfinite(p.y())) throw DegenerateInput("non-finite coordinate");
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  const double scale = detail::bbox_scale(pts);
  if (!(scale > 0.0)) throw DegenerateInput("all points coincide");
  const double tol = kEpsGeom * scale;

  // Andrew's monotone chain; lower hull starts at the lexicographic minimum.
  // Exactly collinear points are dropped here; near-collinear ones only in
  // the cyclic pass below, where each candidate lies between its neighbours.
  // (With a tolerance in the chain, rounding jitter in the sort order can pop
  // an extreme point that sits behind a later, nearly collinear one.)
  std::vector<Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && detail::orient(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
    while (k >= lower && detail::orient(hull[k - 2], hull[k - 1], *it) <= 0.0) --k;
    hull[k++] = *it;
  }
  hull.resize(k - 1);

  auto flat = [&](const Vec2& a, const Vec2& v, const Vec2& b) {
    return detail::orient(a, v, b) <= tol * (b - a).norm();
  };
  std::vector<Vec2> kept;
  for (const auto& v : hull) {
    while (kept.size() >= 2 && flat(kept[kept.size() - 2], kept.back(), v)) kept.pop_back();
    kept.push_back(v);
  }
  // Close the cycle.
  std::size_t first = 0;
  for (bool changed = true; changed && kept.size() - first >= 3;) {
    changed = false;
    if (flat(kept[kept.size() - 2], kept.back(), kept[first])) {
      kept.pop_back();
      changed = true;
    } else if (flat(kept.back(), kept[first], kept[first + 1])) {
      ++first;
      changed = true;
    }
  }
  hull.assign(kept.begin() + static_cast<std::ptrdiff_t>(first), kept.end());
  if (hull.size() < 3) throw DegenerateInput("hull is a point or a segment");
  std::rotate(hull.begin(), std::min_element(hull.begin(), hull.end(), [](const Vec2& a, const Vec2& b) {
                return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
              }), hull.end());
  return Polygon(std::move(hull));
}

inline Polygon canonicalize(std::initializer_list<Vec2> points) {
  return canonicalize(std::span<const Vec2>(points.begin(), points.size()));
}

struct AreaCentroid {
  double area;
  Vec2 centroid;
};

/// Shoelace area and the exact centroid, accumulated relative to vertex 0.
inline AreaCentroid area_centroid(const Polygon& p) {
  const Vec2 o = p[0];
  double a2 = 0.0;
  Vec2 m = Vec2::Zero();
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    const Vec2 a = p[i] - o, b = p[i + 1] - o;
    const double c = cross(a, b);
    a2 += c;
    m += c * (a + b);
  }
  return {0.5 * a2, o + m / (3.0 * a2)};
}

inline double area(const Polygon& p) { return area_centroid(p).area; }
inline Vec2 centroid(const Polygon& p) { return area_centroid(p).centroid; }

/// h_P(u) = max over vertices of <v, u>.
inline double support(const Polygon& p, const Vec2& u) {
  double h = -std::numeric_limits<double>::infinity();
  for (const auto& v : p.vertices()) h = std::max(h, v.dot(u));
  return h;
}

inline double diameter(const Polygon& p) {
  // Rotating calipers: for each edge, advance to the farthest vertex.
  const std::size_t n = p.size();
  double d = 0.0;
  std::size_t j = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = p[i];
    const Vec2& b = p[(i + 1) % n];
    while (detail::orient(a, b, p[(j + 1) % n]) > detail::orient(a, b, p[j])) j = (j + 1) % n;
    d = std::max({d, (p[j] - a).norm(), (p[j] - b).norm()});
  }
  return d;
}

/// Signed distance from x to the boundary: positive inside, negative outside
/// (outside values are the max edge violation, not the Euclidean distance).
inline double interior_margin(const Polygon& p, const Vec2& x) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i) m = std::min(m, p.normal(i).dot(p[i] - x));
  return m;
}

inline bool contains(const Polygon& p, const Vec2& x, double tol = 0.0) { return interior_margin(p, x) >= -tol; }

/// Every vertex of `inner` lies in `outer` (up to tol).
inline bool contains(const Polygon& outer, const Polygon& inner, double tol = 0.0) {
  return std::all_of(inner.vertices().begin(), inner.vertices().end(),
                     [&](const Vec2& v) { return contains(outer, v, tol); });
}

/// Edge halfplanes of p (H-representation).
inline std::vector<Halfplane> halfplanes(const Polygon& p) {
  std::vector<Halfplane> h;
  h.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Vec2 n = p.normal(i);
    h.push_back({n, n.dot(p[i])});
  }
  return h;
}

inline Polygon translate(const Polygon& p, const Vec2& t) {
  std::vector<Vec2> v(p.vertices());
  for (auto& x : v) x += t;
  return canonicalize(v);
}

inline Polygon scale(const Polygon& p, double s, const Vec2& about = Vec2::Zero()) {
  std::vector<Vec2> v(p.vertices());
  for (auto& x : v) x = about + s * (x - about);
  return canonicalize(v);
}

/// Point reflection 2x - P.
inline Polygon reflect(const Polygon& p, const Vec2& x) {
  std::vector<Vec2> v(p.vertices());
  for (auto& y : v) y = 2.0 * x - y;
  return canonicalize(v);
}

/// P ∩ h, or nothing when the remainder has area below kEpsArea * diam(P)^2.
inline std::optional<Polygon> clip_halfplane(const Polygon& p, const Halfplane& h) {
  const std::size_t n = p.size();
  std::vector<double> s(n);
  bool all_in = true, all_out = true;
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = h.eval(p[i]);
    all_in = all_in && s[i] <= 0.0;
    all_out = all_out && s[i] >= 0.0;
  }
  if (all_in) return p;
  if (all_out) return std::nullopt;

  std::vector<Vec2> out;
  out.reserve(n + 2);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    if (s[i] <= 0.0) out.push_back(p[i]);
    if ((s[i] < 0.0 && s[j] > 0.0) || (s[i] > 0.0 && s[j] < 0.0)) {
      const double t = s[i] / (s[i] - s[j]);
      out.push_back(p[i] + t * (p[j] - p[i]));
    }
  }
  if (out.size() < 3) return std::nullopt;
  std::optional<Polygon> q;
  try {
    q = canonicalize(out);
  } catch (const DegenerateInput&) {
    return std::nullopt;
  }
  const double d = detail::bbox_scale(p.vertices());
  if (area(*q) < kEpsArea * d * d) return std::nullopt;
  return q;
}

/// P ∩ Q by successive clipping of P against the edges of Q.
inline std::optional<Polygon> intersect(const Polygon& p, const Polygon& q) {
  std::optional<Polygon> r = p;
  for (const auto& h : halfplanes(q)) {
    r = clip_halfplane(*r, h);
    if (!r) return std::nullopt;
  }
  return r;
}

inline double intersection_area(const Polygon& p, const Polygon& q) {
  const auto r = intersect(p, q);
  return r ? area(*r) : 0.0;
}

/// Hausdorff distance via the support-function characterization,
/// sup over the circle of |h_P - h_Q|.
///
/// Between consecutive normals of the merged normal fans both support points
/// are fixed vertices p, q, so h_P - h_Q = <p - q, u> on that arc and its
/// extremum is at an arc end or at ±(p - q). Those candidates make the result
/// exact; edge normals, vertex directions and a 4096-direction grid are
/// evaluated as well.
inline double hausdorff(const Polygon& a, const Polygon& b) {
  auto angle = [](const Vec2& u) { return std::atan2(u.y(), u.x()); };
  auto dir = [](double t) { return Vec2(std::cos(t), std::sin(t)); };
  auto gap = [&](const Vec2& u) { return std::abs(support(a, u) - support(b, u)); };

  std::vector<double> breaks;
  for (const Polygon* p : {&a, &b})
    for (std::size_t i = 0; i < p->size(); ++i) breaks.push_back(angle(p->normal(i)));
  std::sort(breaks.begin(), breaks.end());

  double best = 0.0;
  for (double t : breaks) best = std::max(best, gap(dir(t)));
  for (const Polygon* p : {&a, &b})
    for (const auto& v : p->vertices())
      if (v.norm() > 0.0) best = std::max(best, gap(v.normalized()));
  constexpr int kGrid = 4096;
  for (int k = 0; k < kGrid; ++k) best = std::max(best, gap(dir(2.0 * std::numbers::pi * k / kGrid)));

  auto argmax = [](const Polygon& p, const Vec2& u) {
    std::size_t j = 0;
    for (std::size_t i = 1; i < p.size(); ++i)
      if (p[i].dot(u) > p[j].dot(u)) j = i;
    return p[j];
  };
  for (std::size_t k = 0; k < breaks.size(); ++k) {
    const double lo = breaks[k];
    double hi = k + 1 < breaks.size() ? breaks[k + 1] : breaks[0] + 2.0 * std::numbers::pi;
    if (hi - lo <= 0.0) continue;
    const Vec2 mid = dir(0.5 * (lo + hi));
    const Vec2 d = argmax(a, mid) - argmax(b, mid);
    if (d.norm() == 0.0) continue;
    for (const Vec2& c : {Vec2(d.normalized()), Vec2(-d.normalized())}) {
      double t = angle(c);
      while (t < lo) t += 2.0 * std::numbers::pi;
      if (t <= hi) best = std::max(best, gap(c));
    }
  }
  return best;
}

}  // namespace aip
