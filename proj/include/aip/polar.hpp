#pragma once

// Polar duality about interior points and the projective shift K_z.

#include "aip/polygon.hpp"

namespace aip {

/// (P - z)°, expressed in the frame where z is the origin.
///
/// The edge with outward normal n at distance d from z dualizes to the
/// vertex n / d; consecutive edges give consecutive vertices, so the output
/// keeps counter-clockwise order.
inline Polygon polar_about(const Polygon& p, const Vec2& z) {
  const double margin_tol = kEpsGeom * std::max(1.0, diameter(p));
  std::vector<Vec2> dual;
  dual.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Vec2 n = p.normal(i);
    const double d = n.dot(p[i] - z);
    if (!(d > margin_tol)) throw PointNotInterior("polar center is not interior to the body");
    dual.push_back(n / d);
  }
  return canonicalize(dual);
}

/// K^z = (K - z)° + z.
inline Polygon polar_at(const Polygon& p, const Vec2& z) { return translate(polar_about(p, z), z); }

inline Polygon polar(const Polygon& p) { return polar_about(p, Vec2::Zero()); }

/// K_z = {x / (1 - <x, z>) : x in K} = (K° - z)°. Needs 0 in int K and
/// <x, z> < 1 on K.
inline Polygon k_sub_z(const Polygon& p, const Vec2& z) {
  if (!(interior_margin(p, Vec2::Zero()) > kEpsGeom * std::max(1.0, diameter(p))))
    throw PointNotInterior("K_z needs the origin in the interior");
  if (!(support(p, z) < 1.0 - kEpsGeom)) throw ShiftOutOfRange("z is not interior to the polar body");
  std::vector<Vec2> v;
  v.reserve(p.size());
  for (const auto& x : p.vertices()) v.push_back(x / (1.0 - x.dot(z)));
  return canonicalize(v);
}

}  // namespace aip
