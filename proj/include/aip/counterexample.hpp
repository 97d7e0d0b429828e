#pragma once

// An explicit proper affine invariant point that is not injective.
//
// B_η = (B∞²)_{η e1} is a trapezoid whose two-cap point p_{ε,δ} vanishes for
// a suitable δ(ε); since p_{ε,δ}(B∞²) = 0 as well, the map z -> p((C - z)°)
// on C = B₁² has the two zeros z = 0 and z = (η, 0).
//
// Every quantity is computed twice: in closed form and through the polygon
// pipeline (polars, clipping, centroids).

#include "aip/points.hpp"

#include <cmath>
#include <vector>

namespace aip {

inline Polygon square_body() { return canonicalize({Vec2(1, 1), Vec2(-1, 1), Vec2(-1, -1), Vec2(1, -1)}); }
inline Polygon cross_body() { return canonicalize({Vec2(1, 0), Vec2(0, 1), Vec2(-1, 0), Vec2(0, -1)}); }

/// K(a, b) = conv{(-(2b/3 + a/3)/(a+b), ±a), ((2a/3 + b/3)/(a+b), ±b)},
/// a trapezoid with centroid at the origin.
inline Polygon body_kab(double a, double b) {
  if (!(a > 0.0) || !(b > a)) throw BadParams("K(a,b) needs 0 < a < b");
  const double left = -(2.0 * b / 3.0 + a / 3.0) / (a + b);
  const double right = (2.0 * a / 3.0 + b / 3.0) / (a + b);
  return canonicalize({Vec2(left, a), Vec2(left, -a), Vec2(right, b), Vec2(right, -b)});
}

/// First coordinate of g(K(a, b)°) in closed form.
inline double kab_polar_centroid_x(double a, double b) {
  return -3.0 * a * b * (b * b - a * a) / ((2 * a * a + 2 * b * b + 5 * a * b) * (2 * a * a + 2 * b * b + 2 * a * b));
}

inline void check_eta(double eta) {
  if (!(eta > 0.0) || !(eta < 1.0)) throw BadParams("eta must lie in (0, 1)");
}

/// B_η = conv{(-1/(1+η), ±1/(1+η)), (1/(1-η), ±1/(1-η))}.
inline Polygon b_eta(double eta) {
  check_eta(eta);
  const double a = 1.0 / (1.0 + eta), b = 1.0 / (1.0 - eta);
  return canonicalize({Vec2(-a, a), Vec2(-a, -a), Vec2(b, b), Vec2(b, -b)});
}

/// α(η) = -3η(1-η²)² / ((3+η²)(9-η²)), first coordinate of
/// g((B_η - g(B_η))°).
inline double alpha(double eta) {
  check_eta(eta);
  const double e2 = eta * eta;
  return -3.0 * eta * (1.0 - e2) * (1.0 - e2) / ((3.0 + e2) * (9.0 - e2));
}

/// The same quantity through the polygon pipeline.
inline double alpha_geometric(double eta) {
  const Polygon b = b_eta(eta);
  return centroid(polar_about(b, centroid(b))).x();
}

/// Closed-form cap areas of B_η: |A| = w(2/(1+η) + ηw), |B| = v(2/(1-η) - ηv)
/// with w = ε/|α|, v = δ/|α|.
struct CapAreas {
  double a;
  double b;
};

inline CapAreas cap_areas_closed(double eta, double eps, double delta) {
  const double al = std::abs(alpha(eta));
  const double w = eps / al, v = delta / al;
  return {w * (2.0 / (1.0 + eta) + eta * w), v * (2.0 / (1.0 - eta) - eta * v)};
}

/// The two-block closed form f_ε(δ) (ε-block + δ-block), kept for comparison.
/// It equals (α²/2)(|A| ∫_A x + |B| ∫_B x), so its root does not zero the
/// centroid of A ∪ B. See moment_balance.
inline double f_eps_displayed(double delta, double eta, double eps) {
  const double al = std::abs(alpha(eta));
  const double eps_block = eps * eps * (2.0 / (1.0 + eta) + eps * eta / al) *
                           (-1.0 / ((1.0 + eta) * (1.0 + eta)) +
                            eps / (2.0 * al) * ((1.0 - eta) / (1.0 + eta) + 2.0 * eps * eta / (3.0 * al)));
  const double delta_block = delta * delta * (2.0 / (1.0 - eta) - delta * eta / al) *
                             (1.0 / ((1.0 - eta) * (1.0 - eta)) -
                              delta / (2.0 * al) * ((1.0 + eta) / (1.0 - eta) - 2.0 * delta * eta / (3.0 * al)));
  return eps_block + delta_block;
}

/// ∫_A x1 + ∫_B x1 over the two caps of B_η, in closed form. For disjoint
/// caps p_{ε,δ}(B_η) = 0 exactly when this vanishes.
inline double moment_balance(double delta, double eta, double eps) {
  const double al = std::abs(alpha(eta));
  const double w = eps / al, v = delta / al;
  const double ma = w * (-2.0 / ((1.0 + eta) * (1.0 + eta)) + w * (1.0 - eta) / (1.0 + eta) + 2.0 * eta * w * w / 3.0);
  const double mb = v * (2.0 / ((1.0 - eta) * (1.0 - eta)) - v * (1.0 + eta) / (1.0 - eta) + 2.0 * eta * v * v / 3.0);
  return ma + mb;
}

/// ε + δ below this bound <=> the caps of B_η are disjoint.
inline double disjoint_budget(double eta) { return 2.0 * std::abs(alpha(eta)) / (1.0 - eta * eta); }

/// Default ε = |α(η)| / 10.
inline double default_eps(double eta) { return std::abs(alpha(eta)) / 10.0; }

/// δ in (ε², ε) with p_{ε,δ}(B_η) = 0, by bisection on moment_balance.
inline double solve_delta(double eta, double eps) {
  check_eta(eta);
  if (!(eps > 0.0) || !(eps < 1.0)) throw BadParams("eps must lie in (0, 1)");
  double lo = eps * eps, hi = eps;
  auto f = [&](double d) { return moment_balance(d, eta, eps); };
  if (!(f(lo) < 0.0) || !(f(hi) > 0.0)) throw NoRoot("sign conditions f(eps^2) < 0 < f(eps) fail; eps too large");
  for (int it = 0; it < 400 && hi - lo > 1e-14 * eps; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  const double delta = 0.5 * (lo + hi);
  if (!(eps + delta < disjoint_budget(eta))) throw NoRoot("root violates the cap disjointness bound");
  return delta;
}

struct Witness {
  Vec2 z;
  double residual;  ///< |p_{ε,δ}((C - z)°)|
};

struct NonInjectivityCertificate {
  double eta = 0, eps = 0, delta = 0;
  double alpha_closed = 0, alpha_geometric = 0;
  double residual_sym = 0;  ///< |p_{ε,δ}(B∞²)|
  double residual_eta = 0;  ///< |p_{ε,δ}(B_η)|
  bool delta_in_range = false;
  bool disjoint = false;            ///< ε + δ < 2|α|/(1-η²)
  bool disjoint_geometric = false;  ///< clipped caps do not overlap
  CapAreas areas_closed{}, areas_geometric{};
  double f_displayed = 0;  ///< f_ε(δ) as displayed
  double balance = 0;      ///< moment_balance(δ)
  std::vector<Witness> witnesses;
  bool passed = false;
  std::string failure;
};

inline constexpr double kCertTol = 1e-9;

/// Builds the certificate for given (η, ε, δ) without judging how δ was
/// obtained; `passed` says whether every check holds.
inline NonInjectivityCertificate evaluate_certificate(double eta, double eps, double delta) {
  check_eta(eta);
  NonInjectivityCertificate c;
  c.eta = eta;
  c.eps = eps;
  c.delta = delta;
  c.alpha_closed = alpha(eta);
  c.alpha_geometric = alpha_geometric(eta);
  c.delta_in_range = eps * eps < delta && delta < eps;
  c.disjoint = eps + delta < disjoint_budget(eta);

  const Polygon beta = b_eta(eta);
  const Caps k = caps(beta, eps, delta);
  c.disjoint_geometric = !intersect(k.a, k.b).has_value();
  c.areas_closed = cap_areas_closed(eta, eps, delta);
  c.areas_geometric = {area(k.a), area(k.b)};
  c.f_displayed = f_eps_displayed(delta, eta, eps);
  c.balance = moment_balance(delta, eta, eps);

  c.residual_sym = cap_point(square_body(), eps, delta).value.norm();
  c.residual_eta = cap_point(beta, eps, delta).value.norm();

  const Polygon cross = cross_body();
  for (const Vec2& z : {Vec2(0.0, 0.0), Vec2(eta, 0.0)})
    c.witnesses.push_back({z, cap_point(polar_about(cross, z), eps, delta).value.norm()});

  auto fail = [&](const std::string& why) {
    if (c.failure.empty()) c.failure = why;
  };
  if (!c.delta_in_range) fail("delta outside (eps^2, eps)");
  if (!c.disjoint || !c.disjoint_geometric) fail("caps overlap");
  if (!(c.residual_sym < kCertTol)) fail("p(B_inf) residual " + std::to_string(c.residual_sym));
  if (!(c.residual_eta < kCertTol)) fail("p(B_eta) residual " + std::to_string(c.residual_eta));
  for (const auto& w : c.witnesses)
    if (!(w.residual < kCertTol)) fail("witness residual " + std::to_string(w.residual));
  c.passed = c.failure.empty();
  return c;
}

/// Solves for δ and certifies; throws CertificationFailure on any failed check.
inline NonInjectivityCertificate certify(double eta, double eps) {
  const NonInjectivityCertificate c = evaluate_certificate(eta, eps, solve_delta(eta, eps));
  if (!c.passed) throw CertificationFailure(c.failure);
  return c;
}

inline NonInjectivityCertificate certify(double eta) { return certify(eta, default_eps(eta)); }

}  // namespace aip
