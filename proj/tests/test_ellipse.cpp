#include "aip/counterexample.hpp"
#include "aip/ellipse.hpp"
#include "aip/polar.hpp"
#include "aip/random.hpp"

#include <gtest/gtest.h>

using namespace aip;

namespace {

const double kPi = std::numbers::pi;

Polygon triangle() { return canonicalize({Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)}); }

/// Affine map from the equilateral triangle with incircle = unit disk onto
/// the triangle (a, b, c).
AffineMap from_equilateral(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double s = 2.0 * std::sqrt(3.0);  // side length for inradius 1
  const Vec2 e0(-s / 2, -1), e1(s / 2, -1), e2(0, 2);
  Mat2 src, dst;
  src.col(0) = e1 - e0, src.col(1) = e2 - e0;
  dst.col(0) = b - a, dst.col(1) = c - a;
  const Mat2 m = dst * src.inverse();
  return {m, a - m * e0};
}

/// The incircle pushed forward: the inscribed ellipse of maximal area.
Ellipse steiner_inellipse(const Vec2& a, const Vec2& b, const Vec2& c) {
  return Ellipse{Vec2::Zero(), Mat2::Identity()}.transformed(from_equilateral(a, b, c));
}

double max_edge_excess(const Polygon& p, const Ellipse& e) {
  double worst = -1e300;
  for (const auto& h : halfplanes(p)) worst = std::max(worst, h.normal.dot(e.center) + (e.shape * h.normal).norm() - h.offset);
  return worst;
}

double max_gauge(const Polygon& p, const Ellipse& e) {
  double g = 0.0;
  for (const auto& v : p.vertices()) g = std::max(g, e.gauge(v));
  return g;
}

Vec2 random_interior(Rng& rng, const Polygon& p) {
  const Vec2 g = centroid(p);
  const Vec2 v = p[static_cast<std::size_t>(rng.integer(0, static_cast<int>(p.size()) - 1))];
  return g + rng.uniform(0.0, 0.9) * (v - g);
}

}  // namespace

TEST(Loewner, SquareAndCross) {
  const Ellipse s = loewner_ellipse(square_body());
  EXPECT_NEAR(s.center.norm(), 0.0, 1e-10);
  EXPECT_NEAR((s.shape - std::sqrt(2.0) * Mat2::Identity()).norm(), 0.0, 1e-9);
  const Ellipse c = loewner_ellipse(cross_body());
  EXPECT_NEAR(c.center.norm(), 0.0, 1e-10);
  EXPECT_NEAR((c.shape - Mat2::Identity()).norm(), 0.0, 1e-9);
}

TEST(Loewner, TriangleIsTwiceTheSteinerInellipse) {
  Rng rng(2);
  for (int i = 0; i < 20; ++i) {
    const Vec2 a = rng.in_unit_disk() * 2, b = rng.in_unit_disk() * 2, c = rng.in_unit_disk() * 2;
    if (std::abs(cross(b - a, c - a)) < 0.2) continue;
    const Polygon t = canonicalize({a, b, c});
    const Ellipse in = steiner_inellipse(a, b, c);
    const Ellipse e = loewner_ellipse(t);
    EXPECT_NEAR((e.center - in.center).norm(), 0.0, 1e-8 * diameter(t));
    EXPECT_NEAR((e.shape - 2.0 * in.shape).norm(), 0.0, 1e-7 * diameter(t));
    EXPECT_LE(max_gauge(t, e), 1.0 + 1e-9);
    const JohnCertificate cert = verify_john_conditions(t, e, ContactMode::enclosing);
    EXPECT_TRUE(cert.passed);
    EXPECT_LT(cert.residual_sum.norm(), 1e-7);
    EXPECT_LT(cert.residual_identity, 1e-7);
  }
}

TEST(John, SquareIsUnitDisk) {
  const Ellipse e = john_ellipse(square_body());
  EXPECT_NEAR(e.center.norm(), 0.0, 1e-10);
  EXPECT_NEAR((e.shape - Mat2::Identity()).norm(), 0.0, 1e-9);
  EXPECT_NEAR(e.area(), kPi, 1e-9);
}

TEST(John, TriangleIsSteinerInellipse) {
  const Ellipse e = john_ellipse(triangle());
  EXPECT_NEAR((e.center - Vec2(1.0 / 3, 1.0 / 3)).norm(), 0.0, 1e-8);
  EXPECT_NEAR(e.area(), kPi / (6 * std::sqrt(3.0)), 1e-6);
  const Ellipse s = steiner_inellipse(Vec2(0, 0), Vec2(1, 0), Vec2(0, 1));
  EXPECT_NEAR(s.area(), kPi / (6 * std::sqrt(3.0)), 1e-14);
  EXPECT_NEAR((e.shape - s.shape).norm(), 0.0, 1e-7);
}

TEST(John, RandomBodiesSatisfyConstraintsAndCertificates) {
  Rng rng(6);
  for (int i = 0; i < 25; ++i) {
    const Polygon p = random_body(rng);
    const Ellipse e = john_ellipse(p);
    EXPECT_LE(max_edge_excess(p, e), 1e-9 * diameter(p));
    const JohnCertificate c = verify_john_conditions(p, e, ContactMode::inscribed);
    EXPECT_TRUE(c.passed) << "body " << i;
    EXPECT_GE(c.contacts.size(), 3u);
    EXPECT_LE(c.contacts.size(), 6u);
    for (const auto& k : c.contacts) EXPECT_GT(k.weight, 0.0);

    const Ellipse l = loewner_ellipse(p);
    EXPECT_LE(max_gauge(p, l), 1.0 + 1e-9);
    EXPECT_TRUE(verify_john_conditions(p, l, ContactMode::enclosing).passed) << "body " << i;
  }
}

TEST(John, AffineEquivariance) {
  Rng rng(14);
  for (int i = 0; i < 15; ++i) {
    const Polygon p = random_body(rng);
    const AffineMap t = random_affine(rng, 50.0);
    const Polygon tp = affine_apply(t, p);
    const Ellipse lhs = john_ellipse(tp), rhs = john_ellipse(p).transformed(t);
    const double d = diameter(tp);
    EXPECT_LT((lhs.center - rhs.center).norm(), 1e-7 * d);
    EXPECT_LT((lhs.shape - rhs.shape).norm(), 1e-7 * d);
    const Ellipse ll = loewner_ellipse(tp), lr = loewner_ellipse(p).transformed(t);
    EXPECT_LT((ll.center - lr.center).norm(), 1e-7 * d);
    EXPECT_LT((ll.shape - lr.shape).norm(), 1e-7 * d);
  }
}

TEST(JohnConditions, SquareWithUnitDisk) {
  const JohnCertificate c =
      verify_john_conditions(square_body(), {Vec2::Zero(), Mat2::Identity()}, ContactMode::inscribed);
  ASSERT_TRUE(c.passed);
  ASSERT_EQ(c.contacts.size(), 4u);
  // sum c_i u_i u_i^T = I over (±1,0), (0,±1) forces c_i = 1/2.
  for (const auto& k : c.contacts) {
    EXPECT_NEAR(k.weight, 0.5, 1e-12);
    EXPECT_NEAR(std::abs(k.direction.x()) + std::abs(k.direction.y()), 1.0, 1e-12);
  }
  EXPECT_NEAR(c.residual_sum.norm(), 0.0, 1e-14);
  EXPECT_NEAR(c.residual_identity, 0.0, 1e-14);
}

TEST(JohnConditions, ShrunkDiskHasNoContacts) {
  EXPECT_THROW(verify_john_conditions(square_body(), {Vec2::Zero(), 0.9 * Mat2::Identity()}, ContactMode::inscribed),
               NoContacts);
}

TEST(JohnConditions, OffCenterDiskFails) {
  // Touches only the right edge: no balanced contact set exists.
  const JohnCertificate c =
      verify_john_conditions(square_body(), {Vec2(0.5, 0), 0.5 * Mat2::Identity()}, ContactMode::inscribed);
  EXPECT_FALSE(c.passed);
}

TEST(JohnConditions, TriangleWithSteinerInellipse) {
  Rng rng(19);
  for (int i = 0; i < 10; ++i) {
    const Vec2 a = rng.in_unit_disk(), b = rng.in_unit_disk(), c = rng.in_unit_disk();
    if (std::abs(cross(b - a, c - a)) < 0.1) continue;
    const JohnCertificate cert =
        verify_john_conditions(canonicalize({a, b, c}), steiner_inellipse(a, b, c), ContactMode::inscribed);
    EXPECT_TRUE(cert.passed);
    EXPECT_EQ(cert.contacts.size(), 3u);
    for (const auto& k : cert.contacts) EXPECT_NEAR(k.weight, 2.0 / 3.0, 1e-9);
  }
}

TEST(Nnls, SmallProblems) {
  Eigen::MatrixXd a(3, 2);
  a << 1, 0, 0, 1, 1, 1;
  Eigen::VectorXd b(3);
  b << 1, 2, 3;
  const Eigen::VectorXd x = nnls(a, b);
  EXPECT_NEAR(x(0), 1.0, 1e-12);
  EXPECT_NEAR(x(1), 2.0, 1e-12);
  b << -1, 2, 1;
  const Eigen::VectorXd y = nnls(a, b);
  EXPECT_EQ(y(0), 0.0);
  EXPECT_NEAR(y(1), 1.5, 1e-12);
}

TEST(CenteredArea, SquareValues) {
  const Polygon sq = square_body();
  EXPECT_NEAR(max_centered_area(sq, Vec2::Zero()), kPi, 1e-9);
  EXPECT_NEAR(max_centered_area(sq, Vec2(0.5, 0)), kPi / 2, 1e-9);
  EXPECT_EQ(max_centered_area(sq, Vec2(1, 0)), 0.0);
  EXPECT_EQ(max_centered_area(sq, Vec2(1, 1)), 0.0);
  EXPECT_EQ(max_centered_area(sq, Vec2(3, 0)), 0.0);
}

TEST(CenteredArea, BruteForceAtOffCenterPoint) {
  // Ellipses centered at (1/2, 0) in the square: semi-axes a, b, angle t.
  // Fit iff the support values toward the four edges stay within 1/2, 1/2
  // (x direction) and 1, 1 (y direction).
  double best = 0.0;
  for (int it = 0; it <= 90; ++it) {
    const double t = kPi / 2 * it / 90, c = std::cos(t), s = std::sin(t);
    for (int ia = 1; ia <= 400; ++ia) {
      const double a = 1.2 * ia / 400;
      // Largest b with a²c² + b²s² <= 1/4 and a²s² + b²c² <= 1.
      double b = 1e9;
      if (s > 1e-12) b = std::min(b, std::sqrt(std::max(0.0, 0.25 - a * a * c * c)) / s);
      else if (a * a * c * c > 0.25) b = 0.0;
      if (c > 1e-12) b = std::min(b, std::sqrt(std::max(0.0, 1.0 - a * a * s * s)) / c);
      else if (a * a * s * s > 1.0) b = 0.0;
      best = std::max(best, kPi * a * b);
    }
  }
  EXPECT_NEAR(max_centered_area(square_body(), Vec2(0.5, 0)), best, 2e-3);
  EXPECT_LE(best, kPi / 2 + 1e-12);
}

TEST(CenteredArea, MaximumAtJohnCenterAndConcaveRoot) {
  Rng rng(27);
  for (int i = 0; i < 8; ++i) {
    const Polygon p = random_body(rng);
    const Ellipse j = john_ellipse(p);
    const double top = max_centered_area(p, j.center);
    EXPECT_NEAR(top, j.area(), 1e-7 * j.area());
    for (int k = 0; k < 20; ++k) {
      const Vec2 x = random_interior(rng, p), y = random_interior(rng, p);
      const double t = rng.uniform();
      EXPECT_LE(max_centered_area(p, x), top * (1 + 1e-9));
      const double mid = std::sqrt(max_centered_area(p, t * x + (1 - t) * y));
      EXPECT_GE(mid, t * std::sqrt(max_centered_area(p, x)) + (1 - t) * std::sqrt(max_centered_area(p, y)) - 1e-8);
    }
  }
}

TEST(CenteredInverseArea, SquareAndChangeOfVariables) {
  EXPECT_NEAR(min_centered_inverse_area(square_body(), Vec2::Zero()), 1 / (2 * kPi), 1e-10);
  Rng rng(41);
  for (int i = 0; i < 10; ++i) {
    const Polygon p = random_body(rng);
    const AffineMap t = random_affine(rng, 50.0);
    const Polygon tp = affine_apply(t, p);
    for (int k = 0; k < 5; ++k) {
      const Vec2 x = centroid(p) + rng.in_unit_disk() * diameter(p);
      const double lam = min_centered_inverse_area(p, x);
      EXPECT_GT(lam, 0.0);
      EXPECT_NEAR(min_centered_inverse_area(tp, t(x)) * std::abs(t.det()), lam, 1e-7 * lam);
    }
    const Ellipse l = loewner_ellipse(p);
    EXPECT_NEAR(min_centered_inverse_area(p, l.center), 1 / l.area(), 1e-7 / l.area());
  }
}

TEST(CenteredInverseArea, PositiveAndContinuousOnGrid) {
  const Polygon p = canonicalize({Vec2(0, 0), Vec2(2, 0), Vec2(0.3, 1)});
  double prev = min_centered_inverse_area(p, Vec2(-2, 0.5));
  for (int k = 1; k <= 200; ++k) {
    const double lam = min_centered_inverse_area(p, Vec2(-2 + 6.0 * k / 200, 0.5));
    EXPECT_GT(lam, 0.0);
    EXPECT_LT(std::abs(lam - prev), 0.05 * std::max(lam, prev));
    prev = lam;
  }
}

TEST(JohnMonotonicity, NestedBodies) {
  Rng rng(33);
  for (int i = 0; i < 15; ++i) {
    const Polygon q = random_body(rng);
    const Vec2 u = rng.direction();
    const double cut = support(q, u) - rng.uniform(0.05, 0.5) * (support(q, u) + support(q, -u));
    const auto p = clip_halfplane(q, {u, cut});
    ASSERT_TRUE(p);
    EXPECT_LE(john_ellipse(*p).area(), john_ellipse(q).area() + 1e-9);
    EXPECT_LE(loewner_ellipse(*p).area(), loewner_ellipse(q).area() + 1e-9);
  }
}

TEST(EllipseDuality, PolarOfJohnIsLoewnerOfPolar) {
  Rng rng(52);
  for (int i = 0; i < 20; ++i) {
    const Polygon p = random_body(rng);
    const Ellipse j = john_ellipse(p);
    const Ellipse want = Ellipse{Vec2::Zero(), j.shape}.polar();
    const Ellipse got = loewner_ellipse(polar_about(p, j.center));
    EXPECT_LT(got.center.norm(), 1e-6 * want.shape.norm());
    EXPECT_LT((got.shape - want.shape).norm(), 1e-6 * want.shape.norm());
  }
}
