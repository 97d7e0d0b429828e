#include "aip/counterexample.hpp"
#include "aip/duality.hpp"
#include "aip/io.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace aip;

namespace {

const PointFunction kG = PointFunction::of(PointId::centroid);
const PointFunction kS = PointFunction::of(PointId::santalo);
const PointFunction kJ = PointFunction::of(PointId::john);
const PointFunction kL = PointFunction::of(PointId::loewner);
const PointFunction kM = PointFunction::of(PointId::symcore);

Polygon triangle() { return canonicalize({Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)}); }

}  // namespace

TEST(Phi, SquareGivesTheCross) {
  EXPECT_LT(hausdorff(phi(kG, square_body()), cross_body()), 1e-15);
  EXPECT_LT(hausdorff(phi(kS, cross_body()), square_body()), 1e-12);
}

TEST(Phi, TrapezoidPolarMatchesTheOracle) {
  const Polygon k = body_kab(1, 2);
  const oracle::Poly v(k.vertices().begin(), k.vertices().end());
  const oracle::Poly pol = oracle::polar(v);
  const Polygon expected = canonicalize(std::span<const Vec2>(pol.data(), pol.size()));
  EXPECT_LT(hausdorff(phi(kG, k), expected), 1e-14);
}

TEST(Phi, CentroidAndSantaloRoundTrip) {
  for (const Polygon& p : random_bodies(11, 10)) {
    const double tol = 1e-8 * diameter(p);
    EXPECT_LT(hausdorff(phi(kS, phi(kG, p)), p), tol);
    EXPECT_LT(hausdorff(phi(kG, phi(kS, p)), p), tol);
  }
}

TEST(Phi, JohnAndLoewnerRoundTrip) {
  for (const Polygon& p : random_bodies(12, 5)) {
    const double tol = 1e-8 * diameter(p);
    EXPECT_LT(hausdorff(phi(kL, phi(kJ, p)), p), tol);
  }
}

TEST(DualResidual, CentroidAndSantaloAreDual) {
  const auto bodies = random_bodies(101, 50);
  const DualityReport gs = dual_residual(kG, kS, bodies);
  const DualityReport sg = dual_residual(kS, kG, bodies);
  EXPECT_EQ(gs.bodies_tested, 50u);
  EXPECT_EQ(gs.failures, 0u);
  EXPECT_EQ(sg.failures, 0u);
  EXPECT_LT(gs.max_residual, 1e-6);
  EXPECT_LT(sg.max_residual, 1e-6);
  EXPECT_GE(gs.max_residual, 0.0);
  EXPECT_EQ(gs.p, "centroid");
  EXPECT_EQ(gs.q, "santalo");
}

TEST(DualResidual, JohnAndLoewnerAreDual) {
  const auto bodies = random_bodies(102, 20);
  const DualityReport r = dual_residual(kJ, kL, bodies);
  EXPECT_EQ(r.failures, 0u);
  EXPECT_LT(r.max_residual, 1e-5);
}

TEST(DualResidual, CentroidIsNotSelfDual) {
  const Polygon k = body_kab(1, 2);
  const DualityReport r = dual_residual(kG, kG, std::span<const Polygon>(&k, 1));
  EXPECT_NEAR(r.max_abs_residual, 9.0 / 140, 1e-9);
  EXPECT_NEAR(r.max_residual, 9.0 / 140 / diameter(k), 1e-9);
}

TEST(DualResidual, IndependentOfJobs) {
  const auto bodies = random_bodies(103, 16);
  const DualityReport a = dual_residual(kG, kS, bodies, 1);
  const DualityReport b = dual_residual(kG, kS, bodies, 4);
  ASSERT_EQ(a.per_body.size(), b.per_body.size());
  for (std::size_t i = 0; i < a.per_body.size(); ++i) EXPECT_EQ(a.per_body[i].relative, b.per_body[i].relative);
  EXPECT_EQ(a.max_residual, b.max_residual);
  EXPECT_EQ(a.worst_body, b.worst_body);
}

TEST(DualResidual, RecordsFailuresInsteadOfThrowing) {
  // Caps thinner than the area threshold are empty, except on a symmetric body
  // where both caps are the whole body.
  const PointFunction thin = PointFunction::caps(1e-9, 1e-9);
  std::vector<Polygon> bodies{square_body(), random_bodies(104, 1)[0], cross_body()};
  const DualityReport r = dual_residual(thin, kG, bodies);
  EXPECT_EQ(r.bodies_tested, 3u);
  EXPECT_EQ(r.failures, 1u);
  EXPECT_FALSE(r.per_body[0].failed);
  EXPECT_TRUE(r.per_body[1].failed);
  EXPECT_FALSE(r.per_body[2].failed);
  EXPECT_FALSE(r.first_error.empty());
}

TEST(Product, DualPairGivesTheIdentity) {
  const PointMap g = as_map(kG), s = as_map(kS);
  for (const Polygon& k : random_bodies(201, 5))
    for (const PointFunction& r : {kG, kJ, kM}) {
      const double res = (product(g, s, as_map(r))(k) - eval(r, k)).norm() / diameter(k);
      EXPECT_LT(res, 1e-6) << r.name();
    }
}

TEST(Product, SquareGivesZero) {
  EXPECT_LT(product_apply(kG, kS, kG, square_body()).norm(), 1e-12);
}

TEST(Product, CompositionIsTheIdentity) {
  const PointMap g = as_map(kG), s = as_map(kS), j = as_map(kJ);
  const PointMap gs = product(g, s, j);
  const PointMap sg_gs = product(s, g, gs);
  for (const Polygon& k : random_bodies(202, 3)) EXPECT_LT((sg_gs(k) - j(k)).norm() / diameter(k), 1e-5);
}

TEST(Product, NonDualPairIsNotTheIdentity) {
  const Polygon k = body_kab(1, 2);
  EXPECT_GT((product_apply(kG, kG, kG, k) - centroid(k)).norm(), 1e-3);
}

TEST(Invariance, CentroidIsExact) {
  for (const Polygon& p : random_bodies(301, 3)) EXPECT_LT(invariance_check(kG, p, 20, 7), 1e-12);
}

TEST(Invariance, SantaloWithinSolverTolerance) {
  for (const Polygon& p : random_bodies(302, 3)) EXPECT_LT(invariance_check(kS, p, 10, 8), 1e-6);
}

TEST(Invariance, CapFamilyOnTheTriangle) {
  EXPECT_LT(invariance_check(PointFunction::caps(0.1, 0.05), triangle(), 20, 9), 1e-8);
}

TEST(Invariance, DetectsANonInvariantMap) {
  const PointMap first_vertex = [](const Polygon& p) { return p[0]; };
  EXPECT_GT(invariance_check(first_vertex, random_bodies(303, 1)[0], 20, 10), 1e-3);
}

TEST(Invariance, IndependentOfJobsAndRepeatable) {
  const Polygon p = random_bodies(304, 1)[0];
  const double a = invariance_check(kS, p, 12, 5, 1);
  EXPECT_EQ(a, invariance_check(kS, p, 12, 5, 4));
  EXPECT_EQ(a, invariance_check(kS, p, 12, 5, 1));
  EXPECT_THROW(invariance_check(kS, p, 0, 5), BadParams);
}

TEST(PolarPreimage, SymmetricBodyGivesItsCenter) {
  for (const Polygon& c : std::vector<Polygon>{square_body(), cross_body(), regular_ngon(7)})
    EXPECT_LT(polar_preimage(kG, c, Vec2(0.2, -0.1)).value.norm(), 1e-8);
}

TEST(PolarPreimage, CentroidPreimageIsTheSantaloPoint) {
  for (const Polygon& c : random_bodies(401, 8)) {
    const PointResult z = polar_preimage(kG, c, centroid(c));
    EXPECT_LT((z.value - santalo_point(c).value).norm(), 1e-7 * diameter(c));
    EXPECT_LT(centroid(polar_about(c, z.value)).norm(), 1e-8 * diameter(polar_about(c, z.value)));
  }
}

TEST(PolarPreimage, CapFamilyHasTwoRootsOnTheCross) {
  const double eta = 0.5, eps = default_eps(eta);
  const PointFunction pf = PointFunction::caps(eps, solve_delta(eta, eps));
  const Polygon c = cross_body();
  // The map is discontinuous at 0 (both caps become the whole square), so
  // that root is found from the start 0 only.
  const Vec2 z0 = polar_preimage(pf, c, Vec2::Zero()).value;
  const Vec2 z1 = polar_preimage(pf, c, Vec2(0.9 * eta, 0.0)).value;
  EXPECT_EQ(z0.norm(), 0.0);
  EXPECT_LT((z1 - Vec2(eta, 0)).norm(), 1e-6);
  for (const Vec2& z : {z0, z1}) EXPECT_LT(eval(pf, polar_about(c, z)).norm(), 1e-9);
}

TEST(PolarPreimage, RejectsExteriorStart) {
  EXPECT_THROW(polar_preimage(kG, square_body(), Vec2(2, 0)), PointNotInterior);
}

TEST(BallShift, CentroidGrowsLikeTheEllipseCenter) {
  const Polygon ball = regular_ngon(512);
  for (double lambda : {0.9, 0.99}) {
    const Vec2 g = centroid(k_sub_z(ball, Vec2(lambda, 0)));
    const double expected = lambda / (1 - lambda * lambda);
    EXPECT_NEAR(g.norm(), expected, 0.05 * expected) << lambda;
    EXPECT_NEAR(g.y(), 0.0, 1e-9 * expected);
  }
}

TEST(IterateProduct, SymmetricBodyStaysAtTheCenter) {
  const auto it = iterate_product(kG, square_body(), 3);
  ASSERT_EQ(it.size(), 3u);
  for (const auto& v : it) EXPECT_LT(v.norm(), 1e-12);
}

TEST(IterateProduct, FirstIterateIsTheProduct) {
  const Polygon k = random_bodies(501, 1)[0];
  const auto it = iterate_product(kG, k, 2);
  EXPECT_LT((it[0] - product_apply(kG, kG, kG, k)).norm(), 1e-12 * diameter(k));
  EXPECT_THROW(iterate_product(kG, k, 0), BadParams);
}
