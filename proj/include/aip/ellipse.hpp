#pragma once

// Ellipses, the John (maximal inscribed) and Löwner (minimal enclosing)
// ellipses of a polygon, John-condition certificates, and the fixed-center
// volume fields f_K and λ_K.

#include "aip/affine.hpp"
#include "aip/polygon.hpp"

#include <Eigen/Eigenvalues>

#include <limits>
#include <vector>

namespace aip {

/// Symmetric positive-definite square root.
inline Mat2 sym_sqrt(const Mat2& m) {
  Eigen::SelfAdjointEigenSolver<Mat2> es(0.5 * (m + m.transpose()));
  const Eigen::Vector2d ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

/// {center + shape * u : |u| <= 1}, shape symmetric positive definite.
struct Ellipse {
  Vec2 center = Vec2::Zero();
  Mat2 shape = Mat2::Identity();

  double area() const { return std::numbers::pi * shape.determinant(); }

  /// |shape^{-1} (x - center)|; <= 1 inside.
  double gauge(const Vec2& x) const { return shape.ldlt().solve(x - center).norm(); }

  /// Affine map sending this ellipse onto the unit disk.
  AffineMap normalizer() const {
    const Mat2 inv = shape.inverse();
    return {inv, -(inv * center)};
  }

  /// (E - center)°, centered at the origin.
  Ellipse polar() const { return {Vec2::Zero(), shape.inverse()}; }

  Ellipse transformed(const AffineMap& t) const {
    const Mat2 al = t.matrix() * shape;
    return {t(center), sym_sqrt(al * al.transpose())};
  }

  /// Boundary points, counter-clockwise.
  std::vector<Vec2> sample(int n) const {
    std::vector<Vec2> pts;
    for (int k = 0; k < n; ++k) {
      const double t = 2.0 * std::numbers::pi * k / n;
      pts.push_back(center + shape * Vec2(std::cos(t), std::sin(t)));
    }
    return pts;
  }
};

struct SolverInfo {
  int iterations = 0;
  double gap = 0.0;
};

namespace detail {

/// x -> S^{-1/2} (x - g(P)) with S the area covariance of P. The solvers run
/// on the whitened body, which keeps the Newton systems well scaled.
inline AffineMap whitening(const Polygon& p) {
  const auto [a, g] = area_centroid(p);
  Mat2 s = Mat2::Zero();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Vec2 u = p.vertex(i) - g, v = p.vertex(i + 1) - g;
    const double t = 0.5 * cross(u, v);
    s += t / 12.0 * (u * u.transpose() + v * v.transpose() + (u + v) * (u + v).transpose());
  }
  const Mat2 w = sym_sqrt(s / a).inverse();
  return {w, -w * g};
}

/// Symmetric 2x2 matrix from its packed entries (s00, s01, s11).
inline Mat2 unpack(const Eigen::VectorXd& y) {
  Mat2 m;
  m << y(0), y(1), y(1), y(2);
  return m;
}

/// -t log det of the packed matrix in y.head<3>(): adds gradient and Hessian,
/// returns the value (+inf outside the cone).
inline double neg_log_det(const Eigen::VectorXd& y, double t, Eigen::VectorXd* g, Eigen::MatrixXd* hess) {
  const double l0 = y(0), l1 = y(1), l2 = y(2);
  const double det = l0 * l2 - l1 * l1;
  if (!(det > 0.0) || !(l0 > 0.0)) return std::numeric_limits<double>::infinity();
  if (g) {
    const Eigen::Vector3d gd = Eigen::Vector3d(l2, -2.0 * l1, l0) / det;
    Eigen::Matrix3d hd;
    hd << -l2 * l2, 2.0 * l1 * l2, det - l0 * l2, 2.0 * l1 * l2, -2.0 * det - 4.0 * l1 * l1, 2.0 * l0 * l1,
        det - l0 * l2, 2.0 * l0 * l1, -l0 * l0;
    hd /= det * det;
    g->head<3>() -= t * gd;
    hess->topLeftCorner<3, 3>() -= t * hd;
  }
  return -t * std::log(det);
}

/// Damped Newton on the barrier objective at fixed t. Returns the number of
/// steps taken.
template <class Problem>
int newton_center(const Problem& pb, Eigen::VectorXd& y, double t) {
  const auto n = y.size();
  Eigen::VectorXd g(n);
  Eigen::MatrixXd hess(n, n);
  double previous = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 200; ++it) {
    g.setZero();
    hess.setZero();
    pb.value(y, t, &g, &hess);
    const Eigen::VectorXd step = -hess.ldlt().solve(g);
    const double decrement = -g.dot(step);
    if (!(decrement > 1e-24)) return it;
    // Rounding floor of the gradient at large t.
    if (decrement < 1e-6 && decrement > 0.25 * previous) return it;
    previous = decrement;
    double alpha = 1.0;
    if (decrement > 0.25) {
      const double f0 = pb.value(y, t, nullptr, nullptr);
      while (alpha > 1e-14 && !(pb.value(y + alpha * step, t, nullptr, nullptr) <= f0 - 0.25 * alpha * decrement))
        alpha *= 0.5;
    } else {
      // Quadratic region: objective differences are below double resolution
      // at large t, so only feasibility is enforced.
      while (alpha > 1e-14 && !std::isfinite(pb.value(y + alpha * step, t, nullptr, nullptr))) alpha *= 0.5;
    }
    if (alpha <= 1e-14) return it;
    y += alpha * step;
    if (decrement < 1e-14) return it + 1;
  }
  if (previous < 1e-6) return 200;
  throw ConvergenceFailure("barrier Newton iteration did not converge");
}

/// Barrier path following from a strictly feasible y until the duality gap
/// m / t drops below 1e-10.
template <class Problem>
void follow_path(const Problem& pb, Eigen::VectorXd& y, double m, SolverInfo* info) {
  double t = 1.0;
  int total = 0;
  while (true) {
    total += newton_center(pb, y, t);
    if (m / t < 1e-10) break;
    t *= 16.0;
  }
  if (info) *info = {total, m / t};
}

/// maximize log det L  s.t.  <a_i, c> + |L a_i| <= b_i, over y = (L, c) with
/// L packed, or y = L when the center is fixed.
class InscribedProblem {
 public:
  InscribedProblem(const Polygon& p, std::optional<Vec2> fixed_center) : planes_(halfplanes(p)), fixed_(fixed_center) {}

  Ellipse solve(const Vec2& c0, double r0, SolverInfo* info) const {
    Eigen::VectorXd y(fixed_ ? 3 : 5);
    y.head<3>() << r0, 0.0, r0;
    if (!fixed_) y.tail<2>() = c0;
    follow_path(*this, y, static_cast<double>(planes_.size()), info);
    Ellipse e{center_of(y), unpack(y)};
    // Inflate about the center until the first edge is touched.
    double grow = std::numeric_limits<double>::infinity();
    for (const auto& h : planes_) grow = std::min(grow, (h.offset - h.normal.dot(e.center)) / (e.shape * h.normal).norm());
    e.shape *= grow;
    return e;
  }

  double value(const Eigen::VectorXd& y, double t, Eigen::VectorXd* g, Eigen::MatrixXd* hess) const {
    double f = neg_log_det(y, t, g, hess);
    if (!std::isfinite(f)) return f;
    const Vec2 c = center_of(y);
    for (const auto& h : planes_) {
      const Vec2& a = h.normal;
      Eigen::Matrix<double, 2, 3> jac;
      jac << a.x(), a.y(), 0.0, 0.0, a.x(), a.y();
      const Vec2 v = jac * y.head<3>();
      const double n = v.norm();
      const double s = h.offset - a.dot(c) - n;
      if (!(s > 0.0)) return std::numeric_limits<double>::infinity();
      f -= std::log(s);
      if (!g) continue;
      Eigen::VectorXd gi(y.size());
      gi.head<3>() = jac.transpose() * v / n;
      if (!fixed_) gi.tail<2>() = a;
      *g += gi / s;
      *hess += gi * gi.transpose() / (s * s);
      const Mat2 proj = Mat2::Identity() - v * v.transpose() / (n * n);
      hess->topLeftCorner<3, 3>() += jac.transpose() * proj * jac / (n * s);
    }
    return f;
  }

 private:
  Vec2 center_of(const Eigen::VectorXd& y) const { return fixed_ ? *fixed_ : Vec2(y.tail<2>()); }

  std::vector<Halfplane> planes_;
  std::optional<Vec2> fixed_;
};

/// Minimum-area ellipse {x : |A x + b| <= 1} containing the points:
/// maximize log det A  s.t.  |A q_i + b| <= 1, over y = (A, b) with A packed.
/// With a fixed center x, b = -A x and y = A.
class EnclosingProblem {
 public:
  EnclosingProblem(std::vector<Vec2> pts, std::optional<Vec2> fixed_center) : pts_(std::move(pts)), fixed_(fixed_center) {
    if (fixed_)
      for (auto& q : pts_) q -= *fixed_;
  }

  Ellipse solve(SolverInfo* info) const {
    Vec2 c0 = Vec2::Zero();
    if (!fixed_) {
      for (const auto& q : pts_) c0 += q;
      c0 /= static_cast<double>(pts_.size());
    }
    double r = 0.0;
    for (const auto& q : pts_) r = std::max(r, (q - c0).norm());
    Eigen::VectorXd y(fixed_ ? 3 : 5);
    y.head<3>() << 0.5 / r, 0.0, 0.5 / r;
    if (!fixed_) y.tail<2>() = -c0 * (0.5 / r);
    follow_path(*this, y, static_cast<double>(pts_.size()), info);
    const Mat2 inv = unpack(y).inverse();
    Ellipse e{fixed_ ? *fixed_ : Vec2(-inv * y.tail<2>()), inv};
    // Shrink about the center until the farthest point is on the boundary.
    double g = 0.0;
    for (const auto& q : pts_) g = std::max(g, e.gauge(fixed_ ? Vec2(q + *fixed_) : q));
    e.shape *= g;
    return e;
  }

  double value(const Eigen::VectorXd& y, double t, Eigen::VectorXd* g, Eigen::MatrixXd* hess) const {
    double f = neg_log_det(y, t, g, hess);
    if (!std::isfinite(f)) return f;
    Eigen::MatrixXd jac(2, y.size());
    jac.setZero();
    for (const auto& q : pts_) {
      jac.topLeftCorner<2, 3>() << q.x(), q.y(), 0.0, 0.0, q.x(), q.y();
      if (!fixed_) jac.topRightCorner<2, 2>().setIdentity();
      const Vec2 u = jac * y;
      const double s = 1.0 - u.squaredNorm();
      if (!(s > 0.0)) return std::numeric_limits<double>::infinity();
      f -= std::log(s);
      if (!g) continue;
      *g += jac.transpose() * (2.0 / s * u);
      *hess += jac.transpose() * (2.0 / s * Mat2::Identity() + 4.0 / (s * s) * u * u.transpose()) * jac;
    }
    return f;
  }

 private:
  std::vector<Vec2> pts_;
  std::optional<Vec2> fixed_;
};

}  // namespace detail

/// Minimum-area ellipse containing the polygon.
inline Ellipse loewner_ellipse(const Polygon& p, SolverInfo* info = nullptr) {
  const AffineMap w = detail::whitening(p);
  const Polygon q = affine_apply(w, p);
  return detail::EnclosingProblem(q.vertices(), std::nullopt).solve(info).transformed(w.inverse());
}

/// Minimum-area ellipse centered at x containing the polygon.
inline Ellipse loewner_ellipse_centered(const Polygon& p, const Vec2& x, SolverInfo* info = nullptr) {
  const AffineMap w = detail::whitening(p);
  const Polygon q = affine_apply(w, p);
  Ellipse e = detail::EnclosingProblem(q.vertices(), w(x)).solve(info).transformed(w.inverse());
  e.center = x;
  return e;
}

/// Maximum-area ellipse contained in the polygon.
inline Ellipse john_ellipse(const Polygon& p, SolverInfo* info = nullptr) {
  const AffineMap w = detail::whitening(p);
  const Polygon q = affine_apply(w, p);
  return detail::InscribedProblem(q, std::nullopt)
      .solve(Vec2::Zero(), 0.5 * interior_margin(q, Vec2::Zero()), info)
      .transformed(w.inverse());
}

/// Maximum-area ellipse centered at x contained in the polygon; x must be
/// interior.
inline Ellipse john_ellipse_centered(const Polygon& p, const Vec2& x, SolverInfo* info = nullptr) {
  if (!(interior_margin(p, x) > 0.0)) throw PointNotInterior("center must be interior");
  const AffineMap w = detail::whitening(p);
  const Polygon q = affine_apply(w, p);
  const Vec2 y = w(x);
  const double margin = interior_margin(q, y);
  if (!(margin > 0.0)) throw PointNotInterior("center must be interior");
  Ellipse e = detail::InscribedProblem(q, y).solve(y, 0.5 * margin, info).transformed(w.inverse());
  e.center = x;
  return e;
}

/// f_K(x): largest area of an ellipse centered at x inside K; 0 off int K.
inline double max_centered_area(const Polygon& p, const Vec2& x) {
  if (!(interior_margin(p, x) > kEpsGeom * diameter(p))) return 0.0;
  return john_ellipse_centered(p, x).area();
}

/// λ_K(x): inverse of the smallest area of an ellipse centered at x
/// containing K.
inline double min_centered_inverse_area(const Polygon& p, const Vec2& x) {
  return 1.0 / loewner_ellipse_centered(p, x).area();
}

// ---------------------------------------------------------------------------
// John-condition certificates

enum class ContactMode { inscribed, enclosing };

struct Contact {
  Vec2 direction;
  double weight;
};

struct JohnCertificate {
  std::vector<Contact> contacts;  ///< contacts carrying positive weight
  std::size_t detected = 0;       ///< all contact directions found
  Vec2 residual_sum = Vec2::Zero();
  double residual_identity = 0.0;
  bool contained = true;
  bool passed = false;
};

inline constexpr double kContactTol = 1e-6;

/// Lawson–Hanson non-negative least squares: argmin |A x - b|, x >= 0.
inline Eigen::VectorXd nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  const Eigen::Index n = a.cols();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(n, false);
  const double tol = 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff());

  auto solve_passive = [&](Eigen::VectorXd& z) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < n; ++j)
      if (passive[j]) idx.push_back(j);
    Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = a.col(idx[k]);
    const Eigen::VectorXd zs = sub.completeOrthogonalDecomposition().solve(b);
    z.setZero(n);
    for (std::size_t k = 0; k < idx.size(); ++k) z(idx[k]) = zs(static_cast<Eigen::Index>(k));
  };

  for (int outer = 0; outer < 3 * static_cast<int>(n) + 10; ++outer) {
    const Eigen::VectorXd w = a.transpose() * (b - a * x);
    Eigen::Index best = -1;
    for (Eigen::Index j = 0; j < n; ++j)
      if (!passive[j] && w(j) > tol && (best < 0 || w(j) > w(best))) best = j;
    if (best < 0) break;
    passive[best] = true;
    Eigen::VectorXd z;
    for (int inner = 0; inner < 3 * static_cast<int>(n) + 10; ++inner) {
      solve_passive(z);
      double alpha = 1.0;
      bool feasible = true;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && z(j) <= 0.0) {
          feasible = false;
          alpha = std::min(alpha, x(j) / (x(j) - z(j)));
        }
      }
      if (feasible) break;
      x += alpha * (z - x);
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[j] && x(j) <= tol) {
          passive[j] = false;
          x(j) = 0.0;
        }
    }
    x = z;
  }
  return x;
}

/// Checks John's optimality conditions after normalizing `e` to the unit
/// disk: contact directions u_i with weights c_i >= 0 and
/// sum c_i u_i = 0, sum c_i u_i u_i^T = I. Throws NoContacts when the
/// normalized body does not touch the unit circle.
inline JohnCertificate verify_john_conditions(const Polygon& p, const Ellipse& e, ContactMode mode) {
  const Polygon q = affine_apply(e.normalizer(), p);
  JohnCertificate cert;
  std::vector<Vec2> dirs;
  if (mode == ContactMode::inscribed) {
    for (std::size_t i = 0; i < q.size(); ++i) {
      const Vec2 n = q.normal(i);
      const double d = n.dot(q[i]);
      if (d < 1.0 - kContactTol) cert.contained = false;
      if (std::abs(d - 1.0) <= kContactTol) dirs.push_back(n);
    }
  } else {
    for (const auto& v : q.vertices()) {
      const double r = v.norm();
      if (r > 1.0 + kContactTol) cert.contained = false;
      if (std::abs(r - 1.0) <= kContactTol) dirs.push_back(v / r);
    }
  }
  if (dirs.empty()) throw NoContacts("ellipse does not touch the body boundary");
  cert.detected = dirs.size();

  Eigen::MatrixXd a(5, static_cast<Eigen::Index>(dirs.size()));
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const Vec2& u = dirs[i];
    a.col(static_cast<Eigen::Index>(i)) << u.x(), u.y(), u.x() * u.x(), u.x() * u.y(), u.y() * u.y();
  }
  Eigen::VectorXd rhs(5);
  rhs << 0.0, 0.0, 1.0, 0.0, 1.0;
  const Eigen::VectorXd c = nnls(a, rhs);

  Mat2 id = Mat2::Zero();
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const double ci = c(static_cast<Eigen::Index>(i));
    if (ci <= 0.0) continue;
    cert.contacts.push_back({dirs[i], ci});
    cert.residual_sum += ci * dirs[i];
    id += ci * dirs[i] * dirs[i].transpose();
  }
  cert.residual_identity = (id - Mat2::Identity()).norm();
  cert.passed = cert.contained && cert.residual_sum.norm() < kContactTol && cert.residual_identity < kContactTol;
  return cert;
}

}  // namespace aip
