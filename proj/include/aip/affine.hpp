#pragma once

#include "aip/polygon.hpp"

namespace aip {

/// Nonsingular affine map x -> matrix * x + translation.
class AffineMap {
 public:
  AffineMap() : a_(Mat2::Identity()), b_(Vec2::Zero()) {}
  AffineMap(const Mat2& matrix, const Vec2& translation) : a_(matrix), b_(translation) {
    if (!(std::abs(a_.determinant()) > kEpsGeom)) throw SingularMap("affine map is singular");
  }

  static AffineMap linear(const Mat2& m) { return {m, Vec2::Zero()}; }
  static AffineMap translation(const Vec2& t) { return {Mat2::Identity(), t}; }

  const Mat2& matrix() const { return a_; }
  const Vec2& offset() const { return b_; }
  double det() const { return a_.determinant(); }

  Vec2 operator()(const Vec2& x) const { return a_ * x + b_; }
  /// Linear part only, for directions.
  Vec2 linear_part(const Vec2& v) const { return a_ * v; }
  /// T*^{-1}: how normals and polar bodies transform.
  Mat2 adjoint_inverse() const { return a_.inverse().transpose(); }

  AffineMap inverse() const {
    const Mat2 inv = a_.inverse();
    return {inv, -(inv * b_)};
  }
  /// (this ∘ other)(x) = this(other(x)).
  AffineMap operator*(const AffineMap& other) const { return {a_ * other.a_, a_ * other.b_ + b_}; }

 private:
  Mat2 a_;
  Vec2 b_;
};

/// Vertex-wise image, canonicalized; area scales by |det T|.
inline Polygon affine_apply(const AffineMap& t, const Polygon& p) {
  std::vector<Vec2> v;
  v.reserve(p.size());
  for (const auto& x : p.vertices()) v.push_back(t(x));
  return canonicalize(v);
}

}  // namespace aip
