#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace aip {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Predicate tolerance for orientation, interiority and shift range tests.
inline constexpr double kEpsGeom = 1e-10;
/// Relative empty-polygon threshold, scaled by diam².
inline constexpr double kEpsArea = 1e-14;

inline double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }
inline Vec2 perp(const Vec2& a) { return {-a.y(), a.x()}; }

// Errors. Every failure in the library is one of these.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define AIP_DEFINE_ERROR(Name) \
  class Name : public Error {  \
   public:                     \
    using Error::Error;        \
  }

AIP_DEFINE_ERROR(DegenerateInput);
AIP_DEFINE_ERROR(PointNotInterior);
AIP_DEFINE_ERROR(ShiftOutOfRange);
AIP_DEFINE_ERROR(SingularMap);
AIP_DEFINE_ERROR(ConvergenceFailure);
AIP_DEFINE_ERROR(NoContacts);
AIP_DEFINE_ERROR(EmptyResult);
AIP_DEFINE_ERROR(BadParams);
AIP_DEFINE_ERROR(NoRoot);
AIP_DEFINE_ERROR(CertificationFailure);
AIP_DEFINE_ERROR(ParseError);

#undef AIP_DEFINE_ERROR

}  // namespace aip
