#pragma once

#include <cmath>
#include <numbers>

#include "curveforge/curve.hpp"
#include "curveforge/ode.hpp"

namespace curveforge::testing {

inline ScalarFn constant(double c) {
  return [c](double) { return c; };
}

inline IntrinsicProfile constant_profile(double kappa, double tau, Interval domain) {
  return IntrinsicProfile(constant(kappa), constant(tau), domain);
}

inline bool finite(const Vec3& v) { return std::isfinite(v.x()) && std::isfinite(v.y()) && std::isfinite(v.z()); }

/// Unit-speed circular helix (a cos(s/c), a sin(s/c), b s/c), c = sqrt(a^2 + b^2),
/// sampled on [lo, lo + n h]. Curvature a/c^2, torsion b/c^2.
inline SampledCurve analytic_helix(double a, double b, double lo, double h, std::size_t n) {
  const double c = std::sqrt(a * a + b * b);
  SampledCurve curve;
  curve.step = h;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = lo + static_cast<double>(i) * h;
    curve.s.push_back(s);
    curve.points.emplace_back(a * std::cos(s / c), a * std::sin(s / c), b * s / c);
  }
  return curve;
}

/// Rotation about a unit axis (Rodrigues), built without Eigen's AngleAxis.
inline Mat3 axis_rotation(Vec3 axis, double angle) {
  axis.normalize();
  Mat3 k;
  k << 0, -axis.z(), axis.y(), axis.z(), 0, -axis.x(), -axis.y(), axis.x(), 0;
  return Mat3::Identity() + std::sin(angle) * k + (1.0 - std::cos(angle)) * k * k;
}

}  // namespace curveforge::testing
