#include "curveforge/curve.hpp"

#include <algorithm>
#include <cmath>

namespace curveforge {

bool FrenetFrame::is_orthonormal(double tol) const {
  return std::abs(t.norm() - 1.0) <= tol && std::abs(n.norm() - 1.0) <= tol &&
         std::abs(b.norm() - 1.0) <= tol && std::abs(t.dot(n)) <= tol && std::abs(t.dot(b)) <= tol &&
         std::abs(n.dot(b)) <= tol && (t.cross(n) - b).norm() <= tol;
}

FrenetFrame orthonormalize(const Vec3& t, const Vec3& n) {
  FrenetFrame f;
  f.t = t.normalized();
  f.n = (n - n.dot(f.t) * f.t).normalized();
  f.b = f.t.cross(f.n);
  return f;
}

bool RigidMotion::is_proper(double tol) const {
  return (rotation.transpose() * rotation - Mat3::Identity()).norm() <= tol &&
         std::abs(rotation.determinant() - 1.0) <= tol;
}

SampledCurve SampledCurve::transformed(const RigidMotion& motion) const {
  SampledCurve out = *this;
  for (auto& p : out.points) p = motion.apply(p);
  for (auto& f : out.frames) f = f.rotated(motion.rotation);
  return out;
}

double unit_speed_deviation(const SampledCurve& curve) {
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
    const double ds = curve.s[i + 1] - curve.s[i - 1];
    const double speed = (curve.points[i + 1] - curve.points[i - 1]).norm() / ds;
    worst = std::max(worst, std::abs(speed - 1.0));
  }
  return worst;
}

}  // namespace curveforge
