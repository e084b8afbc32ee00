#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace curveforge {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Closed arc-length interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double s) const noexcept { return s >= lo && s <= hi; }
  double length() const noexcept { return hi - lo; }
};

/// Frenet trihedron: tangent, principal normal, binormal.
struct FrenetFrame {
  Vec3 t = Vec3::UnitX();
  Vec3 n = Vec3::UnitY();
  Vec3 b = Vec3::UnitZ();

  /// Columns (t, n, b).
  Mat3 matrix() const {
    Mat3 m;
    m.col(0) = t;
    m.col(1) = n;
    m.col(2) = b;
    return m;
  }

  static FrenetFrame from_matrix(const Mat3& m) { return {m.col(0), m.col(1), m.col(2)}; }

  FrenetFrame rotated(const Mat3& r) const { return {r * t, r * n, r * b}; }

  /// Unit lengths, pairwise orthogonality, and b = t x n, each within `tol`.
  bool is_orthonormal(double tol = 1e-9) const;
};

/// Re-orthonormalizes (t, n) by modified Gram-Schmidt and sets b = t x n.
FrenetFrame orthonormalize(const Vec3& t, const Vec3& n);

/// x -> rotation * x + translation, with rotation proper orthogonal.
struct RigidMotion {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
  bool is_proper(double tol = 1e-9) const;
};

/// Uniformly sampled arc-length curve. Interior spacing equals `step`; the
/// first and last intervals may be shorter so that the samples end exactly
/// on the requested interval. `anchor` is the index of the sample where the
/// initial data was imposed.
struct SampledCurve {
  std::vector<double> s;
  std::vector<Vec3> points;
  std::vector<FrenetFrame> frames;  // empty when not computed
  double step = 0.0;
  std::size_t anchor = 0;

  std::size_t size() const noexcept { return s.size(); }
  bool has_frames() const noexcept { return !frames.empty(); }

  SampledCurve transformed(const RigidMotion& motion) const;
};

/// Largest |‖(p[i+1] - p[i-1]) / (s[i+1] - s[i-1])‖ - 1| over interior samples.
double unit_speed_deviation(const SampledCurve& curve);

}  // namespace curveforge
