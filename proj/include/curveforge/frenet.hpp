#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "curveforge/curve.hpp"
#include "curveforge/ode.hpp"

namespace curveforge {

/// Classical route: RK4 on t' = kappa n, n' = -kappa t + tau b, b' = -tau n,
/// p' = t, with (t, n) re-orthonormalized after every step and b = t x n.
/// Samples the uniform grid of `profile.domain()` anchored at s0.
SampledCurve frenet_integrate(const IntrinsicProfile& profile, const FrenetFrame& frame0, const Vec3& p0,
                              double s0, double h);

/// Same on an explicit ascending grid; frame0 and p0 are imposed at grid[anchor].
SampledCurve frenet_integrate(const IntrinsicProfile& profile, const FrenetFrame& frame0, const Vec3& p0,
                              std::span<const double> grid, std::size_t anchor, double h);

/// Curvature and torsion estimated from positions on samples
/// [first, first + kappa.size()). The three samples at each end are omitted.
struct CurvatureEstimate {
  std::size_t first = 0;
  std::vector<double> s;
  std::vector<double> kappa;
  std::vector<double> tau;
};

/// Centered differences: second-order stencils for the first two derivatives,
/// five-point stencil for the third. Requires >= 7 samples on a uniform grid.
/// Throws DegenerateCurveError when |a' x a''|^2 < 1e-14.
CurvatureEstimate estimate_kappa_tau(const SampledCurve& curve);

/// Frenet frames from the same difference stencils, for samples
/// [3, size - 3).
std::vector<FrenetFrame> estimate_frames(const SampledCurve& curve);

struct Alignment {
  RigidMotion motion;  // b ~ motion.apply(a)
  double rmsd = 0.0;
};

/// Least-squares proper rigid motion taking A onto B (Kabsch). Reflections are
/// excluded by flipping the smallest singular direction when needed.
Alignment kabsch_align(std::span<const Vec3> a, std::span<const Vec3> b);

/// Curve version; throws GridMismatchError unless both curves share the grid.
Alignment kabsch_align(const SampledCurve& a, const SampledCurve& b);

/// Root-mean-square distance between matched samples without any alignment.
double rms_distance(std::span<const Vec3> a, std::span<const Vec3> b);

struct InitialData {
  double w0 = 0.0;
  double v0 = 0.0;
};

/// w0 = <t, e3>, v0 = kappa0 <n, e3>. Throws ChartBoundaryError when
/// w0^2 + (v0/kappa0)^2 >= 1 - 1e-12, i.e. when <b, e3> is (nearly) zero.
InitialData initial_conditions_from_frame(const FrenetFrame& frame, double kappa0);

}  // namespace curveforge
