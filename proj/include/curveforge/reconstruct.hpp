#pragma once

#include <string>
#include <vector>

#include "curveforge/curve.hpp"
#include "curveforge/ode.hpp"

namespace curveforge {

/// Azimuth of the tangent about e3, with its rate.
struct ThetaSeries {
  std::vector<double> s;
  std::vector<double> theta;
  std::vector<double> rate;  // kappa sqrt(radicand) / (1 - w^2)
};

/// theta = +-int kappa sqrt(1 - w^2 - (w'/kappa)^2) / (1 - w^2) ds, signed by the
/// solution's branch, by running trapezoid, zero at the solution's anchor.
/// Throws PoleError where 1 - w^2 < 1e-12.
ThetaSeries theta_integral(const WSolution& wsol, const IntrinsicProfile& profile);

/// x = int sqrt(1-w^2) cos(theta), y = int sqrt(1-w^2) sin(theta), z = int w,
/// with p(anchor) = start. Frames are attached.
SampledCurve position(const WSolution& wsol, const IntrinsicProfile& profile, const Vec3& start);

/// Frenet frames from the polar form t = (sin phi cos theta, sin phi sin theta, cos phi),
/// phi = arccos w, with n = t'/kappa and b = t x n.
std::vector<FrenetFrame> frames_from_w(const WSolution& wsol, const ThetaSeries& theta,
                                       const IntrinsicProfile& profile);

struct ReconstructOptions {
  double step = 1e-3;
  double guard = 1e-10;
  Direction direction = Direction::Both;
  /// Root taken by the first piece. Chart pieces (restarts, pinned frames)
  /// always use the positive root since the chart frame has <b, e3> > 0.
  Branch branch = Branch::Positive;
  bool restart = false;
  /// With restart on, the chart is switched once the radicand drops below this.
  double restart_guard = 1e-2;
  int max_restarts = 16;
};

struct PipelineEvent {
  enum class Kind { DomainExit, Restart };

  Kind kind = Kind::DomainExit;
  double s = 0.0;
  double radicand = 0.0;
  std::string detail;
};

const char* to_string(PipelineEvent::Kind kind);

struct Reconstruction {
  SampledCurve curve;
  std::vector<PipelineEvent> events;
  int restarts = 0;

  /// True when the curve stops short of the profile domain.
  bool truncated = false;
};

/// Chart frame used when restarting or starting from an arbitrary frame:
/// b = (1,1,1)/sqrt(3), t = (1,-1,0)/sqrt(2), n = b x t.
FrenetFrame chart_frame();

/// solve_w -> theta_integral -> position -> frames_from_w from the scalar
/// initial data. A DomainExit either truncates the curve (restart off) or
/// re-expresses the current frame in chart_frame() coordinates, restarts the
/// scalar problem there, and glues the new piece on with the rigid motion
/// that matches frames at the seam. Throws RestartLimitError past
/// opts.max_restarts.
Reconstruction reconstruct(const IntrinsicProfile& profile, double s0, double w0, double v0, const Vec3& start,
                           const ReconstructOptions& opts = {});

/// Same pipeline with the curve pinned to a given frame and point at s0.
Reconstruction reconstruct_from_frame(const IntrinsicProfile& profile, double s0, const FrenetFrame& frame0,
                                      const Vec3& start, const ReconstructOptions& opts = {});

struct Verification {
  double max_kappa_rel_error = 0.0;
  double max_tau_abs_error = 0.0;
  double unit_speed_deviation = 0.0;
  std::size_t samples = 0;
};

/// Compares curvature and torsion estimated from positions with the profile,
/// ignoring `edge` samples at each end.
Verification verify_curve(const SampledCurve& curve, const IntrinsicProfile& profile, std::size_t edge = 5);

}  // namespace curveforge
