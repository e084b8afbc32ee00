#include "curveforge/frenet.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "curveforge/errors.hpp"
#include "curveforge/grid.hpp"

namespace curveforge {

namespace {

struct FrameState {
  Vec3 t, n, b, p;
};

FrameState derivative(const FrameState& y, double kappa, double tau) {
  return {kappa * y.n, -kappa * y.t + tau * y.b, -tau * y.n, y.t};
}

FrameState axpy(const FrameState& y, double a, const FrameState& k) {
  return {y.t + a * k.t, y.n + a * k.n, y.b + a * k.b, y.p + a * k.p};
}

FrameState rk4_step(const IntrinsicProfile& profile, double s, const FrameState& y, double ds) {
  const double half = 0.5 * ds;
  const double k0 = profile.kappa(s), t0 = profile.tau(s);
  const double km = profile.kappa(s + half), tm = profile.tau(s + half);
  const double k1 = profile.kappa(s + ds), t1 = profile.tau(s + ds);

  const FrameState d1 = derivative(y, k0, t0);
  const FrameState d2 = derivative(axpy(y, half, d1), km, tm);
  const FrameState d3 = derivative(axpy(y, half, d2), km, tm);
  const FrameState d4 = derivative(axpy(y, ds, d3), k1, t1);

  FrameState next;
  next.t = y.t + ds / 6.0 * (d1.t + 2.0 * d2.t + 2.0 * d3.t + d4.t);
  next.n = y.n + ds / 6.0 * (d1.n + 2.0 * d2.n + 2.0 * d3.n + d4.n);
  next.b = y.b + ds / 6.0 * (d1.b + 2.0 * d2.b + 2.0 * d3.b + d4.b);
  next.p = y.p + ds / 6.0 * (d1.p + 2.0 * d2.p + 2.0 * d3.p + d4.p);

  const FrenetFrame f = orthonormalize(next.t, next.n);
  next.t = f.t;
  next.n = f.n;
  next.b = f.b;
  return next;
}

double uniform_step(const SampledCurve& curve) {
  const std::size_t n = curve.size();
  if (n < 7) throw GridMismatchError("at least 7 samples are required, got " + std::to_string(n));
  const double h = curve.step > 0.0 ? curve.step : curve.s[2] - curve.s[1];
  // The outermost intervals may be short; every interval a stencil touches must be h.
  for (std::size_t i = 1; i + 2 < n; ++i) {
    const double ds = curve.s[i + 1] - curve.s[i];
    if (std::abs(ds - h) > 1e-9 * h) {
      throw GridMismatchError("non-uniform grid at sample " + std::to_string(i));
    }
  }
  return h;
}

struct Derivatives {
  Vec3 d1, d2, d3;
};

Derivatives differences(const std::vector<Vec3>& p, std::size_t i, double h) {
  Derivatives d;
  d.d1 = (p[i + 1] - p[i - 1]) / (2.0 * h);
  d.d2 = (p[i + 1] - 2.0 * p[i] + p[i - 1]) / (h * h);
  d.d3 = (p[i + 2] - 2.0 * p[i + 1] + 2.0 * p[i - 1] - p[i - 2]) / (2.0 * h * h * h);
  return d;
}

constexpr std::size_t kEdge = 3;

}  // namespace

SampledCurve frenet_integrate(const IntrinsicProfile& profile, const FrenetFrame& frame0, const Vec3& p0,
                              double s0, double h) {
  const Grid grid = uniform_grid(profile.domain(), s0, h);
  return frenet_integrate(profile, frame0, p0, grid.s, grid.anchor, h);
}

SampledCurve frenet_integrate(const IntrinsicProfile& profile, const FrenetFrame& frame0, const Vec3& p0,
                              std::span<const double> grid, std::size_t anchor, double h) {
  if (!(h > 0.0)) throw InitialConditionError("step must be positive");
  if (anchor >= grid.size()) throw InitialConditionError("anchor outside the grid");
  if (!frame0.is_orthonormal(1e-9)) throw InitialConditionError("initial frame is not orthonormal");

  SampledCurve out;
  out.s.assign(grid.begin(), grid.end());
  out.step = h;
  out.anchor = anchor;
  out.points.resize(grid.size());
  out.frames.resize(grid.size());

  const FrameState start{frame0.t, frame0.n, frame0.b, p0};
  auto store = [&](std::size_t i, const FrameState& y) {
    out.points[i] = y.p;
    out.frames[i] = {y.t, y.n, y.b};
  };
  store(anchor, start);

  FrameState y = start;
  for (std::size_t i = anchor + 1; i < grid.size(); ++i) {
    y = rk4_step(profile, grid[i - 1], y, grid[i] - grid[i - 1]);
    store(i, y);
  }
  y = start;
  for (std::size_t i = anchor; i-- > 0;) {
    y = rk4_step(profile, grid[i + 1], y, grid[i] - grid[i + 1]);
    store(i, y);
  }
  return out;
}

CurvatureEstimate estimate_kappa_tau(const SampledCurve& curve) {
  const double h = uniform_step(curve);
  const std::size_t n = curve.size();

  CurvatureEstimate est;
  est.first = kEdge;
  for (std::size_t i = kEdge; i + kEdge < n; ++i) {
    const Derivatives d = differences(curve.points, i, h);
    const Vec3 cross = d.d1.cross(d.d2);
    const double cross2 = cross.squaredNorm();
    if (cross2 < 1e-14) throw DegenerateCurveError(i, curve.s[i]);
    const double speed = d.d1.norm();
    est.s.push_back(curve.s[i]);
    est.kappa.push_back(std::sqrt(cross2) / (speed * speed * speed));
    est.tau.push_back(cross.dot(d.d3) / cross2);
  }
  return est;
}

std::vector<FrenetFrame> estimate_frames(const SampledCurve& curve) {
  const double h = uniform_step(curve);
  const std::size_t n = curve.size();
  std::vector<FrenetFrame> frames;
  for (std::size_t i = kEdge; i + kEdge < n; ++i) {
    const Derivatives d = differences(curve.points, i, h);
    if (d.d1.cross(d.d2).squaredNorm() < 1e-14) throw DegenerateCurveError(i, curve.s[i]);
    frames.push_back(orthonormalize(d.d1, d.d2));
  }
  return frames;
}

Alignment kabsch_align(std::span<const Vec3> a, std::span<const Vec3> b) {
  if (a.size() != b.size() || a.empty()) {
    throw GridMismatchError("point sets differ in size (" + std::to_string(a.size()) + " vs " +
                            std::to_string(b.size()) + ")");
  }
  const double count = static_cast<double>(a.size());
  Vec3 ca = Vec3::Zero();
  Vec3 cb = Vec3::Zero();
  for (std::size_t i = 0; i < a.size(); ++i) {
    ca += a[i];
    cb += b[i];
  }
  ca /= count;
  cb /= count;

  Mat3 cov = Mat3::Zero();
  for (std::size_t i = 0; i < a.size(); ++i) cov += (a[i] - ca) * (b[i] - cb).transpose();

  const Eigen::JacobiSVD<Mat3> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 d = Mat3::Identity();
  if ((svd.matrixV() * svd.matrixU().transpose()).determinant() < 0.0) d(2, 2) = -1.0;

  Alignment out;
  out.motion.rotation = svd.matrixV() * d * svd.matrixU().transpose();
  out.motion.translation = cb - out.motion.rotation * ca;

  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += (out.motion.apply(a[i]) - b[i]).squaredNorm();
  out.rmsd = std::sqrt(sum / count);
  return out;
}

Alignment kabsch_align(const SampledCurve& a, const SampledCurve& b) {
  if (a.size() != b.size()) {
    throw GridMismatchError("curves differ in sample count (" + std::to_string(a.size()) + " vs " +
                            std::to_string(b.size()) + ")");
  }
  const double h = std::max(a.step, b.step);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a.s[i] - b.s[i]) > 1e-9 * std::max(h, 1e-300) + 1e-12 * std::abs(a.s[i])) {
      throw GridMismatchError("arc-length grids differ at sample " + std::to_string(i));
    }
  }
  return kabsch_align(std::span<const Vec3>(a.points), std::span<const Vec3>(b.points));
}

double rms_distance(std::span<const Vec3> a, std::span<const Vec3> b) {
  if (a.size() != b.size() || a.empty()) throw GridMismatchError("point sets differ in size");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += (a[i] - b[i]).squaredNorm();
  return std::sqrt(sum / static_cast<double>(a.size()));
}

InitialData initial_conditions_from_frame(const FrenetFrame& frame, double kappa0) {
  if (!(kappa0 > 0.0)) throw InitialConditionError("kappa0 must be positive");
  if (!frame.is_orthonormal(1e-9)) throw InitialConditionError("frame is not orthonormal");
  InitialData out;
  out.w0 = frame.t.z();
  out.v0 = kappa0 * frame.n.z();
  const double ellipse = out.w0 * out.w0 + (out.v0 / kappa0) * (out.v0 / kappa0);
  if (ellipse >= 1.0 - 1e-12) {
    throw ChartBoundaryError("frame binormal is orthogonal to e3 (ellipse value " + std::to_string(ellipse) +
                             "); rotate the frame first");
  }
  if (frame.b.z() < 0.0) {
    throw ChartBoundaryError("frame binormal points below the e3 plane; rotate the frame first");
  }
  return out;
}

}  // namespace curveforge
