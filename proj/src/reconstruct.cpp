#include "curveforge/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "curveforge/errors.hpp"
#include "curveforge/frenet.hpp"
#include "curveforge/grid.hpp"

namespace curveforge {

namespace {

constexpr double kPoleBound = 1e-12;

std::vector<double> abscissae(const WSolution& wsol) {
  std::vector<double> s;
  s.reserve(wsol.size());
  for (const auto& st : wsol.states) s.push_back(st.s);
  return s;
}

// One chart-local piece: the scalar solution and the curve it integrates to,
// starting at the origin.
struct Piece {
  WSolution wsol;
  SampledCurve curve;
};

Piece solve_piece(const IntrinsicProfile& profile, double s0, double w0, double v0, Direction direction,
                  Branch branch, double guard, const ReconstructOptions& opts) {
  SolveOptions so;
  so.step = opts.step;
  so.guard = guard;
  so.direction = direction;
  so.branch = branch;
  Piece piece;
  piece.wsol = solve_w(profile, s0, w0, v0, so);
  piece.curve = position(piece.wsol, profile, Vec3::Zero());
  return piece;
}

PipelineEvent exit_event(const Termination& t, const char* side) {
  return {PipelineEvent::Kind::DomainExit, t.s, t.radicand, std::string(side) + " chart boundary"};
}

bool is_exit(const std::optional<Termination>& t) {
  return t && t->kind == Termination::Kind::DomainExit;
}

// Carries `piece` into world coordinates so that its frame at `index`
// coincides with `frame` and its point there with `point`.
RigidMotion seam_motion(const SampledCurve& piece, std::size_t index, const FrenetFrame& frame,
                        const Vec3& point) {
  RigidMotion m;
  m.rotation = frame.matrix() * piece.frames[index].matrix().transpose();
  m.translation = point - m.rotation * piece.points[index];
  return m;
}

class Assembler {
 public:
  Assembler(const IntrinsicProfile& profile, const ReconstructOptions& opts)
      : profile_(profile), opts_(opts) {}

  Reconstruction run(const Piece& first, const RigidMotion& placement) {
    Reconstruction out;
    out.curve = first.curve.transformed(placement);
    out.curve.step = opts_.step;

    auto forward = first.wsol.forward;
    auto backward = first.wsol.backward;
    if (is_exit(backward)) out.events.push_back(exit_event(*backward, "backward"));
    if (is_exit(forward)) out.events.push_back(exit_event(*forward, "forward"));

    if (opts_.restart) {
      while (is_exit(forward)) forward = extend(out, +1);
      while (is_exit(backward)) backward = extend(out, -1);
    }
    out.truncated = is_exit(forward) || is_exit(backward);
    return out;
  }

  double guard() const { return opts_.restart ? std::max(opts_.guard, opts_.restart_guard) : opts_.guard; }

 private:
  // Restarts the scalar problem in the chart frame at the current end of the
  // curve and glues the new piece on.
  std::optional<Termination> extend(Reconstruction& out, int dir) {
    if (out.restarts >= opts_.max_restarts) throw RestartLimitError(opts_.max_restarts);
    ++out.restarts;

    SampledCurve& curve = out.curve;
    const std::size_t seam = dir > 0 ? curve.size() - 1 : 0;
    const double s_seam = curve.s[seam];
    const InitialData init = initial_conditions_from_frame(chart_frame(), profile_.kappa(s_seam));
    const Piece piece = solve_piece(profile_, s_seam, init.w0, init.v0,
                                    dir > 0 ? Direction::Forward : Direction::Backward, Branch::Positive, guard(),
                                    opts_);
    const RigidMotion m = seam_motion(piece.curve, piece.curve.anchor, curve.frames[seam], curve.points[seam]);

    out.events.push_back({PipelineEvent::Kind::Restart, s_seam, radicand(piece.wsol.states[piece.wsol.anchor], profile_),
                          std::string(dir > 0 ? "forward" : "backward") + " restart " +
                              std::to_string(out.restarts)});

    const SampledCurve placed = piece.curve.transformed(m);
    if (dir > 0) {
      for (std::size_t i = placed.anchor + 1; i < placed.size(); ++i) {
        curve.s.push_back(placed.s[i]);
        curve.points.push_back(placed.points[i]);
        curve.frames.push_back(placed.frames[i]);
      }
    } else {
      const std::size_t n = placed.anchor;
      curve.s.insert(curve.s.begin(), placed.s.begin(), placed.s.begin() + n);
      curve.points.insert(curve.points.begin(), placed.points.begin(), placed.points.begin() + n);
      curve.frames.insert(curve.frames.begin(), placed.frames.begin(), placed.frames.begin() + n);
      curve.anchor += n;
    }

    const auto& term = dir > 0 ? piece.wsol.forward : piece.wsol.backward;
    if (is_exit(term)) out.events.push_back(exit_event(*term, dir > 0 ? "forward" : "backward"));
    return term;
  }

  const IntrinsicProfile& profile_;
  const ReconstructOptions& opts_;
};

}  // namespace

const char* to_string(PipelineEvent::Kind kind) {
  switch (kind) {
    case PipelineEvent::Kind::DomainExit: return "domain-exit";
    case PipelineEvent::Kind::Restart: return "restart";
  }
  return "?";
}

ThetaSeries theta_integral(const WSolution& wsol, const IntrinsicProfile& profile) {
  ThetaSeries out;
  out.s = abscissae(wsol);
  out.rate.reserve(wsol.size());
  // theta' sin^2(phi) = kappa <b, e3>, so the branch fixes the sense of rotation.
  const double sign = static_cast<double>(static_cast<int>(wsol.branch));
  for (const auto& st : wsol.states) {
    const double sin2 = 1.0 - st.w * st.w;
    if (!(sin2 >= kPoleBound)) throw PoleError(st.s, st.w);
    const double r = radicand(st, profile);
    if (r < 0.0) throw NegativeRadicandError(st.s, r);
    out.rate.push_back(sign * profile.kappa(st.s) * std::sqrt(r) / sin2);
  }
  out.theta = cumulative_trapezoid(out.s, out.rate, wsol.anchor);
  return out;
}

std::vector<FrenetFrame> frames_from_w(const WSolution& wsol, const ThetaSeries& theta,
                                       const IntrinsicProfile& profile) {
  if (theta.theta.size() != wsol.size()) throw GridMismatchError("theta series does not match the solution grid");
  std::vector<FrenetFrame> frames;
  frames.reserve(wsol.size());
  for (std::size_t i = 0; i < wsol.size(); ++i) {
    const WState& st = wsol.states[i];
    const double sin2 = 1.0 - st.w * st.w;
    if (!(sin2 >= kPoleBound)) throw PoleError(st.s, st.w);
    const double sin_phi = std::sqrt(sin2);
    const double cos_phi = st.w;
    const double dphi = -st.v / sin_phi;
    const double dtheta = theta.rate[i];
    const double c = std::cos(theta.theta[i]);
    const double s = std::sin(theta.theta[i]);
    const double kappa = profile.kappa(st.s);

    const Vec3 t(sin_phi * c, sin_phi * s, cos_phi);
    const Vec3 n(dphi * cos_phi * c - dtheta * sin_phi * s, dphi * cos_phi * s + dtheta * sin_phi * c,
                 -dphi * sin_phi);
    frames.push_back(orthonormalize(t, n / kappa));
  }
  return frames;
}

SampledCurve position(const WSolution& wsol, const IntrinsicProfile& profile, const Vec3& start) {
  const ThetaSeries theta = theta_integral(wsol, profile);

  std::vector<Vec3> tangent;
  tangent.reserve(wsol.size());
  for (std::size_t i = 0; i < wsol.size(); ++i) {
    const double w = wsol.states[i].w;
    const double sin_phi = std::sqrt(1.0 - w * w);
    tangent.emplace_back(sin_phi * std::cos(theta.theta[i]), sin_phi * std::sin(theta.theta[i]), w);
  }

  SampledCurve curve;
  curve.s = theta.s;
  curve.step = wsol.step;
  curve.anchor = wsol.anchor;
  curve.points = cumulative_trapezoid(curve.s, tangent, wsol.anchor);
  for (auto& p : curve.points) p += start;
  curve.frames = frames_from_w(wsol, theta, profile);
  return curve;
}

FrenetFrame chart_frame() {
  FrenetFrame f;
  f.b = Vec3(1.0, 1.0, 1.0).normalized();
  f.t = Vec3(1.0, -1.0, 0.0).normalized();
  f.n = f.b.cross(f.t);
  return f;
}

Reconstruction reconstruct(const IntrinsicProfile& profile, double s0, double w0, double v0, const Vec3& start,
                           const ReconstructOptions& opts) {
  Assembler assembler(profile, opts);
  const WState initial{s0, w0, v0};
  const double r0 = profile.domain().contains(s0) ? radicand(initial, profile) : -1.0;
  if (opts.restart && r0 > 0.0 && r0 < assembler.guard()) {
    // Already too close to the chart boundary: switch charts at s0.
    WSolution single;
    single.states = {initial};
    single.step = opts.step;
    single.branch = opts.branch;
    const ThetaSeries theta = theta_integral(single, profile);
    const FrenetFrame frame0 = frames_from_w(single, theta, profile).front();
    Reconstruction out = reconstruct_from_frame(profile, s0, frame0, start, opts);
    out.events.insert(out.events.begin(),
                      {PipelineEvent::Kind::Restart, s0, r0, "initial chart switch"});
    ++out.restarts;
    return out;
  }
  const Piece first = solve_piece(profile, s0, w0, v0, opts.direction, opts.branch, assembler.guard(), opts);
  RigidMotion placement;
  placement.translation = start;
  return assembler.run(first, placement);
}

Reconstruction reconstruct_from_frame(const IntrinsicProfile& profile, double s0, const FrenetFrame& frame0,
                                      const Vec3& start, const ReconstructOptions& opts) {
  if (!frame0.is_orthonormal(1e-9)) throw InitialConditionError("initial frame is not orthonormal");
  Assembler assembler(profile, opts);
  const InitialData init = initial_conditions_from_frame(chart_frame(), profile.kappa(s0));
  const Piece first =
      solve_piece(profile, s0, init.w0, init.v0, opts.direction, Branch::Positive, assembler.guard(), opts);
  return assembler.run(first, seam_motion(first.curve, first.curve.anchor, frame0, start));
}

Verification verify_curve(const SampledCurve& curve, const IntrinsicProfile& profile, std::size_t edge) {
  const CurvatureEstimate est = estimate_kappa_tau(curve);
  Verification v;
  for (std::size_t j = 0; j < est.s.size(); ++j) {
    const std::size_t i = est.first + j;
    if (i < edge || i + edge >= curve.size()) continue;
    const double k = profile.kappa(est.s[j]);
    v.max_kappa_rel_error = std::max(v.max_kappa_rel_error, std::abs(est.kappa[j] - k) / k);
    v.max_tau_abs_error = std::max(v.max_tau_abs_error, std::abs(est.tau[j] - profile.tau(est.s[j])));
    ++v.samples;
  }
  v.unit_speed_deviation = unit_speed_deviation(curve);
  return v;
}

}  // namespace curveforge
