#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "curveforge/curve.hpp"
#include "curveforge/expr.hpp"

namespace curveforge {

using ScalarFn = std::function<double(double)>;

/// Curvature kappa(s) > 0 and torsion tau(s) on a closed arc-length interval.
///
/// Positivity and finiteness are checked on a dense sample at construction.
/// kappa' is a central difference with stencil 1e-6 * max(1, |s|), clipped to
/// the domain so that kappa is never evaluated outside it.
class IntrinsicProfile {
 public:
  IntrinsicProfile(ScalarFn kappa, ScalarFn tau, Interval domain, std::size_t check_samples = 2001);

  static IntrinsicProfile from_expressions(const expr::Expression& kappa, const expr::Expression& tau,
                                           Interval domain);

  double kappa(double s) const { return kappa_(s); }
  double tau(double s) const { return tau_(s); }
  double kappa_prime(double s) const;

  const ScalarFn& kappa_fn() const noexcept { return kappa_; }
  const ScalarFn& tau_fn() const noexcept { return tau_; }
  const Interval& domain() const noexcept { return domain_; }

  /// Smallest kappa seen by the construction-time sampling.
  double kappa_min() const noexcept { return kappa_min_; }

 private:
  ScalarFn kappa_;
  ScalarFn tau_;
  Interval domain_;
  double kappa_min_ = 0.0;
};

/// w = <t, e3> and v = w' at arc length s.
struct WState {
  double s = 0.0;
  double w = 0.0;
  double v = 0.0;
};

/// 1 - w^2 - (v / kappa(s))^2. Positive exactly inside the admissible ellipse.
double radicand(const WState& state, const IntrinsicProfile& profile);

/// Which root of the square root term is taken. Positive corresponds to
/// <b, e3> > 0.
enum class Branch : int { Positive = 1, Negative = -1 };

struct WDerivative {
  double dw = 0.0;
  double dv = 0.0;
};

/// First-order form of the scalar equation:
///   w' = v,  v' = (kappa'/kappa) v - kappa^2 w + sign * tau * sqrt(kappa^2 (1 - w^2) - v^2).
/// Throws NegativeRadicandError when the square root argument is negative.
WDerivative w_rhs(double s, double w, double v, const IntrinsicProfile& profile,
                  Branch branch = Branch::Positive);

enum class Direction { Forward, Backward, Both };

struct SolveOptions {
  double step = 1e-3;
  double guard = 1e-10;  // smallest radicand a retained state may have
  Direction direction = Direction::Both;
  Branch branch = Branch::Positive;
};

struct Termination {
  enum class Kind { ReachedEnd, DomainExit };

  Kind kind = Kind::ReachedEnd;
  double s = 0.0;         // endpoint reached, or refined exit location s*
  double radicand = 0.0;  // radicand of the state at s
};

/// Samples of the solution on the uniform grid anchored at s0, ascending in s.
struct WSolution {
  std::vector<WState> states;
  double step = 0.0;
  std::size_t anchor = 0;  // index of s0
  Branch branch = Branch::Positive;
  std::optional<Termination> forward;
  std::optional<Termination> backward;

  std::size_t size() const noexcept { return states.size(); }
  bool exited() const noexcept;
};

/// Classical RK4 at fixed step from (s0, w0, v0). Stops at the domain end or
/// at the last grid point whose radicand is still >= opts.guard; in the latter
/// case the crossing is bisected to within step/100 and reported as
/// DomainExit. Throws InitialConditionError when (w0, v0) is not strictly
/// inside the ellipse at s0, or s0 lies outside the domain.
WSolution solve_w(const IntrinsicProfile& profile, double s0, double w0, double v0,
                  const SolveOptions& opts = {});

}  // namespace curveforge
