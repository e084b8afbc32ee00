#include "curveforge/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "curveforge/errors.hpp"
#include "curveforge/grid.hpp"

namespace curveforge {

IntrinsicProfile::IntrinsicProfile(ScalarFn kappa, ScalarFn tau, Interval domain, std::size_t check_samples)
    : kappa_(std::move(kappa)), tau_(std::move(tau)), domain_(domain) {
  if (!kappa_ || !tau_) throw ProfileError("curvature and torsion must both be given");
  if (!(std::isfinite(domain_.lo) && std::isfinite(domain_.hi) && domain_.lo < domain_.hi)) {
    throw ProfileError("domain must be a finite interval with smin < smax");
  }
  check_samples = std::max<std::size_t>(check_samples, 2);
  kappa_min_ = HUGE_VAL;
  for (std::size_t i = 0; i < check_samples; ++i) {
    const double s = i + 1 == check_samples
                         ? domain_.hi
                         : domain_.lo + domain_.length() * static_cast<double>(i) /
                                            static_cast<double>(check_samples - 1);
    const double k = kappa_(s);
    const double t = tau_(s);
    if (!std::isfinite(k) || !(k > 0.0)) {
      throw ProfileError("curvature must be positive and finite; kappa(" + std::to_string(s) +
                         ") = " + std::to_string(k));
    }
    if (!std::isfinite(t)) throw ProfileError("torsion is not finite at s=" + std::to_string(s));
    kappa_min_ = std::min(kappa_min_, k);
  }
}

IntrinsicProfile IntrinsicProfile::from_expressions(const expr::Expression& kappa,
                                                    const expr::Expression& tau, Interval domain) {
  return IntrinsicProfile([kappa](double s) { return expr::eval(kappa, s); },
                          [tau](double s) { return expr::eval(tau, s); }, domain);
}

double IntrinsicProfile::kappa_prime(double s) const {
  const double delta = 1e-6 * std::max(1.0, std::abs(s));
  const double lo = std::max(domain_.lo, s - delta);
  const double hi = std::min(domain_.hi, s + delta);
  return (kappa_(hi) - kappa_(lo)) / (hi - lo);
}

bool WSolution::exited() const noexcept {
  const auto is_exit = [](const std::optional<Termination>& t) {
    return t && t->kind == Termination::Kind::DomainExit;
  };
  return is_exit(forward) || is_exit(backward);
}

double radicand(const WState& state, const IntrinsicProfile& profile) {
  const double q = state.v / profile.kappa(state.s);
  return 1.0 - state.w * state.w - q * q;
}

namespace {

// Vector field, or nothing when the square root argument is negative.
std::optional<WDerivative> field(double s, double w, double v, const IntrinsicProfile& profile,
                                 Branch branch) {
  const double k = profile.kappa(s);
  const double q = k * k * (1.0 - w * w) - v * v;
  if (!(q >= 0.0)) return std::nullopt;
  const double sign = static_cast<double>(static_cast<int>(branch));
  WDerivative d;
  d.dw = v;
  d.dv = profile.kappa_prime(s) / k * v - k * k * w + sign * profile.tau(s) * std::sqrt(q);
  return d;
}

// One RK4 step of signed length ds; fails when a stage leaves the ellipse or
// the result falls below the guard.
std::optional<WState> rk4_try(const WState& y, double ds, const IntrinsicProfile& profile,
                              const SolveOptions& opts) {
  const double half = 0.5 * ds;
  const auto k1 = field(y.s, y.w, y.v, profile, opts.branch);
  if (!k1) return std::nullopt;
  const auto k2 = field(y.s + half, y.w + half * k1->dw, y.v + half * k1->dv, profile, opts.branch);
  if (!k2) return std::nullopt;
  const auto k3 = field(y.s + half, y.w + half * k2->dw, y.v + half * k2->dv, profile, opts.branch);
  if (!k3) return std::nullopt;
  const auto k4 = field(y.s + ds, y.w + ds * k3->dw, y.v + ds * k3->dv, profile, opts.branch);
  if (!k4) return std::nullopt;

  WState next;
  next.s = y.s + ds;
  next.w = y.w + ds / 6.0 * (k1->dw + 2.0 * k2->dw + 2.0 * k3->dw + k4->dw);
  next.v = y.v + ds / 6.0 * (k1->dv + 2.0 * k2->dv + 2.0 * k3->dv + k4->dv);
  if (!std::isfinite(next.w) || !std::isfinite(next.v)) return std::nullopt;
  if (!(radicand(next, profile) >= opts.guard)) return std::nullopt;
  return next;
}

// Marches from grid[anchor] towards grid.front() (dir < 0) or grid.back()
// (dir > 0), appending accepted states in marching order.
Termination march(const IntrinsicProfile& profile, const std::vector<double>& grid, std::size_t anchor,
                  int dir, const WState& start, const SolveOptions& opts, std::vector<WState>& out) {
  WState y = start;
  std::size_t idx = anchor;
  for (;;) {
    const bool at_end = dir > 0 ? idx + 1 >= grid.size() : idx == 0;
    if (at_end) return {Termination::Kind::ReachedEnd, y.s, radicand(y, profile)};

    const std::size_t next_idx = dir > 0 ? idx + 1 : idx - 1;
    const double ds = grid[next_idx] - grid[idx];
    if (auto next = rk4_try(y, ds, profile, opts)) {
      next->s = grid[next_idx];
      out.push_back(*next);
      y = *next;
      idx = next_idx;
      continue;
    }

    // Bisect the admissible step length to locate the exit.
    double lo = 0.0;
    double hi = std::abs(ds);
    WState refined = y;
    while (hi - lo > opts.step / 100.0) {
      const double mid = 0.5 * (lo + hi);
      if (auto trial = rk4_try(y, dir * mid, profile, opts)) {
        lo = mid;
        refined = *trial;
      } else {
        hi = mid;
      }
    }
    return {Termination::Kind::DomainExit, refined.s, radicand(refined, profile)};
  }
}

}  // namespace

WDerivative w_rhs(double s, double w, double v, const IntrinsicProfile& profile, Branch branch) {
  if (auto d = field(s, w, v, profile, branch)) return *d;
  const double k = profile.kappa(s);
  throw NegativeRadicandError(s, k * k * (1.0 - w * w) - v * v);
}

WSolution solve_w(const IntrinsicProfile& profile, double s0, double w0, double v0,
                  const SolveOptions& opts) {
  if (!(opts.step > 0.0)) throw InitialConditionError("step must be positive");
  if (!profile.domain().contains(s0)) {
    throw InitialConditionError("s0=" + std::to_string(s0) + " lies outside the profile domain");
  }
  const WState start{s0, w0, v0};
  const double r0 = radicand(start, profile);
  if (!(r0 > 0.0) || !std::isfinite(w0) || !std::isfinite(v0)) {
    throw InitialConditionError("initial data (w0, v0) = (" + std::to_string(w0) + ", " +
                                std::to_string(v0) + ") is not strictly inside the admissible ellipse");
  }
  if (r0 < opts.guard) {
    throw InitialConditionError("initial radicand " + std::to_string(r0) + " is below the guard threshold");
  }

  const Grid grid = uniform_grid(profile.domain(), s0, opts.step);

  std::vector<WState> backward;
  std::vector<WState> forward;
  WSolution sol;
  sol.step = opts.step;
  sol.branch = opts.branch;
  if (opts.direction != Direction::Forward) {
    sol.backward = march(profile, grid.s, grid.anchor, -1, start, opts, backward);
  }
  if (opts.direction != Direction::Backward) {
    sol.forward = march(profile, grid.s, grid.anchor, +1, start, opts, forward);
  }

  sol.states.reserve(backward.size() + 1 + forward.size());
  sol.states.assign(backward.rbegin(), backward.rend());
  sol.anchor = sol.states.size();
  sol.states.push_back(start);
  sol.states.insert(sol.states.end(), forward.begin(), forward.end());
  return sol;
}

}  // namespace curveforge
