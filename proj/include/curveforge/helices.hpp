#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "curveforge/curve.hpp"
#include "curveforge/frenet.hpp"
#include "curveforge/ode.hpp"

namespace curveforge {

enum class HelixKind { General, Slant, Generic };

struct HelixClass {
  HelixKind kind = HelixKind::Generic;
  double m = 0.0;  // tau/kappa for general helices, sigma for slant helices
};

const char* to_string(HelixKind kind);

/// Closed-form general helix with tau/kappa = m:
///   x = c^-1 int cos(c K), y = c^-1 int sin(c K), z = m s / c,
/// c = sqrt(1 + m^2), K = int kappa, sampled on the uniform grid of
/// `domain` starting at its lower end. Frames are attached.
SampledCurve general_helix(double m, const ScalarFn& kappa, Interval domain, double h);

/// Running integral K(s) = int_0^s kappa, tabulated at fixed nodes and
/// completed inside a cell by 5-point Gauss-Legendre, so K is smooth in s.
class KappaIntegral {
 public:
  KappaIntegral(ScalarFn kappa, Interval domain, double cell = 1e-2);

  double operator()(double s) const;
  const Interval& range() const noexcept { return range_; }

 private:
  double segment(double from, double to) const;

  ScalarFn kappa_;
  Interval range_;
  double cell_;
  std::vector<double> nodes_;  // K at i * cell_ for i in [first_, first_ + size)
  long long first_ = 0;
};

/// tau = kappa u / sqrt(1 - u^2), u = m K(s) + A: the torsion whose slant
/// invariant sigma is identically m. Evaluation throws DomainError where
/// |u| >= 1 or outside `domain` (extended to contain 0).
ScalarFn slant_tau(double m, double a, const ScalarFn& kappa, Interval domain);

struct SlantHelix {
  SampledCurve curve;
  bool y_flipped = false;        // closed form was mirrored in y to match the intrinsic data
  double cross_check_rmsd = 0.0;  // Kabsch rmsd against reconstruct(kappa, slant_tau)
};

/// Closed-form slant helix with sigma = m and A = 0, then checked against the
/// scalar-equation reconstruction with the same intrinsic data. If the
/// closed form only matches after mirroring, the mirrored curve is returned
/// and `y_flipped` is set. Throws DomainError when |m K| >= 1 - 1e-9 on the
/// domain, and Error if neither orientation matches.
SlantHelix slant_helix(double m, const ScalarFn& kappa, Interval domain, double h);

struct SigmaSamples {
  std::vector<double> s;
  std::vector<double> sigma;
};

/// sigma = kappa^2 / (kappa^2 + tau^2)^(3/2) * (tau/kappa)' on `samples` >= 201
/// uniform points; (tau/kappa)' by central difference with stencil 1e-5
/// (second-order one-sided at the domain ends).
SigmaSamples sigma_invariant(const IntrinsicProfile& profile, std::size_t samples = 201);

/// sigma from curvature/torsion samples, with (tau/kappa)' by a centered
/// difference across +-`stride` samples.
SigmaSamples sigma_from_estimate(const CurvatureEstimate& est, std::size_t stride);

/// tau/kappa flat -> General(mean); else sigma flat and nonzero -> Slant(mean);
/// else Generic. "Flat" means (max - min) <= tol (1 + |mean|).
HelixClass classify(const IntrinsicProfile& profile, double tol = 1e-6, std::size_t samples = 201);

}  // namespace curveforge
