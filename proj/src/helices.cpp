#include "curveforge/helices.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "curveforge/errors.hpp"
#include "curveforge/grid.hpp"
#include "curveforge/reconstruct.hpp"

namespace curveforge {

namespace {

// Largest Kabsch rmsd at which the closed form is accepted as the same
// curve as the reconstruction.
constexpr double kSlantMatchRmsd = 1e-4;

struct Flatness {
  double mean = 0.0;
  double spread = 0.0;
};

Flatness flatness(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  Flatness f;
  f.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  f.spread = *hi - *lo;
  return f;
}

bool is_flat(const Flatness& f, double tol) { return f.spread <= tol * (1.0 + std::abs(f.mean)); }

std::vector<double> sample_points(Interval domain, std::size_t n) {
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = i + 1 == n ? domain.hi
                      : domain.lo + domain.length() * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return s;
}

SampledCurve mirror_y(const SampledCurve& c) {
  SampledCurve out = c;
  for (auto& p : out.points) p.y() = -p.y();
  for (auto& f : out.frames) {
    f.t.y() = -f.t.y();
    f.n.y() = -f.n.y();
    f.b = f.t.cross(f.n);
  }
  return out;
}

}  // namespace

const char* to_string(HelixKind kind) {
  switch (kind) {
    case HelixKind::General: return "general-helix";
    case HelixKind::Slant: return "slant-helix";
    case HelixKind::Generic: return "generic";
  }
  return "?";
}

SampledCurve general_helix(double m, const ScalarFn& kappa, Interval domain, double h) {
  const Grid grid = uniform_grid(domain, domain.lo, h);
  const double c = std::sqrt(1.0 + m * m);

  std::vector<double> k(grid.s.size());
  for (std::size_t i = 0; i < k.size(); ++i) {
    k[i] = kappa(grid.s[i]);
    if (!(k[i] > 0.0) || !std::isfinite(k[i])) throw ProfileError("curvature must be positive on the domain");
  }
  const std::vector<double> big_k = cumulative_trapezoid(grid.s, k, 0);

  SampledCurve curve;
  curve.s = grid.s;
  curve.step = h;
  curve.anchor = 0;
  std::vector<Vec3> tangent(k.size());
  curve.frames.resize(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) {
    const double angle = c * big_k[i];
    tangent[i] = Vec3(std::cos(angle) / c, std::sin(angle) / c, m / c);
    curve.frames[i] = orthonormalize(tangent[i], Vec3(-std::sin(angle), std::cos(angle), 0.0));
  }
  curve.points = cumulative_trapezoid(curve.s, tangent, 0);
  for (std::size_t i = 0; i < k.size(); ++i) curve.points[i].z() = m * curve.s[i] / c;
  return curve;
}

KappaIntegral::KappaIntegral(ScalarFn kappa, Interval domain, double cell)
    : kappa_(std::move(kappa)),
      range_{std::min(domain.lo, 0.0), std::max(domain.hi, 0.0)},
      cell_(cell) {
  first_ = static_cast<long long>(std::trunc(range_.lo / cell_));
  const auto last = static_cast<long long>(std::trunc(range_.hi / cell_));
  nodes_.assign(static_cast<std::size_t>(last - first_ + 1), 0.0);
  const auto at = [&](long long j) -> double& { return nodes_[static_cast<std::size_t>(j - first_)]; };
  for (long long j = 1; j <= last; ++j) {
    at(j) = at(j - 1) + segment(static_cast<double>(j - 1) * cell_, static_cast<double>(j) * cell_);
  }
  for (long long j = -1; j >= first_; --j) {
    at(j) = at(j + 1) - segment(static_cast<double>(j) * cell_, static_cast<double>(j + 1) * cell_);
  }
}

double KappaIntegral::segment(double from, double to) const {
  static constexpr std::array<double, 5> x{0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                                           0.9061798459386640};
  static constexpr std::array<double, 5> w{0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                           0.2369268850561891, 0.2369268850561891};
  const double mid = 0.5 * (from + to);
  const double half = 0.5 * (to - from);
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += w[i] * kappa_(mid + half * x[i]);
  return half * sum;
}

double KappaIntegral::operator()(double s) const {
  if (!range_.contains(s)) throw DomainError("kappa-integral", s, "arc length outside the tabulated range");
  const auto j = static_cast<long long>(std::trunc(s / cell_));
  const double node = static_cast<double>(j) * cell_;
  return nodes_[static_cast<std::size_t>(j - first_)] + segment(node, s);
}

ScalarFn slant_tau(double m, double a, const ScalarFn& kappa, Interval domain) {
  auto integral = std::make_shared<const KappaIntegral>(kappa, domain);
  return [integral, m, a, kappa](double s) {
    const double u = m * (*integral)(s) + a;
    if (!(std::abs(u) < 1.0)) {
      throw DomainError("slant_tau", u, "slant torsion undefined: |m K(s) + A| = " + std::to_string(std::abs(u)) +
                                            " >= 1 at s=" + std::to_string(s));
    }
    return kappa(s) * u / std::sqrt(1.0 - u * u);
  };
}

SlantHelix slant_helix(double m, const ScalarFn& kappa, Interval domain, double h) {
  if (m == 0.0 || !std::isfinite(m)) throw DomainError("slant_helix", m, "slant helix needs a finite m != 0");
  const KappaIntegral big_k(kappa, domain);
  const Grid grid = uniform_grid(domain, domain.lo, h);
  const double c = std::sqrt(1.0 + m * m);

  SampledCurve curve;
  curve.s = grid.s;
  curve.step = h;
  curve.anchor = 0;
  std::vector<Vec3> tangent(grid.s.size());
  curve.frames.resize(grid.s.size());
  for (std::size_t i = 0; i < grid.s.size(); ++i) {
    const double k = big_k(grid.s[i]);
    const double u = m * k;
    if (!(std::abs(u) < 1.0 - 1e-9)) {
      throw DomainError("slant_helix", u, "|m K(s)| reaches 1 at s=" + std::to_string(grid.s[i]));
    }
    const double phase = c * std::acos(u) / m;
    const double root = std::sqrt(1.0 - u * u);
    const double skew = m / c * u;
    tangent[i] = Vec3(root * std::cos(phase) - skew * std::sin(phase), -root * std::sin(phase) - skew * std::cos(phase),
                      std::abs(m) * k / c);
    const Vec3 normal = Vec3(std::sin(phase), std::cos(phase), std::abs(m)) / c;
    curve.frames[i] = orthonormalize(tangent[i], normal);
  }
  curve.points = cumulative_trapezoid(curve.s, tangent, 0);

  // The intrinsic data decides the handedness.
  const IntrinsicProfile profile(kappa, slant_tau(m, 0.0, kappa, domain), domain);
  ReconstructOptions opts;
  opts.step = h;
  opts.direction = Direction::Forward;
  opts.restart = true;
  const Reconstruction recon = reconstruct_from_frame(profile, domain.lo, curve.frames[0], curve.points[0], opts);
  if (recon.truncated || recon.curve.size() != curve.size()) {
    throw Error(ErrorCategory::Numerical, "slant-helix", "reconstruction cross-check did not cover the domain");
  }

  SlantHelix out;
  out.cross_check_rmsd = kabsch_align(curve, recon.curve).rmsd;
  if (out.cross_check_rmsd <= kSlantMatchRmsd) {
    out.curve = std::move(curve);
    return out;
  }
  SampledCurve mirrored = mirror_y(curve);
  const double rmsd = kabsch_align(mirrored, recon.curve).rmsd;
  if (rmsd > kSlantMatchRmsd) {
    throw Error(ErrorCategory::Numerical, "slant-helix",
                "closed form does not match the reconstruction in either orientation (rmsd " +
                    std::to_string(std::min(rmsd, out.cross_check_rmsd)) + ")");
  }
  out.curve = std::move(mirrored);
  out.y_flipped = true;
  out.cross_check_rmsd = rmsd;
  return out;
}

SigmaSamples sigma_invariant(const IntrinsicProfile& profile, std::size_t samples) {
  samples = std::max<std::size_t>(samples, 201);
  const Interval dom = profile.domain();
  const auto ratio = [&](double s) { return profile.tau(s) / profile.kappa(s); };

  SigmaSamples out;
  out.s = sample_points(dom, samples);
  out.sigma.reserve(samples);
  constexpr double d = 1e-5;
  for (double s : out.s) {
    // Second-order one-sided stencils where the centered one would leave the domain.
    double slope;
    if (s - d < dom.lo) {
      slope = (-3.0 * ratio(s) + 4.0 * ratio(s + d) - ratio(s + 2.0 * d)) / (2.0 * d);
    } else if (s + d > dom.hi) {
      slope = (3.0 * ratio(s) - 4.0 * ratio(s - d) + ratio(s - 2.0 * d)) / (2.0 * d);
    } else {
      slope = (ratio(s + d) - ratio(s - d)) / (2.0 * d);
    }
    const double k = profile.kappa(s);
    const double t = profile.tau(s);
    out.sigma.push_back(k * k / std::pow(k * k + t * t, 1.5) * slope);
  }
  return out;
}

SigmaSamples sigma_from_estimate(const CurvatureEstimate& est, std::size_t stride) {
  SigmaSamples out;
  stride = std::max<std::size_t>(stride, 1);
  for (std::size_t j = stride; j + stride < est.s.size(); ++j) {
    const double ahead = est.tau[j + stride] / est.kappa[j + stride];
    const double behind = est.tau[j - stride] / est.kappa[j - stride];
    const double slope = (ahead - behind) / (est.s[j + stride] - est.s[j - stride]);
    const double k = est.kappa[j];
    const double t = est.tau[j];
    out.s.push_back(est.s[j]);
    out.sigma.push_back(k * k / std::pow(k * k + t * t, 1.5) * slope);
  }
  return out;
}

HelixClass classify(const IntrinsicProfile& profile, double tol, std::size_t samples) {
  const std::vector<double> s = sample_points(profile.domain(), std::max<std::size_t>(samples, 2));
  std::vector<double> ratio;
  ratio.reserve(s.size());
  for (double x : s) ratio.push_back(profile.tau(x) / profile.kappa(x));

  const Flatness general = flatness(ratio);
  if (is_flat(general, tol)) return {HelixKind::General, general.mean};

  const Flatness slant = flatness(sigma_invariant(profile, samples).sigma);
  if (is_flat(slant, tol) && std::abs(slant.mean) > tol) return {HelixKind::Slant, slant.mean};
  return {HelixKind::Generic, 0.0};
}

}  // namespace curveforge
