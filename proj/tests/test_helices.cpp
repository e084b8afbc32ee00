#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "curveforge/errors.hpp"
#include "curveforge/frenet.hpp"
#include "curveforge/helices.hpp"
#include "curveforge/reconstruct.hpp"
#include "support.hpp"

using namespace curveforge;
using curveforge::testing::constant;
using curveforge::testing::constant_profile;

namespace {

const ScalarFn kWavy = [](double s) { return 1 + 0.3 * std::sin(s); };

double spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

}  // namespace

TEST_CASE("general_helix: m = 0 is the planar circle") {
  const auto c = general_helix(0.0, constant(1.0), {0, 2 * std::numbers::pi}, 1e-3);
  for (std::size_t i = 0; i < c.size(); ++i) {
    CHECK(c.points[i].z() == 0.0);
    CHECK((c.points[i] - Vec3(std::sin(c.s[i]), 1 - std::cos(c.s[i]), 0)).norm() <= 1e-6);
  }
}

TEST_CASE("general_helix: m = 1, kappa = 1") {
  const auto c = general_helix(1.0, constant(1.0), {0, 4}, 1e-3);
  const double slope = 1 / std::sqrt(2.0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    CHECK(std::abs(c.frames[i].t.z() - slope) <= 1e-6);
    CHECK(std::abs(c.points[i].z() - c.points[0].z() - slope * (c.s[i] - c.s[0])) <= 1e-9);
  }
  const auto est = estimate_kappa_tau(c);
  for (std::size_t j = 0; j < est.s.size(); ++j) {
    CHECK(std::abs(est.kappa[j] - 1) <= 1e-3);
    CHECK(std::abs(est.tau[j] - 1) <= 1e-3);
  }
  CHECK(unit_speed_deviation(c) <= 5e-3);
}

TEST_CASE("property: general helices keep a constant angle with e3") {
  for (double m : {-3.0, -1.0, -0.25, 0.25, 1.0, 3.0}) {
    for (const ScalarFn& kappa : {constant(1.0), kWavy}) {
      const auto c = general_helix(m, kappa, {0, 2}, 1e-3);
      std::vector<double> angle;
      for (const auto& f : c.frames) angle.push_back(f.t.z());
      CAPTURE(m);
      CHECK(spread(angle) <= 1e-6);
      CHECK(angle.front() == doctest::Approx(m / std::sqrt(1 + m * m)).epsilon(1e-12));
      const auto fd = estimate_frames(c);
      for (const auto& f : fd) CHECK(std::abs(f.t.z() - angle.front()) <= 1e-6);
    }
  }
}

TEST_CASE("slant_tau examples") {
  const Interval dom{-1.9, 1.9};
  const auto tau = slant_tau(0.5, 0.0, constant(1.0), dom);
  CHECK(tau(1.0) == doctest::Approx(std::sqrt(0.25 / 0.75)).epsilon(1e-12));
  CHECK(tau(-1.0) == doctest::Approx(-std::sqrt(0.25 / 0.75)).epsilon(1e-12));
  CHECK(tau(0.0) == 0.0);
  CHECK(slant_tau(-2.0, 0.0, kWavy, dom)(0.0) == 0.0);
  const auto wide = slant_tau(0.5, 0.0, constant(1.0), {0, 3});
  CHECK_THROWS_AS(wide(2.0), DomainError);
  CHECK_THROWS_AS(wide(2.5), DomainError);
  CHECK_THROWS_AS(tau(5.0), DomainError);
  // A shifts the admissible window.
  const auto shifted = slant_tau(0.5, 0.5, constant(1.0), {-2, 2});
  CHECK(shifted(-1.0) == 0.0);
  CHECK_THROWS_AS(shifted(1.0), DomainError);
}

TEST_CASE("kappa integral against closed forms") {
  const KappaIntegral big_k(kWavy, {-2, 3});
  for (double s : {-2.0, -1.234, 0.0, 0.005, 0.5, 2.999, 3.0})
    CHECK(big_k(s) == doctest::Approx(s + 0.3 * (1 - std::cos(s))).epsilon(1e-13).scale(1.0));
  CHECK_THROWS_AS(big_k(3.5), DomainError);
}

TEST_CASE("slant_helix: m = 0.5, kappa = 1") {
  const double m = 0.5;
  const auto sh = slant_helix(m, constant(1.0), {-1.9, 1.9}, 1e-3);
  CHECK(sh.cross_check_rmsd <= 1e-4);

  const double target = std::abs(m) / std::sqrt(1 + m * m);
  CHECK(target == doctest::Approx(0.44721).epsilon(1e-5));
  for (const auto& f : estimate_frames(sh.curve)) CHECK(std::abs(f.n.z() - target) <= 1e-3);
  for (const auto& f : sh.curve.frames) CHECK(std::abs(f.n.z() - target) <= 1e-9);

  const auto sig = sigma_from_estimate(estimate_kappa_tau(sh.curve), 1);
  for (std::size_t j = 5; j + 5 < sig.sigma.size(); ++j) CHECK(std::abs(sig.sigma[j] - m) <= 1e-3);

  const IntrinsicProfile p(constant(1.0), slant_tau(m, 0, constant(1.0), {-1.9, 1.9}), {-1.9, 1.9});
  const auto v = verify_curve(sh.curve, p);
  CHECK(v.max_kappa_rel_error <= 1e-3);
  CHECK(v.max_tau_abs_error <= 1e-3);
}

TEST_CASE("property: slant helices keep a constant normal angle") {
  for (double m : {-0.5, -0.3, 0.3, 0.5}) {
    for (const ScalarFn& kappa : {constant(1.0), kWavy}) {
      CAPTURE(m);
      const auto sh = slant_helix(m, kappa, {-1.2, 1.2}, 1e-3);
      CHECK(sh.cross_check_rmsd <= 1e-4);
      const double target = std::abs(m) / std::sqrt(1 + m * m);
      std::vector<double> nz;
      for (const auto& f : estimate_frames(sh.curve)) nz.push_back(f.n.z());
      CHECK(spread(nz) <= 1e-3);
      for (double z : nz) CHECK(std::abs(z - target) <= 1e-3);
    }
  }
}

TEST_CASE("slant_helix: chart and parameter checks") {
  CHECK_THROWS_AS(slant_helix(0.0, constant(1.0), {-1, 1}, 1e-3), DomainError);
  CHECK_THROWS_AS(slant_helix(0.5, constant(1.0), {0, 2.5}, 1e-3), DomainError);
}

TEST_CASE("sigma_invariant examples") {
  const auto zero = sigma_invariant(constant_profile(1, 1, {0, 2}));
  CHECK(zero.s.size() == 201);
  for (double x : zero.sigma) CHECK(x == 0.0);

  const Interval dom{-1.9, 1.9};
  const IntrinsicProfile slant(constant(1.0), slant_tau(0.5, 0, constant(1.0), dom), dom);
  for (double x : sigma_invariant(slant).sigma) CHECK(std::abs(x - 0.5) <= 1e-6);

  const IntrinsicProfile linear(constant(1.0), [](double s) { return s; }, {0, 2});
  const auto lin = sigma_invariant(linear, 401);
  for (std::size_t i = 0; i < lin.s.size(); ++i)
    CHECK(lin.sigma[i] == doctest::Approx(1 / std::pow(1 + lin.s[i] * lin.s[i], 1.5)).epsilon(1e-8));
  CHECK(lin.sigma[200] == doctest::Approx(0.35355).epsilon(1e-5));
}

TEST_CASE("property: sigma vanishes on general helix profiles") {
  for (double m : {-3.0, -0.25, 1.0}) {
    const IntrinsicProfile p(kWavy, [m](double s) { return m * kWavy(s); }, {0, 2});
    for (double x : sigma_invariant(p).sigma) CHECK(std::abs(x) <= 1e-9);
  }
}

TEST_CASE("classify examples") {
  const auto g = classify(constant_profile(1, 1, {0, 1}));
  CHECK(g.kind == HelixKind::General);
  CHECK(g.m == doctest::Approx(1.0).epsilon(1e-6));

  const Interval dom{0, 1};
  const auto s = classify(IntrinsicProfile(constant(1.0), slant_tau(0.5, 0, constant(1.0), dom), dom));
  CHECK(s.kind == HelixKind::Slant);
  CHECK(std::abs(s.m - 0.5) <= 1e-4);

  const auto n = classify(IntrinsicProfile(constant(1.0), [](double x) { return x; }, {0, 2}));
  CHECK(n.kind == HelixKind::Generic);
  CHECK(std::string(to_string(n.kind)) == "generic");
  CHECK(std::string(to_string(HelixKind::General)) == "general-helix");
  CHECK(std::string(to_string(HelixKind::Slant)) == "slant-helix");
}

TEST_CASE("property: classify recognizes general helices") {
  for (double m : {-3.0, -1.0, -0.25, 0.25, 1.0, 3.0}) {
    for (const ScalarFn& kappa : {constant(1.0), kWavy}) {
      const auto c = classify(IntrinsicProfile(kappa, [=](double s) { return m * kappa(s); }, {0, 2}));
      CAPTURE(m);
      CHECK(c.kind == HelixKind::General);
      CHECK(std::abs(c.m - m) <= 1e-6);
    }
  }
}
