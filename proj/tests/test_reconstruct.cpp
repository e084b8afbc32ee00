#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <future>
#include <numbers>
#include <random>

#include "curveforge/errors.hpp"
#include "curveforge/frenet.hpp"
#include "curveforge/grid.hpp"
#include "curveforge/reconstruct.hpp"
#include "support.hpp"

using namespace curveforge;
using curveforge::testing::constant_profile;

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

// Hand-made scalar solution with v = 0 on a uniform grid.
WSolution flat_solution(double w, double lo, double hi, double h) {
  WSolution sol;
  sol.step = h;
  const auto n = static_cast<std::size_t>(std::llround((hi - lo) / h));
  for (std::size_t i = 0; i <= n; ++i) sol.states.push_back({lo + static_cast<double>(i) * h, w, 0.0});
  return sol;
}

double max_chord_excess(const SampledCurve& c) {
  double worst = 0.0;
  for (std::size_t i = 1; i < c.size(); ++i) {
    worst = std::max(worst, (c.points[i] - c.points[i - 1]).norm() - (c.s[i] - c.s[i - 1]));
  }
  return worst;
}

}  // namespace

TEST_CASE("uniform grid layout") {
  const auto g = uniform_grid({0.0, 1.0}, 0.35, 0.1);
  CHECK(g.s.front() == 0.0);
  CHECK(g.s.back() == 1.0);
  CHECK(g.s[g.anchor] == 0.35);
  CHECK(g.s[1] == doctest::Approx(0.05));
  CHECK(g.s.size() == 12);

  // A lattice point within rounding of an endpoint lands on it exactly.
  const auto snapped = uniform_grid({0.0, 6.28}, 0.1 + 1e-13, 1e-3);
  CHECK(snapped.s.back() == 6.28);
  CHECK(snapped.s[snapped.s.size() - 2] < 6.28 - 0.5e-3);

  const auto edge = uniform_grid({-1.0, 1.0}, 1.0, 0.5);
  CHECK(edge.anchor == edge.s.size() - 1);
  CHECK(edge.s.front() == -1.0);
}

TEST_CASE("cumulative trapezoid") {
  const std::vector<double> s{0.0, 0.5, 1.0, 1.25, 2.0};
  std::vector<double> f;
  for (double x : s) f.push_back(3 * x - 1);
  const auto mid = cumulative_trapezoid(s, f, 2);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(mid[i] == doctest::Approx(1.5 * s[i] * s[i] - s[i] - 0.5));
  CHECK(mid[2] == 0.0);

  std::vector<Vec3> v;
  for (double x : s) v.emplace_back(1.0, x, -x);
  const auto p = cumulative_trapezoid(s, v, 0);
  CHECK(p.back().isApprox(Vec3(2.0, 2.0, -2.0)));
}

TEST_CASE("theta_integral examples") {
  const auto p = constant_profile(1, 0, {0, 3});
  const auto flat = theta_integral(flat_solution(0.0, 0, 3, 1e-3), p);
  for (std::size_t i = 0; i < flat.s.size(); i += 100) CHECK(flat.theta[i] == doctest::Approx(flat.s[i]).epsilon(1e-12));

  const auto tilted = theta_integral(flat_solution(1 / std::sqrt(2.0), 0, 3, 1e-3), p);
  for (std::size_t i = 0; i < tilted.s.size(); i += 100)
    CHECK(tilted.theta[i] == doctest::Approx(std::sqrt(2.0) * tilted.s[i]).epsilon(1e-12));

  auto pole = flat_solution(0.0, 0, 3, 1e-3);
  pole.states[7].w = 1.0;
  CHECK_THROWS_AS(theta_integral(pole, p), PoleError);
}

TEST_CASE("theta_integral is zero at the anchor") {
  auto sol = flat_solution(0.0, 0, 2, 1e-2);
  sol.anchor = 50;
  const auto th = theta_integral(sol, constant_profile(1, 0, {0, 2}));
  CHECK(th.theta[50] == 0.0);
  CHECK(th.theta.front() == doctest::Approx(-0.5));
}

TEST_CASE("position: planar circle") {
  const auto p = constant_profile(1, 0, {0, kTwoPi});
  const auto c = position(solve_w(p, 0.0, 0.0, 0.0), p, Vec3::Zero());
  CHECK(c.points.front() == Vec3::Zero());
  double err = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i)
    err = std::max(err, (c.points[i] - Vec3(std::sin(c.s[i]), 1 - std::cos(c.s[i]), 0)).norm());
  CHECK(err <= 1e-6);
}

TEST_CASE("position: circular helix") {
  const auto p = constant_profile(1, 1, {1, 5});
  const auto c = position(solve_w(p, 1.0, 1 / std::sqrt(2.0), 0.0), p, Vec3(0, 0, 2));
  CHECK(c.points.front() == Vec3(0, 0, 2));
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(std::abs(c.points[i].z() - 2 - (c.s[i] - 1) / std::sqrt(2.0)) <= 1e-6);
}

TEST_CASE("position: start is imposed exactly at the anchor") {
  const IntrinsicProfile p([](double s) { return 2 + std::cos(s); }, [](double s) { return 0.3 * s; }, {-1, 1});
  const Vec3 start(0.1, -7.25, 1e3);
  const auto c = position(solve_w(p, 0.37, 0.2, -0.1), p, start);
  CHECK(c.points[c.anchor] == start);
}

TEST_CASE("frames_from_w examples") {
  const auto p = constant_profile(1, 0, {0, 3});
  const auto sol = flat_solution(0.0, 0, 3, 1e-3);
  const auto frames = frames_from_w(sol, theta_integral(sol, p), p);
  for (std::size_t i = 0; i < frames.size(); i += 100) {
    const double s = sol.states[i].s;
    CHECK((frames[i].t - Vec3(std::cos(s), std::sin(s), 0)).norm() <= 1e-12);
    CHECK((frames[i].b - Vec3(0, 0, 1)).norm() <= 1e-12);
  }

  const auto hp = constant_profile(1, 1, {0, 3});
  const auto helix = solve_w(hp, 0.0, 1 / std::sqrt(2.0), 0.0);
  const auto hf = frames_from_w(helix, theta_integral(helix, hp), hp);
  for (const auto& f : hf) {
    CHECK(std::abs(f.t.z() - 1 / std::sqrt(2.0)) <= 1e-8);
    CHECK(f.is_orthonormal(1e-9));
    CHECK(f.matrix().determinant() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("reconstruct: circle closes and matches the oracle") {
  const auto p = constant_profile(1, 0, {0, kTwoPi});
  const auto r = reconstruct(p, 0.0, 0.0, 0.0, Vec3::Zero());
  CHECK(r.events.empty());
  CHECK((r.curve.points.back() - r.curve.points.front()).norm() <= 1e-4);
  const auto oracle = frenet_integrate(p, r.curve.frames.front(), Vec3::Zero(), 0.0, 1e-3);
  CHECK(rms_distance(r.curve.points, oracle.points) <= 1e-6);
}

TEST_CASE("reconstruct: helix curvature and torsion") {
  const auto p = constant_profile(1, 1, {0, 4});
  const auto r = reconstruct(p, 2.0, 0.3, 0.0, Vec3::Zero());
  REQUIRE_FALSE(r.truncated);
  const auto est = estimate_kappa_tau(r.curve);
  for (std::size_t j = 0; j < est.s.size(); ++j) {
    CHECK(std::abs(est.kappa[j] - 1) <= 1e-3);
    CHECK(std::abs(est.tau[j] - 1) <= 1e-3);
  }
}

TEST_CASE("reconstruct: restart also rescues a near-pole stretch") {
  // From (w, v) = (0.1, 0.3) at s = 2 the tangent swings to within 3 degrees
  // of e3 near s = 4, where the azimuth turns fast and the single-chart
  // quadrature loses accuracy. Switching charts keeps the estimate tight.
  const auto p = constant_profile(1, 1, {0, 4});
  ReconstructOptions o;
  o.restart = true;
  const auto r = reconstruct(p, 2.0, 0.1, 0.3, Vec3::Zero(), o);
  CHECK(r.restarts >= 1);
  const auto v = verify_curve(r.curve, p, 3);
  CHECK(v.max_kappa_rel_error <= 1e-3);
  CHECK(v.max_tau_abs_error <= 1e-3);
}

TEST_CASE("reconstruct: exit without restart truncates") {
  const auto p = constant_profile(1, 5, {0, kTwoPi});
  const auto r = reconstruct(p, 0.0, 0.5, 0.0, Vec3::Zero());
  CHECK(r.truncated);
  REQUIRE(r.events.size() == 1);
  CHECK(r.events[0].kind == PipelineEvent::Kind::DomainExit);
  CHECK(r.events[0].s == doctest::Approx(0.342).epsilon(2e-3));
  CHECK(r.curve.s.back() < 0.35);
  for (const auto& q : r.curve.points) CHECK(testing::finite(q));
}

TEST_CASE("reconstruct: restarts stitch a continuous curve") {
  const auto p = constant_profile(1, 5, {0, kTwoPi});
  ReconstructOptions o;
  o.restart = true;
  const auto r = reconstruct(p, 0.0, 0.5, 0.0, Vec3::Zero(), o);
  CHECK_FALSE(r.truncated);
  CHECK(r.restarts > 0);
  CHECK(r.curve.s.back() == kTwoPi);
  int restarts = 0;
  for (const auto& e : r.events) restarts += e.kind == PipelineEvent::Kind::Restart;
  CHECK(restarts == r.restarts);

  // No jumps anywhere: successive samples are never further apart than their arc length.
  CHECK(max_chord_excess(r.curve) <= 1e-9);
  for (const auto& e : r.events) {
    if (e.kind != PipelineEvent::Kind::Restart) continue;
    const auto it = std::lower_bound(r.curve.s.begin(), r.curve.s.end(), e.s);
    REQUIRE(it != r.curve.s.end());
    const auto i = static_cast<std::size_t>(it - r.curve.s.begin());
    REQUIRE(i > 0);
    REQUIRE(i + 1 < r.curve.size());
    // Centered tangent across the seam matches the frames on both sides.
    const Vec3 fd = (r.curve.points[i + 1] - r.curve.points[i - 1]) / (r.curve.s[i + 1] - r.curve.s[i - 1]);
    CHECK((fd - r.curve.frames[i].t).norm() <= 5e-3);
  }

  const auto oracle = frenet_integrate(p, r.curve.frames.front(), Vec3::Zero(), 0.0, 1e-3);
  CHECK(rms_distance(r.curve.points, oracle.points) <= 1e-5);
}

TEST_CASE("reconstruct: restart limit") {
  const auto p = constant_profile(1, 5, {0, kTwoPi});
  ReconstructOptions o;
  o.restart = true;
  o.max_restarts = 2;
  CHECK_THROWS_AS(reconstruct(p, 0.0, 0.5, 0.0, Vec3::Zero(), o), RestartLimitError);
}

TEST_CASE("reconstruct: starting next to the chart boundary with restart on") {
  const auto p = constant_profile(1, 1, {0, 2});
  ReconstructOptions o;
  o.restart = true;
  const auto r = reconstruct(p, 0.0, 0.9999, 0.0, Vec3::Zero(), o);
  REQUIRE_FALSE(r.events.empty());
  CHECK(r.events.front().kind == PipelineEvent::Kind::Restart);
  CHECK(r.curve.frames[r.curve.anchor].t.z() == doctest::Approx(0.9999).epsilon(1e-12));
  const auto v = verify_curve(r.curve, p);
  CHECK(v.max_kappa_rel_error <= 1e-3);
  CHECK(v.max_tau_abs_error <= 1e-3);
}

TEST_CASE("reconstruct_from_frame pins frame and point") {
  const IntrinsicProfile p([](double s) { return 1 + 0.5 * std::sin(s); }, [](double s) { return -0.4 + 0.1 * s; },
                           {-2, 2});
  const FrenetFrame f0 = FrenetFrame{}.rotated(testing::axis_rotation(Vec3(1, -2, 0.5), 2.5));
  const Vec3 c0(3, 1, -4);
  const auto r = reconstruct_from_frame(p, 0.5, f0, c0);
  const auto& c = r.curve;
  CHECK(c.s[c.anchor] == 0.5);
  CHECK((c.points[c.anchor] - c0).norm() <= 1e-12);
  CHECK((c.frames[c.anchor].matrix() - f0.matrix()).norm() <= 1e-12);
  const auto oracle = frenet_integrate(p, f0, c0, 0.5, 1e-3);
  CHECK(rms_distance(c.points, oracle.points) <= 1e-5);
}

TEST_CASE("property: randomized round trip") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 10; ++k) {
    const double om = 0.5 + 1.5 * u(rng), tau = -1 + 2 * u(rng);
    const IntrinsicProfile p([=](double s) { return 1 + 0.5 * std::sin(om * s); }, [=](double) { return tau; }, {0, 4});
    ReconstructOptions o;
    o.restart = true;
    const auto r = reconstruct(p, 0.0, -0.2 + 0.4 * u(rng), 0.0, Vec3::Zero(), o);
    const auto v = verify_curve(r.curve, p);
    CAPTURE(om);
    CAPTURE(tau);
    CHECK(v.max_kappa_rel_error <= 1e-3);
    CHECK(v.max_tau_abs_error <= 1e-3);
    CHECK(v.unit_speed_deviation <= 5e-3 * (1 + 1.5 * 1e-3));
  }
}

TEST_CASE("property: translation equivariance is exact") {
  const IntrinsicProfile p([](double s) { return 1.3 + std::cos(s); }, [](double s) { return std::sin(s); }, {0, 3});
  const Vec3 q(0.25, -3.5, 8.0);
  const auto a = reconstruct(p, 1.0, 0.2, 0.1, Vec3::Zero());
  const auto b = reconstruct(p, 1.0, 0.2, 0.1, q);
  REQUIRE(a.curve.size() == b.curve.size());
  for (std::size_t i = 0; i < a.curve.size(); ++i) CHECK(b.curve.points[i] == a.curve.points[i] + q);
}

TEST_CASE("property: frame tangents match finite differences") {
  const IntrinsicProfile p([](double s) { return 2 + std::sin(2 * s); }, [](double s) { return 1 - s; }, {0, 2});
  const auto c = reconstruct(p, 0.0, 0.4, -0.5, Vec3::Zero()).curve;
  for (std::size_t i = 1; i + 1 < c.size(); ++i) {
    const Vec3 fd = (c.points[i + 1] - c.points[i - 1]) / (c.s[i + 1] - c.s[i - 1]);
    CHECK((fd - c.frames[i].t).norm() <= 5e-3);
    CHECK(c.frames[i].is_orthonormal(1e-9));
  }
}

TEST_CASE("concurrent reconstructions are independent") {
  const IntrinsicProfile p([](double s) { return 1 + 0.5 * std::sin(s); }, [](double) { return 0.8; }, {0, 4});
  const auto serial = reconstruct(p, 0.0, 0.1, 0.0, Vec3::Zero());
  std::vector<std::future<Reconstruction>> jobs;
  for (int k = 0; k < 8; ++k)
    jobs.push_back(std::async(std::launch::async, [&] { return reconstruct(p, 0.0, 0.1, 0.0, Vec3::Zero()); }));
  for (auto& j : jobs) {
    const auto r = j.get();
    REQUIRE(r.curve.size() == serial.curve.size());
    for (std::size_t i = 0; i < r.curve.size(); ++i) CHECK(r.curve.points[i] == serial.curve.points[i]);
  }
}

TEST_CASE("negative branch reproduces the same intrinsic data") {
  const IntrinsicProfile p([](double s) { return 1 + 0.3 * std::sin(s); }, [](double) { return 0.6; }, {0, 3});
  ReconstructOptions o;
  o.branch = Branch::Negative;
  const auto r = reconstruct(p, 0.0, 0.2, 0.1, Vec3::Zero(), o);
  REQUIRE_FALSE(r.truncated);
  for (const auto& f : r.curve.frames) CHECK(f.b.z() < 0.0);
  const auto v = verify_curve(r.curve, p);
  CHECK(v.max_kappa_rel_error <= 1e-3);
  CHECK(v.max_tau_abs_error <= 1e-3);
  const auto oracle = frenet_integrate(p, r.curve.frames.front(), r.curve.points.front(), 0.0, 1e-3);
  CHECK(rms_distance(r.curve.points, oracle.points) <= 1e-5);
}
