#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "curveforge/errors.hpp"
#include "curveforge/expr.hpp"
#include "curveforge/frenet.hpp"
#include "curveforge/helices.hpp"
#include "curveforge/reconstruct.hpp"
#include "io.hpp"

namespace curveforge::cli {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

/// Failure that has already been reported; carries the exit code.
struct Failure {
  int code;
};

int exit_code(const Error& e) { return e.category() == ErrorCategory::Input ? kInput : kNumerical; }

// ---------------------------------------------------------------------------
// Arguments

struct ProfileArgs {
  std::string kappa;
  std::string tau;
  double smin = 0.0;
  double smax = 1.0;
};

struct StartArgs {
  std::optional<double> s0;
  double w0 = 0.0;
  double v0 = 0.0;
  std::vector<double> frame;  // t, n, b
  std::vector<double> start{0.0, 0.0, 0.0};
  double step = 1e-3;
  bool restart = false;
  int max_restarts = 16;
  std::string branch = "positive";
};

struct OutputArgs {
  std::string out;
  std::string report;
  bool frames = false;
};

void add_profile(CLI::App* app, ProfileArgs& p, bool tau_required) {
  auto* k = app->add_option("--kappa", p.kappa, "curvature kappa(s) > 0, e.g. \"1+0.3*sin(s)\"");
  auto* t = app->add_option("--tau", p.tau, "torsion tau(s)");
  if (tau_required) {
    k->required();
    t->required();
  }
  app->add_option("--smin", p.smin, "lower end of the arc-length domain")->capture_default_str();
  app->add_option("--smax", p.smax, "upper end of the arc-length domain")->capture_default_str();
}

void add_start(CLI::App* app, StartArgs& a) {
  app->add_option("--s0", a.s0, "arc length of the initial data (default: --smin)");
  auto* w0 = app->add_option("--w0", a.w0, "initial <t, e3>")->capture_default_str();
  auto* v0 = app->add_option("--v0", a.v0, "initial derivative of <t, e3>")->capture_default_str();
  auto* frame = app->add_option("--frame", a.frame, "initial frame as 9 reals: t n b")->expected(9);
  frame->excludes(w0)->excludes(v0);
  app->add_option("--start", a.start, "position at s0 (3 reals)")->expected(3);
  app->add_option("--step", a.step, "grid step h")->capture_default_str()->check(CLI::PositiveNumber);
  app->add_flag("--restart", a.restart, "switch charts instead of stopping at the chart boundary");
  app->add_option("--max-restarts", a.max_restarts, "restart budget")->capture_default_str()->check(CLI::NonNegativeNumber);
  app->add_option("--branch", a.branch, "root of the scalar equation")
      ->capture_default_str()
      ->check(CLI::IsMember({"positive", "negative"}));
}

void add_output(CLI::App* app, OutputArgs& o, bool curve) {
  if (curve) {
    app->add_option("--out", o.out, "CSV output path (default: stdout)");
    app->add_flag("--frames", o.frames, "append frame columns to the CSV");
  }
  app->add_option("--report", o.report, "JSON report path");
}

expr::Expression parse_flag(const char* flag, const std::string& text) {
  try {
    return expr::parse(text);
  } catch (const ParseError& e) {
    throw Error(ErrorCategory::Input, "parse",
                std::string(flag) + ": " + e.what() + "\n  " + text + "\n  " + std::string(e.offset(), ' ') + "^");
  }
}

ScalarFn scalar(const expr::Expression& e) {
  return [e](double s) { return e(s); };
}

IntrinsicProfile make_profile(const ProfileArgs& p) {
  if (!(p.smin < p.smax)) throw Error(ErrorCategory::Input, "profile", "--smin must be below --smax");
  return IntrinsicProfile::from_expressions(parse_flag("--kappa", p.kappa), parse_flag("--tau", p.tau),
                                            {p.smin, p.smax});
}

FrenetFrame parse_frame(const std::vector<double>& v) {
  FrenetFrame f{Vec3(v[0], v[1], v[2]), Vec3(v[3], v[4], v[5]), Vec3(v[6], v[7], v[8])};
  if (!f.is_orthonormal(1e-9)) throw InitialConditionError("--frame is not a right-handed orthonormal frame");
  return f;
}

Vec3 start_point(const StartArgs& a) { return Vec3(a.start[0], a.start[1], a.start[2]); }

ReconstructOptions options(const StartArgs& a) {
  ReconstructOptions o;
  o.step = a.step;
  o.restart = a.restart;
  o.max_restarts = a.max_restarts;
  o.branch = a.branch == "negative" ? Branch::Negative : Branch::Positive;
  return o;
}

Json echo_profile(const ProfileArgs& p) {
  return Json{{"kappa", p.kappa}, {"tau", p.tau}, {"domain", Json::array({p.smin, p.smax})}};
}

Json echo_start(const StartArgs& a, double s0) {
  Json j{{"s0", s0}};
  if (a.frame.empty()) {
    j["w0"] = a.w0;
    j["v0"] = a.v0;
  } else {
    j["frame"] = a.frame;
  }
  j["start"] = a.start;
  j["step"] = a.step;
  j["restart"] = a.restart;
  j["max_restarts"] = a.max_restarts;
  j["branch"] = a.branch;
  return j;
}

Json echo_argv(int argc, const char* const* argv) {
  Json j = Json::array();
  for (int i = 1; i < argc; ++i) j.push_back(argv[i]);
  return j;
}

// ---------------------------------------------------------------------------
// Pipelines shared by several commands

Reconstruction reconstruct_from_args(const IntrinsicProfile& profile, const StartArgs& a) {
  const double s0 = a.s0.value_or(profile.domain().lo);
  if (!a.frame.empty()) return reconstruct_from_frame(profile, s0, parse_frame(a.frame), start_point(a), options(a));
  return reconstruct(profile, s0, a.w0, a.v0, start_point(a), options(a));
}

/// Classical integration over the same samples, from the reconstruction's
/// own frame and point at the anchor.
SampledCurve oracle_for(const IntrinsicProfile& profile, const SampledCurve& curve, double h) {
  return frenet_integrate(profile, curve.frames[curve.anchor], curve.points[curve.anchor], curve.s, curve.anchor, h);
}

void record(Report& report, const Reconstruction& r) {
  for (const auto& e : r.events) report.events.push_back(to_json(e));
  report.metrics["restarts"] = r.restarts;
  report.metrics["truncated"] = r.truncated;
  report.metrics["covered"] = Json::array({r.curve.s.front(), r.curve.s.back()});
  report.metrics["samples"] = r.curve.size();
}

std::string truncation_message(const Reconstruction& r) {
  for (const auto& e : r.events) {
    if (e.kind == PipelineEvent::Kind::DomainExit) {
      return "domain exit at s=" + format_real(e.s) + " (radicand " + format_real(e.radicand) +
             "); the curve stops at the chart boundary, rerun with --restart to continue";
    }
  }
  return "curve does not cover the domain";
}

/// Verification metrics of a reconstruction against its profile and the oracle.
Json verify_metrics(const IntrinsicProfile& profile, const Reconstruction& r, double h, double tolerance) {
  Json m;
  if (r.curve.size() < 11) throw Error(ErrorCategory::Numerical, "verify", "too few samples to estimate curvature");
  const Verification v = verify_curve(r.curve, profile);
  const SampledCurve oracle = oracle_for(profile, r.curve, h);
  m["max_kappa_rel_error"] = v.max_kappa_rel_error;
  m["max_tau_abs_error"] = v.max_tau_abs_error;
  m["unit_speed_deviation"] = v.unit_speed_deviation;
  m["oracle_rmsd"] = kabsch_align(r.curve, oracle).rmsd;
  m["estimated_samples"] = v.samples;
  m["tolerance"] = tolerance;
  m["within_tolerance"] = v.max_kappa_rel_error <= tolerance && v.max_tau_abs_error <= tolerance;
  return m;
}

// ---------------------------------------------------------------------------
// Commands

struct Context {
  std::ostream& out;
  std::ostream& err;
  Json argv;
};

int cmd_reconstruct(Context& ctx, const ProfileArgs& p, const StartArgs& a, const OutputArgs& o) {
  const auto t0 = Clock::now();
  const IntrinsicProfile profile = make_profile(p);
  const Reconstruction r = reconstruct_from_args(profile, a);

  std::ostringstream csv;
  write_csv(csv, r.curve, o.frames);
  emit(o.out, ctx.out, csv.str());

  Report report;
  report.inputs = {{"command", "reconstruct"}, {"profile", echo_profile(p)},
                   {"initial", echo_start(a, r.curve.s[r.curve.anchor])}, {"argv", ctx.argv}};
  record(report, r);
  report.metrics["unit_speed_deviation"] = unit_speed_deviation(r.curve);
  report.timing_ms["total"] = elapsed_ms(t0);
  if (!o.report.empty()) emit(o.report, ctx.out, report.dump());

  if (r.truncated) {
    ctx.err << "curveforge: ode: " << truncation_message(r) << "\n";
    return kNumerical;
  }
  return kOk;
}

int cmd_oracle(Context& ctx, const ProfileArgs& p, const StartArgs& a, const OutputArgs& o) {
  const auto t0 = Clock::now();
  const IntrinsicProfile profile = make_profile(p);
  const FrenetFrame frame = a.frame.empty() ? FrenetFrame{} : parse_frame(a.frame);
  const double s0 = a.s0.value_or(profile.domain().lo);
  if (!profile.domain().contains(s0)) throw InitialConditionError("--s0 lies outside the domain");
  const SampledCurve curve = frenet_integrate(profile, frame, start_point(a), s0, a.step);

  std::ostringstream csv;
  write_csv(csv, curve, o.frames);
  emit(o.out, ctx.out, csv.str());

  if (!o.report.empty()) {
    Report report;
    Json initial{{"s0", s0}, {"frame", a.frame.empty() ? Json::array({1, 0, 0, 0, 1, 0, 0, 0, 1}) : Json(a.frame)},
                 {"start", a.start}, {"step", a.step}};
    report.inputs = {{"command", "oracle"}, {"profile", echo_profile(p)}, {"initial", initial}, {"argv", ctx.argv}};
    report.metrics["samples"] = curve.size();
    report.metrics["unit_speed_deviation"] = unit_speed_deviation(curve);
    report.timing_ms["total"] = elapsed_ms(t0);
    emit(o.report, ctx.out, report.dump());
  }
  return kOk;
}

struct HelixArgs {
  double m = 0.0;
  std::string kappa = "1";
  double smin = 0.0;
  double smax = 1.0;
  double step = 1e-3;
};

int cmd_helix(Context& ctx, bool slant, const HelixArgs& h, const OutputArgs& o) {
  const auto t0 = Clock::now();
  if (!(h.smin < h.smax)) throw Error(ErrorCategory::Input, "profile", "--smin must be below --smax");
  const Interval domain{h.smin, h.smax};
  const ScalarFn kappa = scalar(parse_flag("--kappa", h.kappa));

  Report report;
  report.inputs = {{"command", slant ? "helix slant" : "helix general"},
                   {"m", h.m},
                   {"kappa", h.kappa},
                   {"domain", Json::array({h.smin, h.smax})},
                   {"step", h.step},
                   {"argv", ctx.argv}};

  SampledCurve curve;
  ScalarFn tau;
  if (slant) {
    SlantHelix sh = slant_helix(h.m, kappa, domain, h.step);
    curve = std::move(sh.curve);
    tau = slant_tau(h.m, 0.0, kappa, domain);
    report.metrics["cross_check_rmsd"] = sh.cross_check_rmsd;
    report.metrics["y_flipped"] = sh.y_flipped;
    if (sh.y_flipped) {
      report.events.push_back(Json{{"kind", "branch-flip"},
                                   {"s", h.smin},
                                   {"detail", "closed form mirrored in y to match the intrinsic data"}});
    }
  } else {
    curve = general_helix(h.m, kappa, domain, h.step);
    tau = [m = h.m, kappa](double s) { return m * kappa(s); };
  }

  std::ostringstream csv;
  write_csv(csv, curve, o.frames);
  emit(o.out, ctx.out, csv.str());

  const Verification v = verify_curve(curve, IntrinsicProfile(kappa, tau, domain));
  report.metrics["samples"] = curve.size();
  report.metrics["max_kappa_rel_error"] = v.max_kappa_rel_error;
  report.metrics["max_tau_abs_error"] = v.max_tau_abs_error;
  report.metrics["unit_speed_deviation"] = v.unit_speed_deviation;
  report.timing_ms["total"] = elapsed_ms(t0);
  if (!o.report.empty()) emit(o.report, ctx.out, report.dump());
  return kOk;
}

struct ClassifyArgs {
  ProfileArgs profile;
  double tol = 1e-6;
  std::size_t samples = 201;
};

int cmd_classify(Context& ctx, const ClassifyArgs& c, const OutputArgs& o) {
  const auto t0 = Clock::now();
  const HelixClass k = classify(make_profile(c.profile), c.tol, c.samples);
  char line[96];
  if (k.kind == HelixKind::Generic) {
    std::snprintf(line, sizeof line, "%s\n", to_string(k.kind));
  } else {
    std::snprintf(line, sizeof line, "%s m=%.6g\n", to_string(k.kind), k.m);
  }
  ctx.out << line;
  if (!o.report.empty()) {
    Report report;
    report.inputs = {{"command", "classify"}, {"profile", echo_profile(c.profile)}, {"tol", c.tol},
                     {"samples", c.samples}, {"argv", ctx.argv}};
    report.metrics["class"] = to_string(k.kind);
    report.metrics["m"] = k.m;
    report.timing_ms["total"] = elapsed_ms(t0);
    emit(o.report, ctx.out, report.dump());
  }
  return kOk;
}

struct VerifyArgs {
  ProfileArgs profile;
  StartArgs start;
  double tolerance = 1e-3;
  std::string batch;
};

/// One verification run; fills `report` and returns the exit code.
int verify_one(const ProfileArgs& p, const StartArgs& a, double tolerance, Report& report, std::string& message) {
  const auto t0 = Clock::now();
  report.inputs = {{"profile", echo_profile(p)}, {"initial", echo_start(a, a.s0.value_or(p.smin))}};
  try {
    const IntrinsicProfile profile = make_profile(p);
    const Reconstruction r = reconstruct_from_args(profile, a);
    record(report, r);
    const Json checks = verify_metrics(profile, r, a.step, tolerance);
    report.metrics.update(checks);
    report.timing_ms["total"] = elapsed_ms(t0);
    if (r.truncated) {
      message = "ode: " + truncation_message(r);
      return kNumerical;
    }
    if (!report.metrics["within_tolerance"].get<bool>()) {
      message = "verify: estimated curvature/torsion exceed the tolerance " + format_real(tolerance);
      return kNumerical;
    }
    return kOk;
  } catch (const Error& e) {
    report.metrics["error"] = {{"stage", e.stage()}, {"message", e.what()}};
    report.timing_ms["total"] = elapsed_ms(t0);
    message = e.stage() + ": " + e.what();
    return exit_code(e);
  }
}

/// Profiles of the form kappa = 1 + a sin(w s), tau = c on [0, 2] from (0, 0).
std::vector<ProfileArgs> random_profiles(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<ProfileArgs> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = 0.5 * unit(rng);
    const double w = 0.5 + 1.5 * unit(rng);
    const double c = -1.0 + 2.0 * unit(rng);
    out.push_back({"1+" + format_real(a) + "*sin(" + format_real(w) + "*s)", format_real(c), 0.0, 2.0});
  }
  return out;
}

std::uint64_t env_seed() {
  const char* text = std::getenv("CURVEFORGE_SEED");
  if (text == nullptr || *text == '\0') return 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(text, &end, 10);
  if (*end != '\0') throw Error(ErrorCategory::Input, "batch", "CURVEFORGE_SEED must be an unsigned integer");
  return v;
}

double number_field(const Json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw Error(ErrorCategory::Input, "batch", std::string("field '") + key + "' must be a number");
  return j[key].get<double>();
}

std::vector<std::pair<ProfileArgs, StartArgs>> load_batch(const VerifyArgs& v, Json& source) {
  std::vector<std::pair<ProfileArgs, StartArgs>> runs;
  if (v.batch.rfind("random:", 0) == 0) {
    const std::string count = v.batch.substr(7);
    if (count.empty() || count.find_first_not_of("0123456789") != std::string::npos)
      throw Error(ErrorCategory::Input, "batch", "expected random:N with a positive count");
    const std::uint64_t seed = env_seed();
    source = {{"random", std::stoul(count)}, {"seed", seed}};
    for (auto& p : random_profiles(std::stoul(count), seed)) {
      StartArgs a = v.start;
      a.s0.reset();
      a.w0 = 0.0;
      a.v0 = 0.0;
      a.frame.clear();
      runs.emplace_back(std::move(p), a);
    }
    return runs;
  }

  std::ifstream file(v.batch);
  if (!file) throw Error(ErrorCategory::Input, "batch", "cannot read '" + v.batch + "'");
  Json list;
  try {
    list = Json::parse(file);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCategory::Input, "batch", std::string("invalid JSON: ") + e.what());
  }
  if (!list.is_array()) throw Error(ErrorCategory::Input, "batch", "batch file must hold a JSON array of profiles");
  source = {{"file", v.batch}};
  for (const auto& item : list) {
    if (!item.is_object() || !item.contains("kappa") || !item.contains("tau") || !item["kappa"].is_string() ||
        !item["tau"].is_string()) {
      throw Error(ErrorCategory::Input, "batch", "each entry needs string fields 'kappa' and 'tau'");
    }
    ProfileArgs p = v.profile;
    p.kappa = item["kappa"].get<std::string>();
    p.tau = item["tau"].get<std::string>();
    p.smin = number_field(item, "smin", p.smin);
    p.smax = number_field(item, "smax", p.smax);
    StartArgs a = v.start;
    if (item.contains("s0")) a.s0 = number_field(item, "s0", 0.0);
    a.w0 = number_field(item, "w0", a.w0);
    a.v0 = number_field(item, "v0", a.v0);
    runs.emplace_back(std::move(p), a);
  }
  return runs;
}

int cmd_verify_batch(Context& ctx, const VerifyArgs& v, const OutputArgs& o) {
  const auto t0 = Clock::now();
  Json source;
  const auto runs = load_batch(v, source);

  std::vector<Report> reports(runs.size());
  std::vector<int> codes(runs.size(), kOk);
  std::vector<std::string> messages(runs.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < runs.size(); i = next++) {
      codes[i] = verify_one(runs[i].first, runs[i].second, v.tolerance, reports[i], messages[i]);
    }
  };
  const std::size_t threads =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(runs.size(), 1));
  std::vector<std::jthread> pool;
  for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  pool.clear();

  Report report;
  report.inputs = {{"command", "verify"}, {"batch", source}, {"tolerance", v.tolerance}, {"runs", Json::array()},
                   {"argv", ctx.argv}};
  report.metrics = {{"runs", Json::array()}};
  report.timing_ms = {{"runs", Json::array()}};
  int code = kOk;
  double worst_kappa = 0.0, worst_tau = 0.0, worst_rmsd = 0.0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    report.inputs["runs"].push_back(reports[i].inputs);
    Json m = reports[i].metrics;
    m["status"] = codes[i] == kOk ? "ok" : "failed";
    m["exit_code"] = codes[i];
    report.metrics["runs"].push_back(m);
    for (auto e : reports[i].events) {
      e["run"] = i;
      report.events.push_back(e);
    }
    report.timing_ms["runs"].push_back(reports[i].timing_ms.value("total", 0.0));
    if (m.contains("max_kappa_rel_error")) {
      worst_kappa = std::max(worst_kappa, m["max_kappa_rel_error"].get<double>());
      worst_tau = std::max(worst_tau, m["max_tau_abs_error"].get<double>());
      worst_rmsd = std::max(worst_rmsd, m["oracle_rmsd"].get<double>());
    }
    if (codes[i] != kOk) ctx.err << "curveforge: run " << i << ": " << messages[i] << "\n";
    code = std::max(code, codes[i]);
  }
  report.metrics["max_kappa_rel_error"] = worst_kappa;
  report.metrics["max_tau_abs_error"] = worst_tau;
  report.metrics["oracle_rmsd"] = worst_rmsd;
  report.metrics["failed"] = std::count_if(codes.begin(), codes.end(), [](int c) { return c != kOk; });
  report.timing_ms["total"] = elapsed_ms(t0);
  emit(o.report, ctx.out, report.dump());
  return code;
}

int cmd_verify(Context& ctx, const VerifyArgs& v, const OutputArgs& o) {
  if (!v.batch.empty()) return cmd_verify_batch(ctx, v, o);
  Report report;
  std::string message;
  const int code = verify_one(v.profile, v.start, v.tolerance, report, message);
  Json inputs{{"command", "verify"}};
  inputs.update(report.inputs);
  inputs["tolerance"] = v.tolerance;
  inputs["argv"] = ctx.argv;
  report.inputs = std::move(inputs);
  if (report.metrics.contains("error")) {
    // Input problems surface as ordinary errors rather than a report.
    const auto& e = report.metrics["error"];
    throw Error(code == kInput ? ErrorCategory::Input : ErrorCategory::Numerical, e["stage"].get<std::string>(),
                e["message"].get<std::string>());
  }
  emit(o.report, ctx.out, report.dump());
  if (code != kOk) ctx.err << "curveforge: " << message << "\n";
  return code;
}

struct CompareArgs {
  ProfileArgs profile;
  StartArgs start;
  double tolerance = 1e-5;
};

int cmd_compare(Context& ctx, const CompareArgs& c, const OutputArgs& o) {
  const auto t0 = Clock::now();
  const IntrinsicProfile profile = make_profile(c.profile);
  const Reconstruction r = reconstruct_from_args(profile, c.start);
  const SampledCurve oracle = oracle_for(profile, r.curve, c.start.step);
  const Alignment fit = kabsch_align(r.curve, oracle);

  Report report;
  report.inputs = {{"command", "compare"}, {"profile", echo_profile(c.profile)},
                   {"initial", echo_start(c.start, r.curve.s[r.curve.anchor])}, {"tolerance", c.tolerance},
                   {"argv", ctx.argv}};
  record(report, r);
  report.metrics["oracle_rmsd"] = fit.rmsd;
  report.metrics["oracle_rms_unaligned"] = rms_distance(r.curve.points, oracle.points);
  report.metrics["alignment_rotation_error"] = (fit.motion.rotation - Mat3::Identity()).norm();
  report.metrics["alignment_translation"] = to_json(fit.motion.translation);
  report.metrics["unit_speed_deviation"] = unit_speed_deviation(r.curve);
  report.metrics["within_tolerance"] = fit.rmsd <= c.tolerance;
  report.timing_ms["total"] = elapsed_ms(t0);
  emit(o.report, ctx.out, report.dump());

  if (r.truncated) {
    ctx.err << "curveforge: ode: " << truncation_message(r) << "\n";
    return kNumerical;
  }
  if (fit.rmsd > c.tolerance) {
    ctx.err << "curveforge: compare: oracle rmsd " << format_real(fit.rmsd) << " exceeds " << format_real(c.tolerance)
            << "\n";
    return kNumerical;
  }
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"curveforge: space curves from curvature and torsion"};
  app.name("curveforge");
  app.require_subcommand(1);

  OutputArgs output;

  ProfileArgs rec_profile;
  StartArgs rec_start;
  auto* rec = app.add_subcommand("reconstruct", "curve from kappa, tau and initial data via the scalar equation");
  add_profile(rec, rec_profile, true);
  add_start(rec, rec_start);
  add_output(rec, output, true);

  ProfileArgs orc_profile;
  StartArgs orc_start;
  auto* orc = app.add_subcommand("oracle", "curve by direct Frenet-Serret integration");
  add_profile(orc, orc_profile, true);
  orc->add_option("--s0", orc_start.s0, "arc length of the initial frame (default: --smin)");
  orc->add_option("--frame", orc_start.frame, "initial frame as 9 reals: t n b (default: identity)")->expected(9);
  orc->add_option("--start", orc_start.start, "position at s0 (3 reals)")->expected(3);
  orc->add_option("--step", orc_start.step, "grid step h")->capture_default_str()->check(CLI::PositiveNumber);
  add_output(orc, output, true);

  HelixArgs helix;
  auto* hel = app.add_subcommand("helix", "closed-form helices");
  hel->require_subcommand(1);
  auto* general = hel->add_subcommand("general", "general helix: tau/kappa = m");
  auto* slant = hel->add_subcommand("slant", "slant helix: sigma = m");
  for (auto* sub : {general, slant}) {
    sub->add_option("--m", helix.m, "helix parameter")->required();
    sub->add_option("--kappa", helix.kappa, "curvature kappa(s) > 0")->capture_default_str();
    sub->add_option("--smin", helix.smin)->capture_default_str();
    sub->add_option("--smax", helix.smax)->capture_default_str();
    sub->add_option("--step", helix.step, "grid step h")->capture_default_str()->check(CLI::PositiveNumber);
    add_output(sub, output, true);
  }

  ClassifyArgs cls;
  auto* cla = app.add_subcommand("classify", "general helix / slant helix / generic");
  add_profile(cla, cls.profile, true);
  cla->add_option("--tol", cls.tol, "flatness tolerance")->capture_default_str()->check(CLI::PositiveNumber);
  cla->add_option("--samples", cls.samples, "sample count (>= 201)")->capture_default_str();
  add_output(cla, output, false);

  VerifyArgs ver;
  auto* vfy = app.add_subcommand("verify", "reconstruct, re-estimate kappa and tau, report errors");
  add_profile(vfy, ver.profile, false);
  add_start(vfy, ver.start);
  vfy->add_option("--tolerance", ver.tolerance, "largest accepted kappa/tau error")->capture_default_str();
  vfy->add_option("--batch", ver.batch, "JSON file of profiles, or random:N (seed from CURVEFORGE_SEED)");
  add_output(vfy, output, false);

  CompareArgs cmp;
  auto* com = app.add_subcommand("compare", "reconstruction against the Frenet-Serret oracle");
  add_profile(com, cmp.profile, true);
  add_start(com, cmp.start);
  com->add_option("--tolerance", cmp.tolerance, "largest accepted rmsd")->capture_default_str();
  add_output(com, output, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kMisuse;
  }

  Context ctx{out, err, echo_argv(argc, argv)};
  try {
    if (*rec) return cmd_reconstruct(ctx, rec_profile, rec_start, output);
    if (*orc) return cmd_oracle(ctx, orc_profile, orc_start, output);
    if (*hel) return cmd_helix(ctx, slant->parsed(), helix, output);
    if (*cla) return cmd_classify(ctx, cls, output);
    if (*vfy) {
      if (ver.batch.empty() && (ver.profile.kappa.empty() || ver.profile.tau.empty())) {
        err << "curveforge: verify needs --kappa and --tau, or --batch\n";
        return kMisuse;
      }
      return cmd_verify(ctx, ver, output);
    }
    if (*com) return cmd_compare(ctx, cmp, output);
  } catch (const Error& e) {
    err << "curveforge: " << e.stage() << ": " << e.what() << "\n";
    return exit_code(e);
  }
  return kMisuse;
}

}  // namespace curveforge::cli
