#include "io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "curveforge/errors.hpp"

namespace curveforge::cli {

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

bool finite(const Vec3& v) { return std::isfinite(v.x()) && std::isfinite(v.y()) && std::isfinite(v.z()); }

void put(std::string& row, const Vec3& v) {
  for (int k = 0; k < 3; ++k) {
    row += ',';
    row += format_real(v[k]);
  }
}

}  // namespace

void write_csv(std::ostream& out, const SampledCurve& curve, bool frames) {
  frames = frames && curve.has_frames();
  for (std::size_t i = 0; i < curve.size(); ++i) {
    bool ok = std::isfinite(curve.s[i]) && finite(curve.points[i]);
    if (frames) ok = ok && finite(curve.frames[i].t) && finite(curve.frames[i].n) && finite(curve.frames[i].b);
    if (!ok) throw Error(ErrorCategory::Numerical, "output", "non-finite sample at s=" + format_real(curve.s[i]));
  }

  std::string text = frames ? "s,x,y,z,tx,ty,tz,nx,ny,nz,bx,by,bz\n" : "s,x,y,z\n";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    std::string row = format_real(curve.s[i]);
    put(row, curve.points[i]);
    if (frames) {
      put(row, curve.frames[i].t);
      put(row, curve.frames[i].n);
      put(row, curve.frames[i].b);
    }
    row += '\n';
    text += row;
  }
  out << text;
}

void emit(const std::string& path, std::ostream& fallback, const std::string& text) {
  if (path.empty() || path == "-") {
    fallback << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCategory::Input, "output", "cannot open '" + path + "' for writing");
  file << text;
  if (!file) throw Error(ErrorCategory::Input, "output", "failed writing '" + path + "'");
}

Json to_json(const PipelineEvent& event) {
  return Json{{"kind", to_string(event.kind)}, {"s", event.s}, {"radicand", event.radicand}, {"detail", event.detail}};
}

Json to_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

Json Report::to_json() const {
  return Json{{"inputs", inputs}, {"metrics", metrics}, {"events", events}, {"timing_ms", timing_ms}};
}

std::string Report::dump() const { return to_json().dump(2) + "\n"; }

}  // namespace curveforge::cli
