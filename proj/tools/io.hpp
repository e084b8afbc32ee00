#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "curveforge/curve.hpp"
#include "curveforge/reconstruct.hpp"

namespace curveforge::cli {

using Json = nlohmann::ordered_json;

/// 17 significant digits ("%.17g"): reads back to the same double.
std::string format_real(double x);

/// CSV with header s,x,y,z (plus tx..bz when `frames`), one row per sample.
/// Throws a numerical Error before writing anything if a value is not finite.
void write_csv(std::ostream& out, const SampledCurve& curve, bool frames);

/// Writes `text` to `path`, or to `fallback` when path is empty or "-".
void emit(const std::string& path, std::ostream& fallback, const std::string& text);

Json to_json(const PipelineEvent& event);
Json to_json(const Vec3& v);

/// The run report: exactly the keys inputs, metrics, events, timing_ms.
struct Report {
  Json inputs = Json::object();
  Json metrics = Json::object();
  Json events = Json::array();
  Json timing_ms = Json::object();

  Json to_json() const;
  std::string dump() const;
};

}  // namespace curveforge::cli
