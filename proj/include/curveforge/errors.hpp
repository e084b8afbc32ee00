#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace curveforge {

/// Coarse failure class, used by the command-line front-end to pick an exit code.
enum class ErrorCategory {
  Input,      // malformed formula, out-of-domain evaluation, bad initial data
  Numerical,  // chart boundary, pole, restart limit, degenerate geometry
};

/// Base of every error thrown by the library. `stage()` names the pipeline
/// step that failed ("parse", "eval", "ode", "reconstruct", ...).
class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, std::string stage, const std::string& message)
      : std::runtime_error(message), category_(category), stage_(std::move(stage)) {}

  ErrorCategory category() const noexcept { return category_; }
  const std::string& stage() const noexcept { return stage_; }

 private:
  ErrorCategory category_;
  std::string stage_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& message)
      : Error(ErrorCategory::Input, "parse", message), offset_(offset), expected_(std::move(expected)) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

class UnknownIdentifierError : public ParseError {
 public:
  UnknownIdentifierError(std::size_t offset, std::string name)
      : ParseError(offset, {}, "unknown identifier '" + name + "' at offset " + std::to_string(offset)),
        name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// A function was evaluated outside its domain (sqrt of a negative, log of
/// zero, |u| >= 1 in the slant torsion, ...).
class DomainError : public Error {
 public:
  DomainError(std::string node, double argument, const std::string& message)
      : Error(ErrorCategory::Input, "eval", message), node_(std::move(node)), argument_(argument) {}

  const std::string& node() const noexcept { return node_; }
  double argument() const noexcept { return argument_; }

 private:
  std::string node_;
  double argument_;
};

class ProfileError : public Error {
 public:
  explicit ProfileError(const std::string& message) : Error(ErrorCategory::Input, "profile", message) {}
};

class InitialConditionError : public Error {
 public:
  explicit InitialConditionError(const std::string& message) : Error(ErrorCategory::Input, "ode", message) {}
};

class NegativeRadicandError : public Error {
 public:
  NegativeRadicandError(double s, double value)
      : Error(ErrorCategory::Numerical, "ode",
              "negative radicand " + std::to_string(value) + " at s=" + std::to_string(s)),
        value_(value) {}

  double value() const noexcept { return value_; }

 private:
  double value_;
};

/// 1 - w^2 underflowed: the tangent is (nearly) parallel to e3 and the polar
/// chart degenerates.
class PoleError : public Error {
 public:
  PoleError(double s, double w)
      : Error(ErrorCategory::Numerical, "reconstruct",
              "tangent parallel to e3 (w=" + std::to_string(w) + ") at s=" + std::to_string(s)) {}
};

class ChartBoundaryError : public Error {
 public:
  explicit ChartBoundaryError(const std::string& message)
      : Error(ErrorCategory::Numerical, "chart", message) {}
};

class RestartLimitError : public Error {
 public:
  explicit RestartLimitError(int limit)
      : Error(ErrorCategory::Numerical, "reconstruct",
              "restart limit of " + std::to_string(limit) + " exceeded") {}
};

class DegenerateCurveError : public Error {
 public:
  DegenerateCurveError(std::size_t index, double s)
      : Error(ErrorCategory::Numerical, "estimate",
              "near-zero curvature at sample " + std::to_string(index) + " (s=" + std::to_string(s) + ")") {}
};

class GridMismatchError : public Error {
 public:
  explicit GridMismatchError(const std::string& message) : Error(ErrorCategory::Input, "align", message) {}
};

}  // namespace curveforge
