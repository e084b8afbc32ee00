#include "curveforge/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace curveforge {

namespace {

// A lattice point this close to an endpoint is snapped onto it instead of
// leaving a vanishing interval behind.
constexpr double kSnap = 1e-9;

template <typename T>
std::vector<T> cumulative(std::span<const double> s, std::span<const T> f, std::size_t anchor, T zero) {
  if (s.size() != f.size()) throw std::invalid_argument("cumulative_trapezoid: size mismatch");
  std::vector<T> out(s.size(), zero);
  if (s.empty()) return out;
  if (anchor >= s.size()) throw std::invalid_argument("cumulative_trapezoid: anchor out of range");
  for (std::size_t i = anchor + 1; i < s.size(); ++i) {
    const T area = 0.5 * (s[i] - s[i - 1]) * (f[i] + f[i - 1]);
    out[i] = out[i - 1] + area;
  }
  for (std::size_t i = anchor; i-- > 0;) {
    const T area = 0.5 * (s[i + 1] - s[i]) * (f[i + 1] + f[i]);
    out[i] = out[i + 1] - area;
  }
  return out;
}

}  // namespace

Grid uniform_grid(Interval domain, double s0, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("uniform_grid: step must be positive");
  if (!domain.contains(s0)) throw std::invalid_argument("uniform_grid: s0 outside domain");

  const auto below = static_cast<long long>(std::floor((s0 - domain.lo) / h + kSnap));
  const auto above = static_cast<long long>(std::floor((domain.hi - s0) / h + kSnap));

  Grid g;
  g.s.reserve(static_cast<std::size_t>(below + above + 3));
  if (s0 - static_cast<double>(below) * h > domain.lo + kSnap * h) g.s.push_back(domain.lo);
  for (long long i = -below; i <= above; ++i) {
    double v = s0 + static_cast<double>(i) * h;
    if (i == 0) {
      g.anchor = g.s.size();
      v = s0;
    }
    if (std::abs(v - domain.lo) <= kSnap * h) v = domain.lo;
    if (std::abs(v - domain.hi) <= kSnap * h) v = domain.hi;
    v = std::min(std::max(v, domain.lo), domain.hi);
    g.s.push_back(v);
  }
  if (s0 + static_cast<double>(above) * h < domain.hi - kSnap * h) g.s.push_back(domain.hi);
  return g;
}

std::vector<double> cumulative_trapezoid(std::span<const double> s, std::span<const double> f,
                                         std::size_t anchor) {
  return cumulative<double>(s, f, anchor, 0.0);
}

std::vector<Vec3> cumulative_trapezoid(std::span<const double> s, std::span<const Vec3> f,
                                       std::size_t anchor) {
  return cumulative<Vec3>(s, f, anchor, Vec3::Zero());
}

}  // namespace curveforge
