#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "curveforge/curve.hpp"

namespace curveforge {

/// Ascending samples s0 + i*h clipped to `domain`, plus the domain endpoints
/// when they do not already coincide with a lattice point. `anchor` indexes s0.
struct Grid {
  std::vector<double> s;
  std::size_t anchor = 0;
};

Grid uniform_grid(Interval domain, double s0, double h);

/// Running trapezoid integral of samples `f` over abscissae `s`, normalized
/// to zero at index `anchor` (negative to the left of it).
std::vector<double> cumulative_trapezoid(std::span<const double> s, std::span<const double> f,
                                         std::size_t anchor);

/// Same for vector-valued integrands.
std::vector<Vec3> cumulative_trapezoid(std::span<const double> s, std::span<const Vec3> f,
                                       std::size_t anchor);

}  // namespace curveforge
