#pragma once

#include <optional>
#include <vector>

#include "rational_map.hpp"

namespace biflab {

struct PeriodicPoint {
  cplx point;
  cplx multiplier;  // derivative of f^p at the point
  bool repelling() const { return std::abs(multiplier) > 1.0; }
};

/// Newton solutions of f^p(z) = z seeded on a grid in the disc
/// |z - center| <= radius, deduplicated at 1e-10. Returns every finite
/// period-p point found (lower periods included; callers filter).
/// Empty when nothing converges in the region.
std::vector<PeriodicPoint> find_periodic(const RationalMap& map, int period,
                                         cplx region_center, double region_radius,
                                         int grid_per_side = 24);

/// Value and derivative of f^p at a finite point, by the chain rule.
/// Also exposes d/dz of the orbit endpoint for Newton solvers.
std::pair<cplx, cplx> iterate_with_derivative(const RationalMap& map, int period, cplx z);

/// Newton-polish a single period-p point from a seed; nullopt when the
/// iteration leaves the working disc or stalls.
std::optional<PeriodicPoint> polish_periodic(const RationalMap& map, int period,
                                             cplx seed, double tol = 1e-12,
                                             int max_iter = 60);

}  // namespace biflab
