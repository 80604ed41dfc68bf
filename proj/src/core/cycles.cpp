#include "cycles.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "fastmath.hpp"

namespace biflab {

namespace {

// f and f' at a finite affine point, without chart swaps. Callers keep
// the orbit away from the blow-up scale.
inline std::pair<cplx, cplx> map_value_derivative(const RationalMap& map, cplx z) {
  auto [pv, pd] = poly_eval_with_derivative(map.num(), z);
  auto [qv, qd] = poly_eval_with_derivative(map.den(), z);
  cplx inv_q = fast_div(cplx(1.0, 0.0), qv);
  cplx value = pv * inv_q;
  cplx deriv = (pd - value * qd) * inv_q;
  return {value, deriv};
}

}  // namespace

std::pair<cplx, cplx> iterate_with_derivative(const RationalMap& map, int period, cplx z) {
  cplx value = z;
  cplx deriv(1.0, 0.0);
  for (int i = 0; i < period; ++i) {
    auto [v, d] = map_value_derivative(map, value);
    value = v;
    deriv *= d;
  }
  return {value, deriv};
}

std::optional<PeriodicPoint> polish_periodic(const RationalMap& map, int period,
                                             cplx seed, double tol, int max_iter) {
  cplx z = seed;
  for (int it = 0; it < max_iter; ++it) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || norm2(z) > 1e12)
      return std::nullopt;
    auto [value, deriv] = iterate_with_derivative(map, period, z);
    cplx g = value - z;
    cplx gp = deriv - cplx(1.0, 0.0);
    if (norm2(gp) < 1e-60) return std::nullopt;
    cplx step = fast_div(g, gp);
    z -= step;
    if (fast_abs(step) < tol * std::max(1.0, fast_abs(z))) {
      auto [v2, d2] = iterate_with_derivative(map, period, z);
      if (fast_abs(v2 - z) > 1e-8 * std::max(1.0, fast_abs(z))) return std::nullopt;
      return PeriodicPoint{z, d2};
    }
  }
  return std::nullopt;
}

std::vector<PeriodicPoint> find_periodic(const RationalMap& map, int period,
                                         cplx region_center, double region_radius,
                                         int grid_per_side) {
  require(period >= 1, ErrorCode::invalid_argument, "period must be >= 1");
  require(region_radius > 0.0, ErrorCode::invalid_argument, "region radius must be > 0");
  std::vector<PeriodicPoint> found;
  const double dedupe_tol = 1e-10;
  for (int i = 0; i < grid_per_side; ++i) {
    for (int j = 0; j < grid_per_side; ++j) {
      double fx = (grid_per_side == 1) ? 0.0 : (2.0 * i / (grid_per_side - 1) - 1.0);
      double fy = (grid_per_side == 1) ? 0.0 : (2.0 * j / (grid_per_side - 1) - 1.0);
      cplx seed = region_center + region_radius * cplx(fx, fy);
      auto sol = polish_periodic(map, period, seed);
      if (!sol) continue;
      if (fast_abs(sol->point - region_center) > region_radius * 1.0001) continue;
      bool dup = false;
      for (const auto& f : found)
        if (fast_abs(f.point - sol->point) < dedupe_tol * std::max(1.0, fast_abs(f.point))) {
          dup = true;
          break;
        }
      if (!dup) found.push_back(*sol);
    }
  }
  std::sort(found.begin(), found.end(), [](const PeriodicPoint& a, const PeriodicPoint& b) {
    if (a.point.real() != b.point.real()) return a.point.real() < b.point.real();
    return a.point.imag() < b.point.imag();
  });
  return found;
}

}  // namespace biflab
