#include "census.hpp"

#include <cmath>
#include <limits>

#include "errors.hpp"
#include "fastmath.hpp"
#include "sampler.hpp"

namespace biflab {

namespace {

constexpr double kCriticalFloor = 1e-30;

struct TreeNode {
  SpherePoint z;
  int depth;
  double log_rate;  // log prod(1/f#) along the branch
};

}  // namespace

double BranchCensus::slope(int n_lo, int n_hi, bool window) const {
  const auto& c = window ? window_counts : counts;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (int n = n_lo; n <= n_hi && n < static_cast<int>(c.size()); ++n) {
    if (c[static_cast<std::size_t>(n)] <= 0) continue;
    double x = n, y = std::log(static_cast<double>(c[static_cast<std::size_t>(n)]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) return std::numeric_limits<double>::quiet_NaN();
  double denom = m * sxx - sx * sx;
  return (m * sxy - sx * sy) / denom;
}

BranchCensus branch_census(const RationalMap& map, const SpherePoint& ball_center,
                           double ball_radius, int n_max, const CensusOptions& opts) {
  require(ball_radius > 0.0 && ball_radius < 1.0, ErrorCode::invalid_argument,
          "chordal ball radius must be in (0,1)");
  require(n_max >= 0, ErrorCode::invalid_argument, "n_max must be >= 0");

  // positive-mass precondition, checked empirically
  {
    MeasureSample s = sample_measure(map, opts.mass_check_seed, 50, 2000);
    long long inside = 0;
    for (const auto& p : s.points)
      if (sphere_dist(p, ball_center) <= ball_radius) ++inside;
    double frac = static_cast<double>(inside) / static_cast<double>(s.points.size());
    require(frac >= opts.min_mass_fraction, ErrorCode::invalid_argument,
            "ball carries too little measure mass for a census");
  }

  BranchCensus census;
  census.ball_center = ball_center;
  census.ball_radius = ball_radius;
  census.n_max = n_max;
  census.counts.assign(static_cast<std::size_t>(n_max) + 1, 0);
  census.window_counts.assign(static_cast<std::size_t>(n_max) + 1, 0);
  census.min_rate.assign(static_cast<std::size_t>(n_max) + 1,
                         std::numeric_limits<double>::quiet_NaN());
  census.max_rate.assign(census.min_rate.size(), std::numeric_limits<double>::quiet_NaN());
  census.window_chi = opts.window_chi;
  census.window_eps = opts.window_eps;
  census.window_K = opts.window_K;

  census.counts[0] = 1;  // identity branch
  census.window_counts[0] = 1;
  census.min_rate[0] = census.max_rate[0] = 1.0;
  if (n_max == 0) return census;

  const double log_K = std::log(opts.window_K);
  std::vector<TreeNode> stack;
  stack.push_back(TreeNode{ball_center, 0, 0.0});
  std::vector<SpherePoint> pre;
  while (!stack.empty()) {
    TreeNode node = stack.back();
    stack.pop_back();
    if (++census.nodes_explored > opts.node_budget)
      fail(ErrorCode::budget_exceeded, "census tree exceeded the node budget");
    map.preimages_into(node.z, 1e-6, pre, /*check_residual=*/false);
    for (const auto& child : pre) {
      double deriv = map.spherical_derivative(child);
      if (deriv < kCriticalFloor) continue;  // branch through the critical set
      int depth = node.depth + 1;
      double log_rate = node.log_rate - std::log(deriv);
      double dist = sphere_dist(child, ball_center);
      // hair of slack so exact-boundary branches (fixed points with
      // kappa r prod = r in exact arithmetic) are not lost to rounding
      if (dist <= ball_radius &&
          dist + opts.kappa * ball_radius * std::exp(log_rate) <=
              ball_radius * (1.0 + 1e-12)) {
        auto d = static_cast<std::size_t>(depth);
        census.counts[d] += 1;
        double step_rate = std::exp(log_rate / depth);
        if (std::isnan(census.min_rate[d]) || step_rate < census.min_rate[d])
          census.min_rate[d] = step_rate;
        if (std::isnan(census.max_rate[d]) || step_rate > census.max_rate[d])
          census.max_rate[d] = step_rate;
        // Prop-3.2-style window with a fixed K:
        //   -n(chi+eps) - log K <= log_rate <= -n chi + log K
        double lo = -depth * (opts.window_chi + opts.window_eps) - log_K;
        double hi = -depth * opts.window_chi + log_K;
        if (log_rate >= lo && log_rate <= hi) census.window_counts[d] += 1;
      }
      if (depth < n_max) stack.push_back(TreeNode{child, depth, log_rate});
    }
  }
  return census;
}

}  // namespace biflab
