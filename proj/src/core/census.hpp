#pragma once

#include <cstdint>
#include <vector>

#include "rational_map.hpp"

namespace biflab {

/// Inverse-branch census of a ball: the preimage tree of the center is
/// enumerated to depth n_max; a depth-n branch is RETURNING when its
/// endpoint lies in the (chordal) ball and the first-order image
/// estimate stays compactly inside:
///   dist(endpoint, center) + kappa * radius * prod(1/f#)  <=  radius.
/// Branches through critical points are not inverse branches and are
/// pruned with their subtrees. The depth-0 identity branch counts by
/// convention.
struct BranchCensus {
  SpherePoint ball_center;
  double ball_radius = 0.0;
  int n_max = 0;
  std::vector<long long> counts;         // m(n), n = 0..n_max
  std::vector<double> min_rate;          // per-step rate^(1/n) over returning branches
  std::vector<double> max_rate;          // (NaN when m(n) = 0)
  std::vector<long long> window_counts;  // returning branches inside the contraction window
  double window_chi = 0.0;               // measured exponent used for the window
  double window_eps = 0.1;
  double window_K = 4.0;
  long long nodes_explored = 0;

  /// Least-squares slope of log counts[n] vs n over [n_lo, n_hi]
  /// (n with zero count are skipped). NaN if fewer than two points.
  double slope(int n_lo, int n_hi, bool window = false) const;
};

struct CensusOptions {
  double kappa = 2.0;             // safety factor on the image diameter
  long long node_budget = 10'000'000;
  double window_chi = 0.0;        // measured Lyapunov exponent
  double window_eps = 0.1;
  double window_K = 4.0;
  /// Required empirical mass of the ball: fraction of a quick measure
  /// sample that must land inside (positive-mass precondition).
  double min_mass_fraction = 0.01;
  std::uint64_t mass_check_seed = 1234;
};

BranchCensus branch_census(const RationalMap& map, const SpherePoint& ball_center,
                           double ball_radius, int n_max, const CensusOptions& opts = {});

}  // namespace biflab
