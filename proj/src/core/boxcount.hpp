#pragma once

#include <cstdint>
#include <vector>

#include "types.hpp"

namespace biflab {

/// Point cloud in real dimension 2 or 4 (complex coordinates flattened).
struct PointCloud {
  int dim = 2;  // 2 or 4
  std::vector<double> coords;  // dim entries per point
  double scale_hint = 1.0;     // ambient diameter

  std::size_t size() const { return coords.size() / static_cast<std::size_t>(dim); }

  static PointCloud from_complex(const std::vector<cplx>& pts, double scale_hint);
};

/// Box-counting report: occupied epsilon-boxes on a corner-anchored
/// grid, with the dimension estimate fitted on log N vs log(1/eps).
struct BoxCountReport {
  std::vector<double> scales;
  std::vector<long long> counts;
  double slope = 0.0;
  int fit_lo = 0, fit_hi = 0;  // inclusive index range used for the fit
  double r_squared = 0.0;
};

/// Count boxes at the given scales (grid anchored at the bounding-box
/// corner). The fit range is the contiguous window of >= 4 scales with
/// maximal R^2, unless a range is forced via fit_lo/fit_hi >= 0.
/// Throws DegenerateCloud when all points coincide.
BoxCountReport box_count(const PointCloud& cloud, const std::vector<double>& scales,
                         int fit_lo = -1, int fit_hi = -1);

/// Dyadic scales scale_hint * 2^-j for j in [0, levels).
std::vector<double> dyadic_scales(double scale_hint, int levels);

struct MoranBound {
  int m = 0;
  double a = 0.0, A = 0.0;
  int k = 1;
  double lower_slice = 0.0;      // ln m / A
  double lower_projected = 0.0;  // (a/A)(ln m / A) - (2k-2)
};

MoranBound moran_bounds(int m, double a, double A, int k);

/// Lower bound (chi1/chik)(k ln d / chik) - (2k-2) for the local
/// bifurcation dimension near a Misiurewicz parameter.
double lyapunov_dimension_bound(double chi1, double chik, int k, int d);

/// Empirical Hoelder exponent: slope of the 10th-percentile envelope of
/// log dist_dst against log dist_src (binned quantile regression).
/// Requires >= 100 pairs with positive distances.
double holder_fit(const std::vector<std::pair<double, double>>& pairs);

}  // namespace biflab
