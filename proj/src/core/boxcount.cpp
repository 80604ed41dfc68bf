#include "boxcount.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "errors.hpp"

namespace biflab {

PointCloud PointCloud::from_complex(const std::vector<cplx>& pts, double hint) {
  PointCloud c;
  c.dim = 2;
  c.scale_hint = hint;
  c.coords.reserve(pts.size() * 2);
  for (cplx z : pts) {
    c.coords.push_back(z.real());
    c.coords.push_back(z.imag());
  }
  return c;
}

std::vector<double> dyadic_scales(double scale_hint, int levels) {
  std::vector<double> s(static_cast<std::size_t>(levels));
  double e = scale_hint;
  for (auto& v : s) {
    v = e;
    e *= 0.5;
  }
  return s;
}

namespace {

struct Fit {
  double slope = 0.0;
  double r2 = 0.0;
};

Fit linear_fit(const std::vector<double>& x, const std::vector<double>& y, int lo, int hi) {
  int n = hi - lo + 1;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (int i = lo; i <= hi; ++i) {
    sx += x[static_cast<std::size_t>(i)];
    sy += y[static_cast<std::size_t>(i)];
    sxx += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
    sxy += x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
    syy += y[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
  }
  double denom = n * sxx - sx * sx;
  Fit f;
  if (std::fabs(denom) < 1e-30) return f;
  f.slope = (n * sxy - sx * sy) / denom;
  double ss_tot = syy - sy * sy / n;
  if (ss_tot < 1e-18) {
    f.r2 = 0.0;  // constant counts carry no scaling information
    return f;
  }
  double intercept = (sy - f.slope * sx) / n;
  double ss_res = 0.0;
  for (int i = lo; i <= hi; ++i) {
    double r = y[static_cast<std::size_t>(i)] -
               (f.slope * x[static_cast<std::size_t>(i)] + intercept);
    ss_res += r * r;
  }
  f.r2 = 1.0 - ss_res / ss_tot;
  return f;
}

}  // namespace

BoxCountReport box_count(const PointCloud& cloud, const std::vector<double>& scales,
                         int fit_lo, int fit_hi) {
  require(cloud.dim == 2 || cloud.dim == 4, ErrorCode::invalid_argument,
          "cloud dimension must be 2 or 4");
  require(cloud.size() >= 1, ErrorCode::invalid_argument, "empty cloud");
  require(scales.size() >= 2, ErrorCode::invalid_argument, "need at least two scales");
  const int dim = cloud.dim;
  const std::size_t n = cloud.size();

  // bounding-box corner anchor
  std::vector<double> lo(static_cast<std::size_t>(dim), 1e300);
  std::vector<double> hi(static_cast<std::size_t>(dim), -1e300);
  for (std::size_t p = 0; p < n; ++p)
    for (int c = 0; c < dim; ++c) {
      double v = cloud.coords[p * static_cast<std::size_t>(dim) + c];
      require(std::isfinite(v), ErrorCode::invalid_argument, "non-finite coordinate");
      lo[static_cast<std::size_t>(c)] = std::min(lo[static_cast<std::size_t>(c)], v);
      hi[static_cast<std::size_t>(c)] = std::max(hi[static_cast<std::size_t>(c)], v);
    }
  double extent = 0.0;
  for (int c = 0; c < dim; ++c)
    extent = std::max(extent, hi[static_cast<std::size_t>(c)] - lo[static_cast<std::size_t>(c)]);
  require(extent > 0.0, ErrorCode::degenerate_cloud, "all points coincide");

  BoxCountReport rep;
  rep.scales = scales;
  rep.counts.resize(scales.size());
  std::unordered_set<std::uint64_t> boxes;
  for (std::size_t s = 0; s < scales.size(); ++s) {
    double eps = scales[s];
    require(eps > 0.0, ErrorCode::invalid_argument, "scales must be positive");
    boxes.clear();
    for (std::size_t p = 0; p < n; ++p) {
      std::uint64_t key = 1469598103934665603ULL;  // FNV-1a over box indices
      for (int c = 0; c < dim; ++c) {
        double v = cloud.coords[p * static_cast<std::size_t>(dim) + c];
        auto q = static_cast<std::int64_t>(
            std::floor((v - lo[static_cast<std::size_t>(c)]) / eps));
        key ^= static_cast<std::uint64_t>(q) + 0x9e3779b97f4a7c15ULL;
        key *= 1099511628211ULL;
      }
      boxes.insert(key);
    }
    rep.counts[s] = static_cast<long long>(boxes.size());
  }

  std::vector<double> xs(scales.size()), ys(scales.size());
  for (std::size_t s = 0; s < scales.size(); ++s) {
    xs[s] = std::log(1.0 / scales[s]);
    ys[s] = std::log(static_cast<double>(rep.counts[s]));
  }

  const int last = static_cast<int>(scales.size()) - 1;
  if (fit_lo >= 0 && fit_hi > fit_lo) {
    fit_lo = std::clamp(fit_lo, 0, last);
    fit_hi = std::clamp(fit_hi, 0, last);
    Fit f = linear_fit(xs, ys, fit_lo, fit_hi);
    rep.slope = f.slope;
    rep.r_squared = f.r2;
    rep.fit_lo = fit_lo;
    rep.fit_hi = fit_hi;
  } else {
    // maximal-R^2 contiguous window of >= 4 scales; ties prefer longer,
    // then earlier windows
    Fit best;
    int blo = 0, bhi = std::min(3, last);
    bool found = false;
    for (int len = 4; len <= last + 1; ++len) {
      for (int s = 0; s + len - 1 <= last; ++s) {
        Fit f = linear_fit(xs, ys, s, s + len - 1);
        bool better = !found || f.r2 > best.r2 + 1e-12 ||
                      (std::fabs(f.r2 - best.r2) <= 1e-12 && len > bhi - blo + 1);
        if (better) {
          best = f;
          blo = s;
          bhi = s + len - 1;
          found = true;
        }
      }
    }
    rep.slope = best.slope;
    rep.r_squared = best.r2;
    rep.fit_lo = blo;
    rep.fit_hi = bhi;
  }
  rep.slope = std::clamp(rep.slope, 0.0, static_cast<double>(dim));
  return rep;
}

MoranBound moran_bounds(int m, double a, double A, int k) {
  require(m >= 2, ErrorCode::invalid_argument, "need m >= 2");
  require(0.0 < a && a <= A, ErrorCode::invalid_argument, "need 0 < a <= A");
  require(k >= 1, ErrorCode::invalid_argument, "need k >= 1");
  MoranBound b;
  b.m = m;
  b.a = a;
  b.A = A;
  b.k = k;
  b.lower_slice = std::log(static_cast<double>(m)) / A;
  b.lower_projected = (a / A) * b.lower_slice - 2.0 * (k - 1);
  return b;
}

double lyapunov_dimension_bound(double chi1, double chik, int k, int d) {
  require(0.0 < chi1 && chi1 <= chik, ErrorCode::invalid_argument, "need 0 < chi1 <= chik");
  require(d >= 2, ErrorCode::invalid_argument, "need degree >= 2");
  require(k >= 1, ErrorCode::invalid_argument, "need k >= 1");
  return (chi1 / chik) * (k * std::log(static_cast<double>(d)) / chik) - 2.0 * (k - 1);
}

double holder_fit(const std::vector<std::pair<double, double>>& pairs) {
  require(pairs.size() >= 100, ErrorCode::insufficient_pairs, "need >= 100 pairs");
  std::vector<std::pair<double, double>> logs;
  logs.reserve(pairs.size());
  for (auto [s, d] : pairs) {
    require(s > 0.0 && d > 0.0, ErrorCode::insufficient_pairs,
            "distances must be positive");
    logs.emplace_back(std::log(s), std::log(d));
  }
  auto [mn, mx] = std::minmax_element(logs.begin(), logs.end(),
                                      [](auto& a, auto& b) { return a.first < b.first; });
  double lo = mn->first, hi = mx->first;
  require(hi - lo > 1e-9, ErrorCode::insufficient_pairs, "source distances span no range");

  // 10th-percentile of log dist_dst within equal-width bins of log
  // dist_src, then a least-squares line through the bin quantiles.
  const int nbins = 20;
  std::vector<std::vector<double>> bins(nbins);
  for (auto [x, y] : logs) {
    int b = std::min(nbins - 1, static_cast<int>((x - lo) / (hi - lo) * nbins));
    bins[static_cast<std::size_t>(b)].push_back(y);
  }
  std::vector<double> xs, ys;
  for (int b = 0; b < nbins; ++b) {
    auto& v = bins[static_cast<std::size_t>(b)];
    if (v.size() < 5) continue;
    std::size_t k10 = static_cast<std::size_t>(0.1 * (v.size() - 1));
    std::nth_element(v.begin(), v.begin() + k10, v.end());
    xs.push_back(lo + (b + 0.5) * (hi - lo) / nbins);
    ys.push_back(v[k10]);
  }
  require(xs.size() >= 3, ErrorCode::insufficient_pairs, "too few populated bins");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double n = static_cast<double>(xs.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace biflab
