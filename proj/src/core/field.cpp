#include "field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.hpp"
#include "fastmath.hpp"
#include "parallel.hpp"

namespace biflab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void compute_laplacian(BifurcationField& f) {
  const int res = f.grid.resolution;
  const double h2 = f.grid.spacing() * f.grid.spacing();
  f.laplacian.assign(f.grid.size(), kNaN);
  for (int i = 1; i + 1 < res; ++i) {
    for (int j = 1; j + 1 < res; ++j) {
      double c = f.L[f.grid.index(i, j)];
      double up = f.L[f.grid.index(i - 1, j)];
      double dn = f.L[f.grid.index(i + 1, j)];
      double le = f.L[f.grid.index(i, j - 1)];
      double ri = f.L[f.grid.index(i, j + 1)];
      double lap = (up + dn + le + ri - 4.0 * c) / h2;
      f.laplacian[f.grid.index(i, j)] = lap;  // NaN propagates from bad cells
    }
  }
}

void threshold_mask(BifurcationField& f) {
  std::vector<double> mags;
  mags.reserve(f.laplacian.size());
  for (double v : f.laplacian)
    if (std::isfinite(v)) mags.push_back(std::fabs(v));
  double p99 = 0.0;
  if (!mags.empty()) {
    std::size_t k = static_cast<std::size_t>(0.99 * (mags.size() - 1));
    std::nth_element(mags.begin(), mags.begin() + k, mags.end());
    p99 = mags[k];
  }
  f.threshold = std::max(3.0 * f.noise_floor, 0.05 * p99);
  f.mask.assign(f.grid.size(), 0);
  for (std::size_t i = 0; i < f.laplacian.size(); ++i) {
    double v = f.laplacian[i];
    f.mask[i] = (std::isfinite(v) && std::fabs(v) > f.threshold) ? 1 : 0;
  }
}

double median_abs_finite(const std::vector<double>& xs) {
  std::vector<double> mags;
  for (double v : xs)
    if (std::isfinite(v)) mags.push_back(std::fabs(v));
  if (mags.empty()) return 0.0;
  std::size_t mid = mags.size() / 2;
  std::nth_element(mags.begin(), mags.begin() + mid, mags.end());
  return mags[mid];
}

// Noise floor: the estimator pipeline rerun on a control family whose
// true exponent is exactly constant. The constant family itself is
// useless as a control under shared digits (its field is identically
// constant), so the control conjugates the center map by the moebius
// rescaling z -> (1 + 0.3 (lambda - center)/half_width) z: conjugate
// maps share their exponent, so every Laplacian the control produces
// is pipeline noise, with live lambda-dependent branch selection at the
// same spacing, sample count, and digit stream.
double control_noise_floor(const HolomorphicFamily& family, const ParameterGrid& grid,
                           long long mc_samples, std::uint64_t seed,
                           const FieldOptions& opts) {
  RationalMap center_map = family.map_at(grid.center);
  const int d = center_map.degree();
  const cplx twist = cplx(0.3, 0.0) / grid.half_width;
  // g_lambda(z) = s^{-1} f(s z) with s = 1 + twist (lambda - center),
  // cleared to polynomial coefficients: num_i = p_i s^i, den_i = q_i s^{i+1}
  Poly s_poly = {cplx(1.0, 0.0) - twist * grid.center, twist};
  std::vector<Poly> num_polys, den_polys;
  Poly s_pow = {cplx(1.0, 0.0)};
  for (int i = 0; i <= d; ++i) {
    num_polys.push_back(poly_scale(s_pow, center_map.num()[static_cast<std::size_t>(i)]));
    den_polys.push_back(poly_scale(poly_multiply(s_pow, s_poly),
                                   center_map.den()[static_cast<std::size_t>(i)]));
    s_pow = poly_multiply(s_pow, s_poly);
  }
  HolomorphicFamily control(d, std::move(num_polys), std::move(den_polys),
                            family.domain_radius());

  const int res = std::min(opts.control_patch, grid.resolution);
  ParameterGrid patch;
  patch.center = grid.center;
  patch.half_width = 0.5 * grid.spacing() * (res - 1);  // same node spacing
  patch.resolution = res;
  const std::size_t n = patch.size();
  std::vector<double> L(n, kNaN);
  DigitStream shared =
      DigitStream::make(seed, static_cast<std::size_t>(opts.burn_in) + mc_samples);
  std::vector<SpherePoint> reference =
      chain_states(control.map_at(patch.center), shared,
                   static_cast<long long>(opts.burn_in) + mc_samples);
  parallel_for(n, [&](std::size_t idx) {
    int row = static_cast<int>(idx) / res;
    int col = static_cast<int>(idx) % res;
    try {
      RationalMap map = control.map_at(patch.node(row, col));
      L[idx] = lyapunov_stream(map, shared, opts.burn_in, mc_samples, &reference,
                               opts.shadow_confidence).value;
    } catch (const Error&) {
      // leave NaN
    }
  });
  const double h2 = grid.spacing() * grid.spacing();
  std::vector<double> lap;
  lap.reserve(n);
  for (int i = 1; i + 1 < res; ++i)
    for (int j = 1; j + 1 < res; ++j) {
      std::size_t c = static_cast<std::size_t>(i) * res + j;
      lap.push_back((L[c - res] + L[c + res] + L[c - 1] + L[c + 1] - 4.0 * L[c]) / h2);
    }
  return median_abs_finite(lap);
}

}  // namespace

std::size_t BifurcationField::mask_count() const {
  std::size_t n = 0;
  for (auto m : mask) n += m;
  return n;
}

BifurcationField compute_field(const HolomorphicFamily& family, const ParameterGrid& grid,
                               long long mc_samples, std::uint64_t seed,
                               const FieldOptions& opts) {
  require(grid.resolution >= 16, ErrorCode::invalid_argument, "resolution must be >= 16");
  require(mc_samples >= 1, ErrorCode::invalid_argument, "mc_samples must be >= 1");
  // one stencil margin inside the family domain
  double corner = fast_abs(grid.center) + std::sqrt(2.0) * (grid.half_width + grid.spacing());
  require(corner <= family.domain_radius() * (1.0 + 1e-9), ErrorCode::out_of_domain,
          "grid (with stencil margin) exceeds the family domain disc");

  BifurcationField f;
  f.grid = grid;
  f.L.assign(grid.size(), kNaN);
  f.std_error.assign(grid.size(), kNaN);

  DigitStream shared =
      DigitStream::make(seed, static_cast<std::size_t>(opts.burn_in) + mc_samples);

  // one shared itinerary: the digit-driven chain at the grid center,
  // shadowed by every node so the branch binding varies continuously in
  // lambda wherever the fibers move holomorphically
  std::vector<SpherePoint> reference =
      chain_states(family.map_at(grid.center), shared,
                   static_cast<long long>(opts.burn_in) + mc_samples);

  parallel_for(grid.size(), [&](std::size_t idx) {
    int row = static_cast<int>(idx) / grid.resolution;
    int col = static_cast<int>(idx) % grid.resolution;
    try {
      RationalMap map = family.map_at(grid.node(row, col));
      LyapunovEstimate est = lyapunov_stream(map, shared, opts.burn_in, mc_samples,
                                             &reference, opts.shadow_confidence);
      f.L[idx] = est.value;
      f.std_error[idx] = est.std_error;
    } catch (const Error&) {
      // NaN cell, excluded from the mask
    }
  });
  for (double v : f.L)
    if (!std::isfinite(v)) ++f.failed_nodes;

  compute_laplacian(f);
  f.noise_floor = control_noise_floor(family, grid, mc_samples, seed, opts);
  threshold_mask(f);
  return f;
}

BifurcationField field_from_values(const ParameterGrid& grid,
                                   const std::function<double(cplx)>& value,
                                   double noise_floor) {
  BifurcationField f;
  f.grid = grid;
  f.L.assign(grid.size(), kNaN);
  f.std_error.assign(grid.size(), 0.0);
  for (int i = 0; i < grid.resolution; ++i)
    for (int j = 0; j < grid.resolution; ++j)
      f.L[grid.index(i, j)] = value(grid.node(i, j));
  compute_laplacian(f);
  f.noise_floor = noise_floor;
  threshold_mask(f);
  return f;
}

std::vector<std::uint8_t> mandelbrot_escape(const ParameterGrid& grid, int max_iter) {
  require(max_iter >= 1, ErrorCode::invalid_argument, "max_iter must be >= 1");
  std::vector<std::uint8_t> escaped(grid.size(), 0);
  parallel_for(grid.size(), [&](std::size_t idx) {
    int row = static_cast<int>(idx) / grid.resolution;
    int col = static_cast<int>(idx) % grid.resolution;
    cplx c = grid.node(row, col);
    cplx z(0.0, 0.0);
    for (int it = 0; it < max_iter; ++it) {
      z = z * z + c;
      if (norm2(z) > 4.0) {
        escaped[idx] = 1;
        break;
      }
    }
  });
  return escaped;
}

std::vector<std::uint8_t> boundary_cells(const std::vector<std::uint8_t>& escaped,
                                         int resolution) {
  std::vector<std::uint8_t> boundary(escaped.size(), 0);
  auto at = [&](int i, int j) -> std::uint8_t {
    return escaped[static_cast<std::size_t>(i) * resolution + j];
  };
  for (int i = 0; i < resolution; ++i) {
    for (int j = 0; j < resolution; ++j) {
      std::uint8_t v = at(i, j);
      bool mixed = false;
      if (i > 0 && at(i - 1, j) != v) mixed = true;
      if (i + 1 < resolution && at(i + 1, j) != v) mixed = true;
      if (j > 0 && at(i, j - 1) != v) mixed = true;
      if (j + 1 < resolution && at(i, j + 1) != v) mixed = true;
      // a boundary cell is a bounded cell touching escape (or vice versa);
      // mark the bounded side so the curve is one cell thick
      boundary[static_cast<std::size_t>(i) * resolution + j] = (mixed && v == 0) ? 1 : 0;
    }
  }
  return boundary;
}

MaskAgreement mask_agreement(const std::vector<std::uint8_t>& mask,
                             const std::vector<std::uint8_t>& boundary,
                             int resolution, int cell_radius) {
  auto near_any = [&](const std::vector<std::uint8_t>& target, int i, int j) {
    for (int di = -cell_radius; di <= cell_radius; ++di) {
      for (int dj = -cell_radius; dj <= cell_radius; ++dj) {
        int ii = i + di, jj = j + dj;
        if (ii < 0 || jj < 0 || ii >= resolution || jj >= resolution) continue;
        if (target[static_cast<std::size_t>(ii) * resolution + jj]) return true;
      }
    }
    return false;
  };
  MaskAgreement out;
  long long mask_hits = 0, boundary_hits = 0;
  for (int i = 0; i < resolution; ++i) {
    for (int j = 0; j < resolution; ++j) {
      std::size_t idx = static_cast<std::size_t>(i) * resolution + j;
      if (mask[idx]) {
        ++out.mask_cells;
        if (near_any(boundary, i, j)) ++mask_hits;
      }
      if (boundary[idx]) {
        ++out.boundary_cell_count;
        if (near_any(mask, i, j)) ++boundary_hits;
      }
    }
  }
  out.mask_near_boundary =
      out.mask_cells ? static_cast<double>(mask_hits) / out.mask_cells : 1.0;
  out.boundary_near_mask =
      out.boundary_cell_count ? static_cast<double>(boundary_hits) / out.boundary_cell_count : 1.0;
  return out;
}

}  // namespace biflab
