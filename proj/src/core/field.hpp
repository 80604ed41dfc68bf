#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "family.hpp"
#include "sampler.hpp"

namespace biflab {

/// Square node grid over a parameter rectangle. Row 0 is the top row
/// (maximal imaginary part); spacing h = 2*half_width/(resolution-1).
struct ParameterGrid {
  cplx center{0.0, 0.0};
  double half_width = 1.0;
  int resolution = 64;

  double spacing() const { return 2.0 * half_width / (resolution - 1); }
  cplx node(int row, int col) const {
    double c = 0.5 * (resolution - 1);
    return center + spacing() * cplx(col - c, c - row);
  }
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * resolution + col;
  }
  std::size_t size() const {
    return static_cast<std::size_t>(resolution) * resolution;
  }
};

/// L(lambda) on a grid with its 5-point discrete Laplacian and the
/// thresholded support mask. Failed nodes carry NaN and never enter the
/// mask. threshold = max(3*noise_floor, 0.05 * p99|laplacian|).
struct BifurcationField {
  ParameterGrid grid;
  std::vector<double> L;          // row-major
  std::vector<double> std_error;
  std::vector<double> laplacian;  // NaN on the boundary ring and bad cells
  std::vector<std::uint8_t> mask;
  double noise_floor = 0.0;
  double threshold = 0.0;
  long long failed_nodes = 0;

  std::size_t mask_count() const;
};

struct FieldOptions {
  int burn_in = 50;
  /// Edge length of the control patch used for the noise floor: the
  /// full pipeline rerun on a conjugacy-twisted copy of the center map,
  /// whose true exponent is exactly constant.
  int control_patch = 16;
  /// Binding margin of the shared itinerary: a node takes the preimage
  /// nearest the reference state when the runner-up is at least this
  /// factor farther, else the digit rule decides.
  double shadow_confidence = 2.0;
};

/// Monte Carlo Lyapunov field with common random numbers: one digit
/// stream (from `seed`) shared by every node, so L varies smoothly in
/// lambda and the stencil Laplacian measures curvature rather than
/// sampling noise.
BifurcationField compute_field(const HolomorphicFamily& family, const ParameterGrid& grid,
                               long long mc_samples, std::uint64_t seed,
                               const FieldOptions& opts = {});

/// Assemble Laplacian + mask from given values (synthetic fields,
/// tests). noise_floor is taken as given.
BifurcationField field_from_values(const ParameterGrid& grid,
                                   const std::function<double(cplx)>& value,
                                   double noise_floor = 0.0);

/// Escape-time classification of z^2 + lambda on the grid nodes
/// (true = escaped within max_iter at radius 2).
std::vector<std::uint8_t> mandelbrot_escape(const ParameterGrid& grid, int max_iter);

/// Cells whose 4-neighborhood mixes escaping and bounded nodes.
std::vector<std::uint8_t> boundary_cells(const std::vector<std::uint8_t>& escaped,
                                         int resolution);

struct MaskAgreement {
  double mask_near_boundary = 0.0;  // fraction of mask cells near a boundary cell
  double boundary_near_mask = 0.0;  // fraction of boundary cells near a mask cell
  long long mask_cells = 0;
  long long boundary_cell_count = 0;
};

/// Two-sided registration of the field mask against an oracle boundary
/// within a Chebyshev cell radius.
MaskAgreement mask_agreement(const std::vector<std::uint8_t>& mask,
                             const std::vector<std::uint8_t>& boundary,
                             int resolution, int cell_radius = 2);

}  // namespace biflab
