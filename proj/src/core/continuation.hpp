#pragma once

#include <vector>

#include "cycles.hpp"
#include "family.hpp"
#include "field.hpp"

namespace biflab {

enum class NodeStatus : std::uint8_t {
  untouched = 0,
  ok = 1,
  not_repelling = 2,  // |multiplier| <= 1 + 1e-6; continuation stops here
  broken = 3,         // Newton diverged; reported, continuation routes around
  out_of_domain = 4,
};

/// Holomorphic continuation of a repelling cycle over the grid,
/// node-to-neighbor by Newton from the grid center outward.
struct CycleContinuation {
  ParameterGrid grid;
  int period = 1;
  std::vector<cplx> point;       // continued periodic point per node
  std::vector<cplx> multiplier;  // of f_lambda^p at the point
  std::vector<NodeStatus> status;
  std::vector<std::size_t> broken_nodes;

  bool ok_at(std::size_t idx) const { return status[idx] == NodeStatus::ok; }

  /// Polish the continued point at an arbitrary parameter, seeding from
  /// the nearest ok node. Returns the cycle point and multiplier.
  std::optional<PeriodicPoint> at(const HolomorphicFamily& family, cplx lambda) const;
};

/// cycle_seed must be a repelling period-p point of the center map.
/// Throws ContinuationBroken if even the center node fails.
CycleContinuation continue_repelling_cycle(const HolomorphicFamily& family, cplx cycle_seed,
                                           int period, const ParameterGrid& grid);

}  // namespace biflab
