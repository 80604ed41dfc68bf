#include "continuation.hpp"

#include <cmath>
#include <deque>

#include "errors.hpp"
#include "fastmath.hpp"

namespace biflab {

namespace {
constexpr double kRepellingMargin = 1.0 + 1e-6;
}

CycleContinuation continue_repelling_cycle(const HolomorphicFamily& family, cplx cycle_seed,
                                           int period, const ParameterGrid& grid) {
  require(period >= 1, ErrorCode::invalid_argument, "period must be >= 1");
  CycleContinuation cont;
  cont.grid = grid;
  cont.period = period;
  cont.point.assign(grid.size(), cplx(0.0, 0.0));
  cont.multiplier.assign(grid.size(), cplx(0.0, 0.0));
  cont.status.assign(grid.size(), NodeStatus::untouched);

  const int res = grid.resolution;
  const int ci = res / 2, cj = res / 2;

  auto solve_node = [&](int i, int j, cplx seed) -> bool {
    std::size_t idx = grid.index(i, j);
    cplx lambda = grid.node(i, j);
    if (fast_abs(lambda) > family.domain_radius()) {
      cont.status[idx] = NodeStatus::out_of_domain;
      return false;
    }
    RationalMap map = family.map_at(lambda);
    auto sol = polish_periodic(map, period, seed);
    if (!sol) {
      cont.status[idx] = NodeStatus::broken;
      cont.broken_nodes.push_back(idx);
      return false;
    }
    cont.point[idx] = sol->point;
    cont.multiplier[idx] = sol->multiplier;
    if (std::abs(sol->multiplier) <= kRepellingMargin) {
      cont.status[idx] = NodeStatus::not_repelling;
      return false;  // marked; continuation does not proceed through it
    }
    cont.status[idx] = NodeStatus::ok;
    return true;
  };

  if (!solve_node(ci, cj, cycle_seed))
    fail(ErrorCode::continuation_broken,
         "cycle seed did not continue at the grid center (node " +
             std::to_string(grid.index(ci, cj)) + ")");

  std::deque<std::pair<int, int>> queue;
  queue.emplace_back(ci, cj);
  const int di[4] = {-1, 1, 0, 0};
  const int dj[4] = {0, 0, -1, 1};
  while (!queue.empty()) {
    auto [i, j] = queue.front();
    queue.pop_front();
    cplx seed = cont.point[grid.index(i, j)];
    for (int k = 0; k < 4; ++k) {
      int ni = i + di[k], nj = j + dj[k];
      if (ni < 0 || nj < 0 || ni >= res || nj >= res) continue;
      if (cont.status[grid.index(ni, nj)] != NodeStatus::untouched) continue;
      if (solve_node(ni, nj, seed)) queue.emplace_back(ni, nj);
    }
  }
  return cont;
}

std::optional<PeriodicPoint> CycleContinuation::at(const HolomorphicFamily& family,
                                                   cplx lambda) const {
  // nearest ok node by Chebyshev distance rings around the closest node
  const int res = grid.resolution;
  double h = grid.spacing();
  cplx rel = (lambda - grid.node(0, 0)) / h;  // col = re, row = -im
  int j0 = std::clamp(static_cast<int>(std::lround(rel.real())), 0, res - 1);
  int i0 = std::clamp(static_cast<int>(std::lround(-rel.imag())), 0, res - 1);
  for (int r = 0; r < res; ++r) {
    for (int i = std::max(0, i0 - r); i <= std::min(res - 1, i0 + r); ++i) {
      for (int j = std::max(0, j0 - r); j <= std::min(res - 1, j0 + r); ++j) {
        if (std::max(std::abs(i - i0), std::abs(j - j0)) != r) continue;
        std::size_t idx = grid.index(i, j);
        if (status[idx] != NodeStatus::ok) continue;
        RationalMap map = family.map_at(lambda);
        return polish_periodic(map, period, point[idx]);
      }
    }
  }
  return std::nullopt;
}

}  // namespace biflab
