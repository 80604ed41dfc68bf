#pragma once

#include <cstdint>
#include <vector>

#include "continuation.hpp"
#include "dual.hpp"
#include "family.hpp"
#include "field.hpp"

namespace biflab {

/// Parameter where a tracked critical orbit lands exactly on the
/// continued repelling cycle: f_lambda^n0(c(lambda)) = sigma(lambda).
struct MisiurewiczHit {
  cplx lambda;
  int critical_index = 0;
  int n0 = 0;
  int cycle_period = 1;
  double residual = 0.0;   // sphere distance at the solution
  cplx multiplier{0.0, 0.0};  // of the cycle at lambda
};

struct DetectorOptions {
  double residual_bound = 1e-8;
  double witness_floor = 1e-4;   // |g_n| at a control parameter
  int witness_controls = 8;
  int max_newton_iter = 40;
  int max_seeds_per_n = 256;     // best seeds kept after the pruning pass
  std::uint64_t seed = 12345;    // for witness controls only
};

/// Newton solves g_n(lambda) = f_lambda^n(c(lambda)) - sigma(lambda) = 0
/// for every tracked critical point and every n in [n_lo, n_hi], from
/// grid-node seeds. Keeps solutions with residual < residual_bound,
/// repelling cycle multiplier, in-grid location, and a non-degeneracy
/// witness (|g_n| > witness_floor at one of the random controls).
/// Critical points at infinity at the grid center are not tracked.
std::vector<MisiurewiczHit> find_misiurewicz(const HolomorphicFamily& family,
                                             const CycleContinuation& sigma,
                                             const ParameterGrid& seeds, int n_lo, int n_hi,
                                             const DetectorOptions& opts = {});

struct AvalancheRow {
  int n = 0;
  double min_abs_lambda = 0.0;
  long long hit_count = 0;
};

/// Smallest |lambda| per orbit length; rows only for n with hits.
std::vector<AvalancheRow> avalanche_summary(const std::vector<MisiurewiczHit>& hits,
                                            int n_lo, int n_hi);

/// Charted forward-orbit evaluator with d/dlambda, used by the detector
/// and exposed for tests: points are stored as v or 1/v so Horner
/// evaluation always happens inside the unit disc.
class OrbitTracker {
 public:
  explicit OrbitTracker(const HolomorphicFamily& family);

  struct State {
    Dual v;
    bool inverted = false;
  };

  /// Refresh coefficient values/derivatives at lambda. Returns false if
  /// the map degenerates there.
  bool set_lambda(cplx lambda);

  int critical_count() const { return static_cast<int>(crit_base_.size()); }

  /// Tracked critical point (Newton on the Wronskian from the previous
  /// position); false if tracking failed at this lambda.
  bool critical_point(int index, State& out);

  /// One application of f_lambda.
  void step(State& s) const;

  SpherePoint point(const State& s) const;

 private:
  const HolomorphicFamily& family_;
  std::vector<cplx> crit_base_;    // finite critical points at the center
  std::vector<cplx> crit_last_;    // continuity seeds
  cplx lambda_{0.0, 0.0};
  std::vector<Dual> num_, den_, num_rev_, den_rev_;  // coefficient duals
  std::vector<cplx> wron_val_, wron_dl_;             // Wronskian coeffs at lambda
};

}  // namespace biflab
