#pragma once

#include <cstdint>
#include <vector>

#include "rational_map.hpp"
#include "rng.hpp"

namespace biflab {

/// States retained from a backward-orbit Markov chain targeting the
/// measure of maximal entropy: from a generic start, repeatedly jump to
/// a uniformly chosen preimage and drop the first burn_in states.
struct MeasureSample {
  std::vector<SpherePoint> points;
  std::uint64_t seed = 0;
  int burn_in = 0;
  long long chain_length = 0;
  long long rejected_near_critical = 0;
};

struct LyapunovEstimate {
  double value = 0.0;      // nats
  double std_error = 0.0;  // sample std dev / sqrt(n)
  long long sample_count = 0;
  long long rejected_near_critical = 0;
};

/// Backward chain driven by an externally supplied digit stream; the
/// same digits reused across parameters give estimates that vary
/// smoothly in the parameter.
class BackwardChain {
 public:
  explicit BackwardChain(const RationalMap& map);

  /// Advance one step using digit u in [0,1); returns the new state.
  /// States whose spherical derivative is below the near-critical floor
  /// are rejected and redrawn deterministically (counted).
  SpherePoint step(double u);

  /// Advance one step shadowing a reference state: pick the preimage
  /// nearest to `ref` when the binding is unambiguous (runner-up at
  /// least `confidence` times farther), else fall back to the digit
  /// rule. Transports one shared itinerary continuously in the
  /// parameter wherever the preimages move holomorphically.
  SpherePoint step_shadow(double u, const SpherePoint& ref, double confidence);

  const SpherePoint& state() const { return state_; }
  /// Spherical derivative at the current state (cached by step()).
  double state_derivative() const { return state_derivative_; }
  long long rejected() const { return rejected_; }

  static constexpr double near_critical_floor = 1e-30;

 private:
  enum class Kind { poly_quadratic, generic };

  SpherePoint step_generic(double u);

  const RationalMap& map_;
  SpherePoint state_;
  double state_derivative_ = 0.0;
  std::vector<SpherePoint> pre_;  // scratch, reused across steps
  long long rejected_ = 0;
  Kind kind_ = Kind::generic;
  // closed-form invariants of the polynomial-quadratic step
  cplx qp_center_, qp_u0_, qp_v0_, qp_scale_, qp_da_, qp_db_;
};

MeasureSample sample_measure(const RationalMap& map, std::uint64_t seed,
                             int burn_in, long long n);

/// Mean of log spherical_derivative over the sample points.
LyapunovEstimate lyapunov(const RationalMap& map, const MeasureSample& sample);

/// Streaming equivalent of sample_measure + lyapunov: consumes
/// digits[0 .. burn_in+n) without storing the chain. With a reference
/// chain the branch binding shadows it (see step_shadow).
LyapunovEstimate lyapunov_stream(const RationalMap& map, const DigitStream& digits,
                                 int burn_in, long long n,
                                 const std::vector<SpherePoint>* reference = nullptr,
                                 double confidence = 2.0);

/// The digit-driven chain states themselves (burn_in + n of them),
/// used as the shared shadowing reference of a field computation.
std::vector<SpherePoint> chain_states(const RationalMap& map, const DigitStream& digits,
                                      long long count);

/// Convenience: fresh digit stream from seed, then lyapunov_stream.
LyapunovEstimate estimate_lyapunov(const RationalMap& map, std::uint64_t seed,
                                   int burn_in, long long n);

}  // namespace biflab
