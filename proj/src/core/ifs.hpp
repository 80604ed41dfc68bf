#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "poly.hpp"

namespace biflab {

/// Fiber point in C^k (k = 1 or 2); unused coordinates stay zero.
using FiberVec = std::array<cplx, 2>;

/// Affine-in-z fibered contraction G(lambda, z) = M(lambda) z + b(lambda)
/// with every entry polynomial in lambda. For k = 1 only linear[0][0]
/// and offset[0] are used.
struct AffineContraction {
  std::array<std::array<Poly, 2>, 2> linear;
  std::array<Poly, 2> offset;
};

/// Fiber domain: a disc for k = 1, a max-norm polydisc for k = 2.
/// All fiber distances and contraction constants use this norm.
struct FiberBall {
  FiberVec center{cplx(0, 0), cplx(0, 0)};
  double radius = 1.0;
  double diameter() const { return 2.0 * radius; }
};

using SymbolWord = std::vector<int>;  // digits in [0, m)

/// The fibered IFS over the closed unit parameter disc. Construction
/// certifies the three contraction axioms with margin 1e-6:
///   1) G_j(D x B) stays compactly inside D x B,
///   2) images of distinct maps stay >= delta apart fiberwise,
///   3) e^{-A} <= fiber Lipschitz <= e^{-a}.
/// Affine maps make the z-direction checks exact per lambda; lambda is
/// sampled on a 32x32 polar grid of the closed disc.
class ContractionSystem {
 public:
  ContractionSystem(int k, std::vector<AffineContraction> maps, double a, double A,
                    double separation_delta, FiberBall ball);

  int fiber_dim() const { return k_; }
  int map_count() const { return static_cast<int>(maps_.size()); }
  double contraction_a() const { return a_; }
  double contraction_A() const { return A_; }
  double separation_delta() const { return delta_; }
  const FiberBall& ball() const { return ball_; }
  const std::vector<AffineContraction>& maps() const { return maps_; }

  double fiber_norm(const FiberVec& v) const;
  double fiber_dist(const FiberVec& x, const FiberVec& y) const;

  /// One application of G_j at lambda.
  FiberVec apply(int j, cplx lambda, const FiberVec& z) const;

  /// Right-to-left composition (last digit applied first).
  FiberVec compose_word(const SymbolWord& word, cplx lambda, const FiberVec& z) const;

  /// Depth-|word| graph approximation at lambda from the ball center,
  /// with the rigorous tail bound e^{-(#digits) a} diam(B).
  std::pair<FiberVec, double> graph_point(const SymbolWord& word, cplx lambda) const;

  /// Graph-point coordinates as explicit polynomials in lambda
  /// (composition of the affine maps applied to the constant center).
  std::array<Poly, 2> graph_polynomials(const SymbolWord& word) const;

 private:
  int k_;
  std::vector<AffineContraction> maps_;
  double a_, A_, delta_;
  FiberBall ball_;

  void certify() const;
};

struct SlicePoint {
  SymbolWord word;
  FiberVec point;
  double tail_bound;
};

/// All depth-p graph points at lambda0 when m^p fits the budget, else a
/// seeded uniform word subsample of exactly `budget` words.
std::vector<SlicePoint> slice_cantor(const ContractionSystem& sys, cplx lambda0, int depth,
                                     long long word_budget = 10'000'000,
                                     std::uint64_t seed = 2024);

/// Smallest pairwise fiber distance of a slice (grid-bucketed).
double min_pairwise_distance(const ContractionSystem& sys,
                             const std::vector<SlicePoint>& pts);

struct HolonomyPair {
  double dist_src;
  double dist_dst;
};

/// Distances between random graph pairs at two parameters, stratified
/// by the first-disagreement depth so the sample spans many scales.
std::vector<HolonomyPair> holonomy_pairs(const ContractionSystem& sys, cplx lambda_src,
                                         cplx lambda_dst, int depth, int pair_budget,
                                         std::uint64_t seed = 7);

/// Hypersurface in graph form: z1 = phi(lambda, z2), phi polynomial
/// (coeff[i][j] multiplies lambda^i z2^j; for k = 1 only j = 0 terms).
/// proper_range bounds where roots are searched; `proper_certified` is
/// set when pi_D(Z cap DxB) was verified to stay inside that disc.
struct Hypersurface {
  std::vector<std::vector<cplx>> coeff;
  double proper_range = 0.95;
  bool proper_certified = false;

  cplx phi(cplx lambda, cplx z2) const;
  Poly compose(const Poly& z2_of_lambda) const;  // phi(lambda, z2(lambda))
};

/// Certify pi_D({(lambda,z) in D x B : z1 = phi(lambda, z2)}) inside
/// D_{proper_range} by sampling the outer annulus; sets proper_certified.
void certify_properness(Hypersurface& Z, const ContractionSystem& sys, int samples = 4096);

/// All solutions of (graph of `word`) cap Z in the disc |lambda| <=
/// proper_range: the coordinate equation is built as an explicit
/// lambda-polynomial and solved globally, so a missed root cannot occur
/// silently. Throws AnomalyNoIntersection when Z is certified proper
/// and no root exists (Hurwitz-type existence says there must be one).
std::vector<cplx> graph_hypersurface_intersection(const ContractionSystem& sys,
                                                  const SymbolWord& word,
                                                  const Hypersurface& Z);

struct ProjectedIntersection {
  std::vector<cplx> points;
  long long words_processed = 0;
  long long anomalies = 0;
};

/// Union of intersection roots over depth-p words (subsampled beyond
/// the budget); anomalies are aggregated, not fatal.
ProjectedIntersection projected_intersection_set(const ContractionSystem& sys,
                                                 const Hypersurface& Z, int depth,
                                                 long long word_budget,
                                                 std::uint64_t seed = 2024);

}  // namespace biflab
