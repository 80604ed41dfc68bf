#pragma once

#include <vector>

#include "poly.hpp"
#include "types.hpp"

namespace biflab {

/// Degree-d endomorphism of the Riemann sphere as a homogeneous pair
/// [P : Q]. Coefficients are stored as affine lists of length d+1
/// (ascending powers) and jointly normalized so max |coeff| = 1.
/// Construction rejects pairs whose resultant vanishes relative to the
/// coefficient scale: those drop degree.
class RationalMap {
 public:
  RationalMap(int degree, Poly num, Poly den);

  int degree() const { return degree_; }
  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  const Poly& wronskian() const { return wron_; }

  /// |resultant| of the normalized pair; > resultant_floor() by construction.
  double abs_resultant() const { return abs_resultant_; }
  static double resultant_floor() { return 1e-10; }

  SpherePoint evaluate(const SpherePoint& z) const;

  /// Norm of the derivative in the spherical (chordal) metric,
  /// |(x,y)|^2 |W(x,y)| / (d (|P|^2 + |Q|^2)); chart-independent and
  /// total on the sphere. In the affine chart this is
  /// |f'(z)| (1+|z|^2) / (1+|f(z)|^2).
  double spherical_derivative(const SpherePoint& z) const;

  /// Affine derivative f'(z) = (P'Q - PQ')/Q^2 at a finite point.
  cplx affine_derivative(cplx z) const;

  /// The d preimages of w, with multiplicity, including points at
  /// infinity when the fiber polynomial drops degree. Each returned
  /// point satisfies sphere_dist(f(z), w) < tol.
  std::vector<SpherePoint> preimages(const SpherePoint& w, double tol = 1e-9) const;

  /// Allocation-free preimage solve for hot loops; out is resized to
  /// degree() once and reused. check_residual toggles the per-root
  /// sphere-distance verification.
  void preimages_into(const SpherePoint& w, double tol,
                      std::vector<SpherePoint>& out, bool check_residual = true) const;

  /// The 2d-2 critical points (roots of the homogeneous Wronskian).
  std::vector<SpherePoint> critical_points() const;

  /// Conjugate by the chart swap s(z) = 1/z: s o f o s.
  RationalMap chart_swapped() const;

 private:
  int degree_;
  Poly num_, den_;       // length degree_+1, jointly max-normalized
  Poly num_rev_, den_rev_;
  Poly wron_, wron_rev_; // homogeneous Wronskian, fixed length 2d-1
  double abs_resultant_ = 0.0;
};

/// Evaluation helper shared with the chain samplers: image of the
/// homogeneous pair under (P, Q), renormalized.
HomogPair apply_homog(const RationalMap& f, const HomogPair& p);

}  // namespace biflab
