#pragma once

#include "family.hpp"
#include "rational_map.hpp"

namespace biflab {

/// Lattice data (g2, g3) behind a Weierstrass parametrization; the
/// discriminant g2^3 - 27 g3^2 must be nonzero relative to scale.
struct EllipticInvariants {
  cplx g2;
  cplx g3;

  cplx discriminant() const { return g2 * g2 * g2 - 27.0 * g3 * g3; }
};

/// Degree-4 endomorphism obtained from the duplication formula
///   f(x) = (6x^2 - g2/2)^2 / (4(4x^3 - g2 x - g3)) - 2x,
/// i.e. f(p(u)) = p(2u) for the Weierstrass function p of (g2, g3).
struct LattesMap {
  EllipticInvariants invariants;
  RationalMap map;
  double max_semiconjugacy_residual = 0.0;  // from the construction check
};

/// Weierstrass p and p' by the Laurent series about 0 (coefficients
/// from the standard quadratic recursion, order ~30). Only valid well
/// inside the lattice injectivity radius; build_lattes verifies each
/// sample through the differential equation residual.
struct WeierstrassSeries {
  explicit WeierstrassSeries(const EllipticInvariants& inv);

  cplx p(cplx u) const;
  cplx p_prime(cplx u) const;

  /// |p'^2 - (4p^3 - g2 p - g3)| relative to scale; small iff the series
  /// converged at u.
  double equation_residual(cplx u) const;

  EllipticInvariants inv;
  std::vector<cplx> c;  // c[k] for k >= 2, term c_k u^{2k-2}
};

/// Build the duplication map and verify the semiconjugacy
/// f(p(u)) = p(2u) on a sample grid (residual < 1e-6 required).
LattesMap build_lattes(const EllipticInvariants& inv);

/// Linear perturbation family: coefficients(base) + lambda * direction,
/// degree conservation certified on the closed disc of the given radius.
HolomorphicFamily perturbed_family(const LattesMap& base, const Poly& direction_num,
                                   const Poly& direction_den, double radius);

/// Default perturbation: unit direction on the numerator's top coefficient.
HolomorphicFamily perturbed_family(const LattesMap& base, double radius);

}  // namespace biflab
