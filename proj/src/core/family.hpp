#pragma once

#include <vector>

#include "rational_map.hpp"

namespace biflab {

/// Holomorphic family of degree-d sphere endomorphisms over a disc:
/// every homogeneous coefficient is a polynomial in the parameter.
/// Validity (constant degree) is certified by a resultant check at the
/// domain center and 64 boundary points.
class HolomorphicFamily {
 public:
  HolomorphicFamily(int degree, std::vector<Poly> num_coeff_polys,
                    std::vector<Poly> den_coeff_polys, double domain_radius);

  int degree() const { return degree_; }
  double domain_radius() const { return domain_radius_; }
  const std::vector<Poly>& num_coeff_polys() const { return num_polys_; }
  const std::vector<Poly>& den_coeff_polys() const { return den_polys_; }

  /// Map at a parameter inside the closed domain disc.
  RationalMap map_at(cplx lambda) const;

  /// Coefficient values and their lambda-derivatives at lambda
  /// (unnormalized; consistent num/den scale).
  void coefficients_at(cplx lambda, Poly& num, Poly& den,
                       Poly& dnum, Poly& dden) const;

  /// z-coefficients of p'q - pq' as polynomials in lambda (fixed
  /// length 2d-1); the critical equation of the fiber maps.
  const std::vector<Poly>& wronskian_coeff_polys() const { return wron_polys_; }

  /// The constant family at a fixed map.
  static HolomorphicFamily constant(const RationalMap& map, double domain_radius);

  /// z^2 + lambda.
  static HolomorphicFamily quadratic(double domain_radius = 4.0);

 private:
  int degree_;
  std::vector<Poly> num_polys_, den_polys_;
  std::vector<Poly> wron_polys_;
  double domain_radius_;
};

}  // namespace biflab
