#pragma once

#include <vector>

#include "dual.hpp"
#include "types.hpp"

namespace biflab {

/// Dense polynomial with complex coefficients, ascending powers.
/// Trailing zero coefficients are meaningful: a vector of length d+1
/// represents a binary form of formal degree d, so a vanishing top
/// coefficient encodes a root at infinity.
using Poly = std::vector<cplx>;

cplx poly_eval(const Poly& p, cplx z);
Dual poly_eval(const Poly& p, const Dual& z);

/// Evaluate p and p' in one pass.
std::pair<cplx, cplx> poly_eval_with_derivative(const Poly& p, cplx z);

Poly poly_derivative(const Poly& p);
Poly poly_multiply(const Poly& a, const Poly& b);
Poly poly_add(const Poly& a, const Poly& b);
Poly poly_scale(const Poly& a, cplx s);

/// Reverse the coefficient list of a formal degree (len-1) polynomial:
/// the chart swap z -> 1/z on homogeneous forms.
Poly poly_reverse(const Poly& p);

double poly_max_abs_coeff(const Poly& p);

struct RootSolveOptions {
  double polish_tolerance = 1e-12;   // Newton polishing target
  int polish_steps = 2;
  double degenerate_leading = 1e-14; // relative cut for degree drop
};

/// All roots of the formal degree (coeffs.size()-1) polynomial on the
/// sphere, with multiplicity. Degree drops at the top are reported as
/// roots at infinity. Closed forms are used through degree 4 and
/// companion-matrix eigenvalues above that; every finite root gets two
/// Newton polishing steps and a residual check, with the eigenvalue
/// solver as fallback when a fast path fails the check.
/// Throws RootFindingFailure if no path produces verified roots.
std::vector<SpherePoint> poly_roots(const Poly& coeffs,
                                    const RootSolveOptions& opts = {});

/// Allocation-free variant for hot loops: writes exactly formal_degree
/// points into out. coeffs has formal_degree+1 entries.
int poly_roots_raw(const cplx* coeffs, int formal_degree, SpherePoint* out,
                   const RootSolveOptions& opts = {});

/// Resultant of two binary forms of formal degree d given by affine
/// coefficient lists of length d+1 (Sylvester determinant). Vanishes
/// exactly when the forms share a root on the sphere.
cplx resultant(const Poly& p, const Poly& q);

}  // namespace biflab
