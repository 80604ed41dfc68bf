#pragma once

#include <cmath>
#include <complex>
#include <utility>

namespace biflab {

using cplx = std::complex<double>;

/// A point on the Riemann sphere: an affine coordinate plus an
/// at-infinity flag. Finite points always carry finite coordinates.
struct SpherePoint {
  cplx z{0.0, 0.0};
  bool at_infinity = false;

  static SpherePoint infinity() { return SpherePoint{cplx(0.0, 0.0), true}; }
  static SpherePoint finite(cplx value) { return SpherePoint{value, false}; }
};

/// Homogeneous representative [x : y] scaled so max(|x|,|y|) is ~1.
struct HomogPair {
  cplx x;
  cplx y;
};

inline double sq_mag(cplx z) {
  return z.real() * z.real() + z.imag() * z.imag();
}

inline cplx sq_inv(cplx z) {  // 1/z without the __divdc3 libcall
  double inv = 1.0 / sq_mag(z);
  return {z.real() * inv, -z.imag() * inv};
}

inline HomogPair to_homog(const SpherePoint& p) {
  if (p.at_infinity) return {cplx(1.0, 0.0), cplx(0.0, 0.0)};
  if (sq_mag(p.z) <= 1.0) return {p.z, cplx(1.0, 0.0)};
  return {cplx(1.0, 0.0), sq_inv(p.z)};
}

inline SpherePoint from_homog(cplx x, cplx y) {
  double ax2 = sq_mag(x), ay2 = sq_mag(y);
  if (ay2 == 0.0 || ax2 / ay2 > 1e30) return SpherePoint::infinity();
  double inv = 1.0 / ay2;
  return SpherePoint::finite(cplx(x.real() * y.real() + x.imag() * y.imag(),
                                  x.imag() * y.real() - x.real() * y.imag()) *
                             inv);
}

/// Chordal distance |x v - y u| / (|(x,y)| |(u,v)|), normalized to [0,1].
/// Symmetric under the chart swap z -> 1/z.
inline double sphere_dist(const SpherePoint& p, const SpherePoint& q) {
  HomogPair a = to_homog(p), b = to_homog(q);
  double na = std::sqrt(sq_mag(a.x) + sq_mag(a.y));
  double nb = std::sqrt(sq_mag(b.x) + sq_mag(b.y));
  return std::sqrt(sq_mag(a.x * b.y - a.y * b.x)) / (na * nb);
}

inline double sphere_dist(cplx p, cplx q) {
  return sphere_dist(SpherePoint::finite(p), SpherePoint::finite(q));
}

}  // namespace biflab
