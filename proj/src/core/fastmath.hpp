#pragma once

#include <cmath>

#include "types.hpp"

namespace biflab {

// Magnitude helpers that avoid the hypot libcall. Safe for the
// coefficient scales used here (|z| well below 1e150).
inline double fast_abs(cplx z) {
  return std::sqrt(z.real() * z.real() + z.imag() * z.imag());
}

inline double norm2(cplx z) {
  return z.real() * z.real() + z.imag() * z.imag();
}

/// Division without the __divdc3 libcall; fine away from the extreme
/// exponent range (|b| in (1e-150, 1e150)).
inline cplx fast_div(cplx a, cplx b) {
  double inv = 1.0 / norm2(b);
  return {(a.real() * b.real() + a.imag() * b.imag()) * inv,
          (a.imag() * b.real() - a.real() * b.imag()) * inv};
}

/// Principal square root without the std::sqrt(complex) slow path.
inline cplx fast_sqrt(cplx z) {
  double x = z.real(), y = z.imag();
  double m = fast_abs(z);
  double t = std::sqrt(0.5 * (m + std::fabs(x)));
  if (t == 0.0) return {0.0, 0.0};
  if (x >= 0.0) return {t, y / (2.0 * t)};
  return {std::fabs(y) / (2.0 * t), std::copysign(t, y)};
}

/// Principal cube root via one Newton correction on a polar seed.
inline cplx fast_cbrt(cplx z) {
  double m = fast_abs(z);
  if (m == 0.0) return {0.0, 0.0};
  double th = std::atan2(z.imag(), z.real());
  double r = std::cbrt(m);
  cplx w(r * std::cos(th / 3.0), r * std::sin(th / 3.0));
  // w -= (w^3 - z) / (3 w^2)
  cplx w2 = w * w;
  w -= (w2 * w - z) / (3.0 * w2);
  return w;
}

}  // namespace biflab
