#pragma once

#include "types.hpp"

namespace biflab {

/// Forward-mode derivative in one complex variable: value + d/dlambda.
struct Dual {
  cplx v{0.0, 0.0};
  cplx d{0.0, 0.0};

  Dual() = default;
  Dual(cplx value) : v(value) {}
  Dual(cplx value, cplx deriv) : v(value), d(deriv) {}

  static Dual variable(cplx value) { return Dual(value, cplx(1.0, 0.0)); }
};

inline Dual operator+(const Dual& a, const Dual& b) { return {a.v + b.v, a.d + b.d}; }
inline Dual operator-(const Dual& a, const Dual& b) { return {a.v - b.v, a.d - b.d}; }
inline Dual operator-(const Dual& a) { return {-a.v, -a.d}; }
inline Dual operator*(const Dual& a, const Dual& b) {
  return {a.v * b.v, a.d * b.v + a.v * b.d};
}
inline Dual operator/(const Dual& a, const Dual& b) {
  cplx q = a.v / b.v;
  return {q, (a.d - q * b.d) / b.v};
}
inline Dual operator*(cplx s, const Dual& a) { return {s * a.v, s * a.d}; }
inline Dual operator+(cplx s, const Dual& a) { return {s + a.v, a.d}; }

}  // namespace biflab
