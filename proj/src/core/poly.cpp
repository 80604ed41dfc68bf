#include "poly.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>

#include "errors.hpp"
#include "fastmath.hpp"

namespace biflab {

cplx poly_eval(const Poly& p, cplx z) {
  if (p.empty()) return {0.0, 0.0};
  cplx acc = p.back();
  for (std::size_t i = p.size() - 1; i-- > 0;) acc = acc * z + p[i];
  return acc;
}

Dual poly_eval(const Poly& p, const Dual& z) {
  if (p.empty()) return Dual(cplx(0.0, 0.0));
  Dual acc(p.back());
  for (std::size_t i = p.size() - 1; i-- > 0;) acc = acc * z + Dual(p[i]);
  return acc;
}

std::pair<cplx, cplx> poly_eval_with_derivative(const Poly& p, cplx z) {
  cplx v(0.0, 0.0), d(0.0, 0.0);
  for (std::size_t i = p.size(); i-- > 0;) {
    d = d * z + v;
    v = v * z + p[i];
  }
  return {v, d};
}

Poly poly_derivative(const Poly& p) {
  if (p.size() <= 1) return Poly{};
  Poly out(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) out[i - 1] = double(i) * p[i];
  return out;
}

Poly poly_multiply(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return Poly{};
  Poly out(a.size() + b.size() - 1, cplx(0.0, 0.0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

Poly poly_add(const Poly& a, const Poly& b) {
  Poly out(std::max(a.size(), b.size()), cplx(0.0, 0.0));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

Poly poly_scale(const Poly& a, cplx s) {
  Poly out(a);
  for (auto& c : out) c *= s;
  return out;
}

Poly poly_reverse(const Poly& p) {
  Poly out(p.rbegin(), p.rend());
  return out;
}

double poly_max_abs_coeff(const Poly& p) {
  double m = 0.0;
  for (const auto& c : p) m = std::max(m, std::abs(c));
  return m;
}

namespace {

// ---- raw-span kernels (no allocation; hot path of the chain sampler) ----

inline void eval_raw(const cplx* c, int n, cplx z, cplx& v, cplx& d) {
  v = cplx(0.0, 0.0);
  d = cplx(0.0, 0.0);
  for (int i = n - 1; i >= 0; --i) {
    d = d * z + v;
    v = v * z + c[i];
  }
}

inline cplx eval_raw(const cplx* c, int n, cplx z) {
  cplx acc = c[n - 1];
  for (int i = n - 2; i >= 0; --i) acc = acc * z + c[i];
  return acc;
}

// squared residual budget at z: tol^2 * n * sum|c|^2 * max(1,|z|^2)^(n-1)
inline double residual_budget2(double tol2_scale2, int n, cplx z) {
  double az2 = std::max(1.0, norm2(z));
  double azn2 = 1.0;
  for (int k = 0; k < n - 1; ++k) azn2 *= az2;
  return tol2_scale2 * azn2;
}

// Newton corrections with early exit once the residual meets the
// budget; keeps whichever iterate has the smallest residual. Returns
// whether the budget was met.
bool polish_root(const cplx* c, int n, cplx& z, int max_steps, double tol2_scale2) {
  cplx v, d;
  eval_raw(c, n, z, v, d);
  double best = norm2(v);
  cplx bestz = z, cur = z;
  if (best <= residual_budget2(tol2_scale2, n, cur)) return true;
  for (int s = 0; s < max_steps; ++s) {
    if (norm2(d) == 0.0) break;
    cur -= fast_div(v, d);
    eval_raw(c, n, cur, v, d);
    if (norm2(v) < best) {
      best = norm2(v);
      bestz = cur;
    }
    if (best <= residual_budget2(tol2_scale2, n, bestz)) {
      z = bestz;
      return true;
    }
  }
  z = bestz;
  return best <= residual_budget2(tol2_scale2, n, bestz);
}

void roots_quadratic(const cplx* p, cplx* out) {
  // p0 + p1 z + p2 z^2, p2 != 0; stable splitting avoids cancellation.
  cplx a = p[2], b = p[1], c = p[0];
  cplx disc = fast_sqrt(b * b - 4.0 * a * c);
  if (std::real(std::conj(b) * disc) < 0.0) disc = -disc;
  cplx q = -0.5 * (b + disc);
  out[0] = fast_div(q, a);
  out[1] = (norm2(q) > 0.0) ? fast_div(c, q) : -out[0] - fast_div(b, a);
}

void roots_cubic(const cplx* p, cplx* out) {
  cplx a = p[3];
  cplx b = fast_div(p[2], a), c = fast_div(p[1], a), d = fast_div(p[0], a);
  cplx shift = -b / 3.0;
  cplx q = c - b * b / 3.0;
  cplx r = d + 2.0 * b * b * b / 27.0 - b * c / 3.0;
  // t^3 + q t + r = 0
  cplx disc = fast_sqrt(r * r / 4.0 + q * q * q / 27.0);
  cplx u3 = -r / 2.0 + disc;
  cplx u3b = -r / 2.0 - disc;
  if (norm2(u3b) > norm2(u3)) u3 = u3b;
  const cplx w(-0.5, std::sqrt(3.0) / 2.0);
  if (norm2(u3) == 0.0) {
    cplx t0 = fast_cbrt(-r);
    out[0] = t0 + shift;
    out[1] = w * t0 + shift;
    out[2] = w * w * t0 + shift;
    return;
  }
  cplx u = fast_cbrt(u3);
  for (int k = 0; k < 3; ++k) {
    out[k] = u - fast_div(q, 3.0 * u) + shift;
    u *= w;
  }
}

void roots_quartic(const cplx* p, cplx* out) {
  // Ferrari: depress, resolvent cubic, split into two quadratics.
  cplx a = p[4];
  cplx b = fast_div(p[3], a), c = fast_div(p[2], a), d = fast_div(p[1], a),
       e = fast_div(p[0], a);
  cplx shift = -b / 4.0;
  cplx b2 = b * b;
  cplx pp = c - 3.0 * b2 / 8.0;
  cplx qq = d - b * c / 2.0 + b2 * b / 8.0;
  cplx rr = e - b * d / 4.0 + b2 * c / 16.0 - 3.0 * b2 * b2 / 256.0;
  if (fast_abs(qq) < 1e-30 * (1.0 + fast_abs(pp) + fast_abs(rr))) {
    cplx quad[3] = {rr, pp, cplx(1.0, 0.0)};
    cplx ys[2];
    roots_quadratic(quad, ys);
    for (int i = 0; i < 2; ++i) {
      cplx s = fast_sqrt(ys[i]);
      out[2 * i] = s + shift;
      out[2 * i + 1] = -s + shift;
    }
    return;
  }
  cplx res[4] = {-qq * qq / 8.0, pp * pp / 4.0 - rr, pp, cplx(1.0, 0.0)};
  cplx ms[3];
  roots_cubic(res, ms);
  cplx m = ms[0];
  for (int i = 1; i < 3; ++i)
    if (norm2(ms[i]) > norm2(m)) m = ms[i];
  cplx s = fast_sqrt(2.0 * m);
  if (norm2(s) == 0.0) s = cplx(1e-150, 0.0);
  cplx half_q = fast_div(qq, 2.0 * s);
  cplx t1 = pp / 2.0 + m - half_q;
  cplx t2 = pp / 2.0 + m + half_q;
  cplx quad1[3] = {t1, s, cplx(1.0, 0.0)};
  cplx quad2[3] = {t2, -s, cplx(1.0, 0.0)};
  cplx r1[2], r2[2];
  roots_quadratic(quad1, r1);
  roots_quadratic(quad2, r2);
  out[0] = r1[0] + shift;
  out[1] = r1[1] + shift;
  out[2] = r2[0] + shift;
  out[3] = r2[1] + shift;
}

void roots_companion(const cplx* p, int deg, cplx* out) {
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
  cplx lead = p[deg];
  for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -p[i] / lead;
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = cplx(1.0, 0.0);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(comp, false);
  if (solver.info() != Eigen::Success)
    fail(ErrorCode::root_finding_failure, "companion eigensolver did not converge");
  for (int i = 0; i < deg; ++i) out[i] = solver.eigenvalues()[i];
}

constexpr int kStackDegree = 15;

}  // namespace

int poly_roots_raw(const cplx* coeffs, int formal_degree, SpherePoint* out,
                   const RootSolveOptions& opts) {
  require(formal_degree >= 0, ErrorCode::invalid_argument, "negative degree");
  double maxc2 = 0.0;
  for (int i = 0; i <= formal_degree; ++i) maxc2 = std::max(maxc2, norm2(coeffs[i]));
  if (maxc2 == 0.0)
    fail(ErrorCode::root_finding_failure, "identically zero polynomial");

  const double lead_cut2 = opts.degenerate_leading * opts.degenerate_leading * maxc2;
  int eff = formal_degree;
  while (eff > 0 && norm2(coeffs[eff]) <= lead_cut2) --eff;

  int idx = 0;
  for (int i = eff; i < formal_degree; ++i) out[idx++] = SpherePoint::infinity();
  if (eff == 0) return formal_degree;

  cplx stack_roots[kStackDegree];
  std::vector<cplx> heap_roots;
  cplx* finite = stack_roots;
  if (eff > kStackDegree) {
    heap_roots.resize(static_cast<std::size_t>(eff));
    finite = heap_roots.data();
  }

  switch (eff) {
    case 1: finite[0] = fast_div(-coeffs[0], coeffs[1]); break;
    case 2: roots_quadratic(coeffs, finite); break;
    case 3: roots_cubic(coeffs, finite); break;
    case 4: roots_quartic(coeffs, finite); break;
    default: roots_companion(coeffs, eff, finite); break;
  }
  const int n = eff + 1;
  double coeff_norm2 = 0.0;
  for (int i = 0; i < n; ++i) coeff_norm2 += norm2(coeffs[i]);
  const double scale2 = std::max(n * coeff_norm2, 1e-300);
  const double tol = opts.polish_tolerance;

  bool all_ok = true;
  for (int i = 0; i < eff; ++i)
    all_ok &= polish_root(coeffs, n, finite[i], opts.polish_steps, tol * tol * scale2);

  if (!all_ok && eff >= 2 && eff <= 4) {
    // fast path lost digits; retry through the eigenvalue solver
    roots_companion(coeffs, eff, finite);
    all_ok = true;
    for (int i = 0; i < eff; ++i)
      all_ok &= polish_root(coeffs, n, finite[i], opts.polish_steps + 2, 1e-12 * scale2);
  }
  if (!all_ok)
    fail(ErrorCode::root_finding_failure, "root residuals did not converge");

  for (int i = 0; i < eff; ++i) out[idx++] = SpherePoint::finite(finite[i]);
  return formal_degree;
}

std::vector<SpherePoint> poly_roots(const Poly& coeffs, const RootSolveOptions& opts) {
  require(!coeffs.empty(), ErrorCode::invalid_argument, "empty coefficient list");
  const int formal_degree = static_cast<int>(coeffs.size()) - 1;
  std::vector<SpherePoint> result(static_cast<std::size_t>(formal_degree));
  if (formal_degree == 0) {
    if (poly_max_abs_coeff(coeffs) == 0.0)
      fail(ErrorCode::root_finding_failure, "identically zero polynomial");
    return result;
  }
  poly_roots_raw(coeffs.data(), formal_degree, result.data(), opts);
  return result;
}

cplx resultant(const Poly& p, const Poly& q) {
  require(p.size() == q.size() && p.size() >= 2, ErrorCode::invalid_argument,
          "resultant needs equal formal degrees >= 1");
  const int d = static_cast<int>(p.size()) - 1;
  const int n = 2 * d;
  Eigen::MatrixXcd syl = Eigen::MatrixXcd::Zero(n, n);
  for (int r = 0; r < d; ++r)
    for (int i = 0; i <= d; ++i) {
      syl(r, r + i) = p[d - i];
      syl(d + r, r + i) = q[d - i];
    }
  return syl.partialPivLu().determinant();
}

}  // namespace biflab
