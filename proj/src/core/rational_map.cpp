#include "rational_map.hpp"

#include <algorithm>

#include "errors.hpp"
#include "fastmath.hpp"

namespace biflab {

namespace {

// W = P'Q - PQ' padded to the full homogeneous length 2d-1. The affine
// Wronskian of the forms satisfies W_hom(z,1) = d * (p'q - pq'), and the
// constant factor d is irrelevant for roots; we keep p'q - pq' and fold
// the factor d into the derivative formula.
Poly affine_wronskian(const Poly& num, const Poly& den, int degree) {
  Poly w = poly_add(poly_multiply(poly_derivative(num), den),
                    poly_scale(poly_multiply(num, poly_derivative(den)), cplx(-1.0, 0.0)));
  w.resize(2 * static_cast<std::size_t>(degree) - 1, cplx(0.0, 0.0));
  return w;
}

}  // namespace

RationalMap::RationalMap(int degree, Poly num, Poly den) : degree_(degree) {
  require(degree >= 1, ErrorCode::invalid_argument, "degree must be >= 1");
  require(num.size() == static_cast<std::size_t>(degree) + 1 &&
              den.size() == static_cast<std::size_t>(degree) + 1,
          ErrorCode::invalid_argument, "coefficient lists must have length degree+1");
  double scale = std::max(poly_max_abs_coeff(num), poly_max_abs_coeff(den));
  require(scale > 0.0, ErrorCode::invalid_argument, "all coefficients vanish");
  num_ = poly_scale(num, 1.0 / scale);
  den_ = poly_scale(den, 1.0 / scale);
  abs_resultant_ = std::abs(resultant(num_, den_));
  require(abs_resultant_ > resultant_floor(), ErrorCode::invalid_argument,
          "numerator and denominator share a root (degenerate degree)");
  num_rev_ = poly_reverse(num_);
  den_rev_ = poly_reverse(den_);
  wron_ = affine_wronskian(num_, den_, degree_);
  wron_rev_ = poly_reverse(wron_);
}

HomogPair apply_homog(const RationalMap& f, const HomogPair& p) {
  // Work in whichever affine chart keeps the argument inside the unit
  // disc, then renormalize the image pair.
  cplx x, y;
  if (norm2(p.y) >= norm2(p.x)) {
    cplx z = p.x / p.y;
    x = poly_eval(f.num(), z);
    y = poly_eval(f.den(), z);
  } else {
    cplx u = p.y / p.x;
    x = poly_eval(poly_reverse(f.num()), u);
    y = poly_eval(poly_reverse(f.den()), u);
  }
  double m = std::max(fast_abs(x), fast_abs(y));
  if (m == 0.0) return {cplx(0.0, 0.0), cplx(0.0, 0.0)};
  return {x / m, y / m};
}

SpherePoint RationalMap::evaluate(const SpherePoint& z) const {
  HomogPair p = to_homog(z);
  cplx x, y;
  if (norm2(p.y) >= norm2(p.x)) {
    cplx w = fast_div(p.x, p.y);
    x = poly_eval(num_, w);
    y = poly_eval(den_, w);
  } else {
    cplx u = fast_div(p.y, p.x);
    x = poly_eval(num_rev_, u);
    y = poly_eval(den_rev_, u);
  }
  return from_homog(x, y);
}

double RationalMap::spherical_derivative(const SpherePoint& z) const {
  HomogPair p = to_homog(z);
  cplx pv, qv, wv;
  if (norm2(p.y) >= norm2(p.x)) {
    cplx w = fast_div(p.x, p.y);
    pv = poly_eval(num_, w);
    qv = poly_eval(den_, w);
    wv = poly_eval(wron_, w);
  } else {
    cplx u = fast_div(p.y, p.x);
    pv = poly_eval(num_rev_, u);
    qv = poly_eval(den_rev_, u);
    wv = poly_eval(wron_rev_, u);
  }
  double n2 = norm2(p.x) + norm2(p.y);
  double denom = norm2(pv) + norm2(qv);
  if (denom == 0.0)
    fail(ErrorCode::root_finding_failure, "indeterminate point: P and Q both vanish");
  // wron_ stores (p'q - pq'); the homogeneous Wronskian is d times that.
  return n2 * fast_abs(wv) / denom;
}

cplx RationalMap::affine_derivative(cplx z) const {
  auto [pv, pd] = poly_eval_with_derivative(num_, z);
  auto [qv, qd] = poly_eval_with_derivative(den_, z);
  cplx q2 = qv * qv;
  return (pd * qv - pv * qd) / q2;
}

std::vector<SpherePoint> RationalMap::preimages(const SpherePoint& w, double tol) const {
  std::vector<SpherePoint> roots;
  preimages_into(w, tol, roots);
  return roots;
}

void RationalMap::preimages_into(const SpherePoint& w, double tol,
                                 std::vector<SpherePoint>& out, bool check_residual) const {
  require(tol > 0.0, ErrorCode::invalid_argument, "tolerance must be positive");
  HomogPair t = to_homog(w);
  // fiber polynomial  t.y * P - t.x * Q, formal degree d
  constexpr int kMaxStack = 15;
  cplx fiber[kMaxStack + 1];
  std::vector<cplx> fiber_heap;
  cplx* fc = fiber;
  if (degree_ > kMaxStack) {
    fiber_heap.resize(static_cast<std::size_t>(degree_) + 1);
    fc = fiber_heap.data();
  }
  for (int i = 0; i <= degree_; ++i) fc[i] = t.y * num_[static_cast<std::size_t>(i)] -
                                             t.x * den_[static_cast<std::size_t>(i)];
  out.resize(static_cast<std::size_t>(degree_));
  poly_roots_raw(fc, degree_, out.data());
  if (check_residual) {
    for (const auto& r : out)
      if (sphere_dist(evaluate(r), w) > tol)
        fail(ErrorCode::root_finding_failure, "preimage failed the residual check");
  }
}

std::vector<SpherePoint> RationalMap::critical_points() const {
  return poly_roots(wron_);
}

RationalMap RationalMap::chart_swapped() const {
  return RationalMap(degree_, den_rev_, num_rev_);
}

}  // namespace biflab
