#include "lattes.hpp"

#include <cmath>

#include "errors.hpp"
#include "fastmath.hpp"

namespace biflab {

namespace {

constexpr int kSeriesOrder = 30;
constexpr double kResidualBound = 1e-6;

void require_nondegenerate(const EllipticInvariants& inv) {
  double scale = std::max({norm2(inv.g2) * fast_abs(inv.g2), 27.0 * norm2(inv.g3), 1e-300});
  require(fast_abs(inv.discriminant()) > 1e-8 * scale, ErrorCode::degenerate_lattice,
          "discriminant g2^3 - 27 g3^2 vanishes (degenerate lattice)");
}

}  // namespace

WeierstrassSeries::WeierstrassSeries(const EllipticInvariants& invariants) : inv(invariants) {
  c.assign(kSeriesOrder + 1, cplx(0.0, 0.0));
  c[2] = inv.g2 / 20.0;
  c[3] = inv.g3 / 28.0;
  for (int k = 4; k <= kSeriesOrder; ++k) {
    cplx acc(0.0, 0.0);
    for (int m = 2; m <= k - 2; ++m) acc += c[m] * c[k - m];
    c[k] = acc * (3.0 / ((2.0 * k + 1.0) * (k - 3.0)));
  }
}

cplx WeierstrassSeries::p(cplx u) const {
  cplx u2 = u * u;
  cplx acc(0.0, 0.0);
  // sum c_k u^{2k-2}, Horner in u^2
  for (int k = kSeriesOrder; k >= 2; --k) acc = (acc + c[k]) * u2;
  return fast_div(cplx(1.0, 0.0), u2) + acc;
}

cplx WeierstrassSeries::p_prime(cplx u) const {
  cplx u2 = u * u;
  cplx acc(0.0, 0.0);
  // sum (2k-2) c_k u^{2k-3}
  for (int k = kSeriesOrder; k >= 2; --k) acc = acc * u2 + (2.0 * k - 2.0) * c[k];
  acc *= u;
  return fast_div(cplx(-2.0, 0.0), u2 * u) + acc;
}

double WeierstrassSeries::equation_residual(cplx u) const {
  cplx pv = p(u);
  cplx dv = p_prime(u);
  cplx lhs = dv * dv;
  cplx rhs = 4.0 * pv * pv * pv - inv.g2 * pv - inv.g3;
  double scale = std::max({fast_abs(lhs), fast_abs(rhs), 1.0});
  return fast_abs(lhs - rhs) / scale;
}

LattesMap build_lattes(const EllipticInvariants& inv) {
  require_nondegenerate(inv);
  const cplx g2 = inv.g2, g3 = inv.g3;

  // Expanded duplication formula:
  //   f(x) = (4x^4 + 2 g2 x^2 + 8 g3 x + g2^2/4) / (16x^3 - 4 g2 x - 4 g3)
  Poly num = {g2 * g2 / 4.0, 8.0 * g3, 2.0 * g2, cplx(0.0, 0.0), cplx(4.0, 0.0)};
  Poly den = {-4.0 * g3, -4.0 * g2, cplx(0.0, 0.0), cplx(16.0, 0.0), cplx(0.0, 0.0)};
  RationalMap map(4, num, den);

  // Semiconjugacy check f(p(u)) = p(2u) on an annulus grid inside the
  // series injectivity disc. The sampling scale shrinks until the
  // differential-equation residual certifies convergence at every node
  // (and at 2u); the identity then extends by analytic continuation.
  WeierstrassSeries wp(inv);
  double scale_est = 0.9 * std::min({1.85 * std::pow(4.0 / std::max(fast_abs(g2), 1e-12), 0.25),
                                     1.53 * std::pow(4.0 / std::max(fast_abs(g3), 1e-12), 1.0 / 6.0),
                                     3.0});
  double max_residual = 0.0;
  bool certified = false;
  for (int shrink = 0; shrink < 10 && !certified; ++shrink) {
    certified = true;
    max_residual = 0.0;
    for (int ir = 0; ir < 4 && certified; ++ir) {
      double r = scale_est * (0.25 + 0.0625 * ir);
      for (int ia = 0; ia < 10 && certified; ++ia) {
        double th = 2.0 * M_PI * (ia + 0.37) / 10.0;
        cplx u = r * cplx(std::cos(th), std::sin(th));
        if (wp.equation_residual(u) > 1e-9 || wp.equation_residual(2.0 * u) > 1e-9) {
          certified = false;
          break;
        }
        cplx x = wp.p(u);
        SpherePoint fx = map.evaluate(SpherePoint::finite(x));
        if (fx.at_infinity) {
          certified = false;  // sampled too close to a pole; shrink
          break;
        }
        double res = fast_abs(fx.z - wp.p(2.0 * u));
        max_residual = std::max(max_residual, res);
      }
    }
    if (certified && max_residual < kResidualBound) break;
    certified = false;
    scale_est *= 0.65;
  }
  require(certified, ErrorCode::degenerate_lattice,
          "Weierstrass series did not certify the duplication identity");

  return LattesMap{inv, map, max_residual};
}

HolomorphicFamily perturbed_family(const LattesMap& base, const Poly& direction_num,
                                   const Poly& direction_den, double radius) {
  require(direction_num.size() == 5 && direction_den.size() == 5,
          ErrorCode::invalid_argument, "direction must have the degree-4 coefficient shape");
  require(radius > 0.0, ErrorCode::invalid_argument, "radius must be > 0");
  std::vector<Poly> num_polys, den_polys;
  for (int i = 0; i <= 4; ++i) {
    num_polys.push_back(Poly{base.map.num()[static_cast<std::size_t>(i)],
                             direction_num[static_cast<std::size_t>(i)]});
    den_polys.push_back(Poly{base.map.den()[static_cast<std::size_t>(i)],
                             direction_den[static_cast<std::size_t>(i)]});
  }
  return HolomorphicFamily(4, std::move(num_polys), std::move(den_polys), radius);
}

HolomorphicFamily perturbed_family(const LattesMap& base, double radius) {
  Poly dnum(5, cplx(0.0, 0.0)), dden(5, cplx(0.0, 0.0));
  dnum[4] = cplx(1.0, 0.0);
  return perturbed_family(base, dnum, dden, radius);
}

}  // namespace biflab
