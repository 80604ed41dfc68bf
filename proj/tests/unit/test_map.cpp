#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "core/errors.hpp"
#include "core/rational_map.hpp"

using namespace biflab;

namespace {

RationalMap power_map(int d) {
  Poly num(static_cast<std::size_t>(d) + 1, cplx(0.0, 0.0));
  Poly den(static_cast<std::size_t>(d) + 1, cplx(0.0, 0.0));
  num[static_cast<std::size_t>(d)] = cplx(1.0, 0.0);
  den[0] = cplx(1.0, 0.0);
  return RationalMap(d, num, den);
}

RationalMap chebyshev2() {  // z^2 - 2
  return RationalMap(2, Poly{cplx(-2.0, 0.0), cplx(0.0, 0.0), cplx(1.0, 0.0)},
                     Poly{cplx(1.0, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0)});
}

RationalMap lattes4() {  // duplication map of g2=4, g3=0: (x^2+1)^2 / (4x(x^2-1))
  return RationalMap(4,
                     Poly{cplx(1.0, 0.0), cplx(0.0, 0.0), cplx(2.0, 0.0), cplx(0.0, 0.0),
                          cplx(1.0, 0.0)},
                     Poly{cplx(0.0, 0.0), cplx(-4.0, 0.0), cplx(0.0, 0.0), cplx(4.0, 0.0),
                          cplx(0.0, 0.0)});
}

RationalMap random_map(std::mt19937_64& gen, int degree) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (;;) {
    Poly num(static_cast<std::size_t>(degree) + 1), den(num.size());
    for (auto& c : num) c = cplx(dist(gen), dist(gen));
    for (auto& c : den) c = cplx(dist(gen), dist(gen));
    try {
      return RationalMap(degree, num, den);
    } catch (const Error&) {
      continue;  // resultant too small; redraw
    }
  }
}

SpherePoint invert(const SpherePoint& p) {
  if (p.at_infinity) return SpherePoint::finite(cplx(0.0, 0.0));
  if (p.z == cplx(0.0, 0.0)) return SpherePoint::infinity();
  return SpherePoint::finite(1.0 / p.z);
}

}  // namespace

TEST_CASE("evaluate: monomial fixed points") {
  RationalMap f = power_map(2);
  auto v = f.evaluate(SpherePoint::finite(cplx(2.0, 0.0)));
  CHECK(!v.at_infinity);
  CHECK(std::abs(v.z - cplx(4.0, 0.0)) < 1e-14);
  CHECK(f.evaluate(SpherePoint::infinity()).at_infinity);
}

TEST_CASE("evaluate: duplication map sends i to 0") {
  // (i^2+1)^2 / (4i(i^2-1)) = 0
  auto v = lattes4().evaluate(SpherePoint::finite(cplx(0.0, 1.0)));
  CHECK(!v.at_infinity);
  CHECK(std::abs(v.z) < 1e-14);
}

TEST_CASE("spherical derivative: reference values") {
  RationalMap sq = power_map(2);
  for (double th : {0.0, 0.7, 2.1, 4.4}) {
    SpherePoint z = SpherePoint::finite(cplx(std::cos(th), std::sin(th)));
    CHECK(sq.spherical_derivative(z) == doctest::Approx(2.0).epsilon(1e-12));
  }
  CHECK(sq.spherical_derivative(SpherePoint::finite(cplx(0.0, 0.0))) == 0.0);
  CHECK(chebyshev2().spherical_derivative(SpherePoint::finite(cplx(2.0, 0.0))) ==
        doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("chart invariance of the spherical metric data") {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int degree : {2, 3, 4}) {
    RationalMap f = random_map(gen, degree);
    RationalMap g = f.chart_swapped();
    for (int trial = 0; trial < 40; ++trial) {
      SpherePoint z = SpherePoint::finite(cplx(dist(gen), dist(gen)));
      double df = f.spherical_derivative(z);
      double dg = g.spherical_derivative(invert(z));
      CHECK(df == doctest::Approx(dg).epsilon(1e-10));
      SpherePoint w = SpherePoint::finite(cplx(dist(gen), dist(gen)));
      CHECK(sphere_dist(z, w) == doctest::Approx(sphere_dist(invert(z), invert(w)))
                                     .epsilon(1e-10));
    }
  }
}

TEST_CASE("preimages: reference fibers") {
  RationalMap sq = power_map(2);
  auto pre = sq.preimages(SpherePoint::finite(cplx(1.0, 0.0)));
  REQUIRE(pre.size() == 2);
  CHECK(((std::abs(pre[0].z - 1.0) < 1e-12 && std::abs(pre[1].z + 1.0) < 1e-12) ||
         (std::abs(pre[0].z + 1.0) < 1e-12 && std::abs(pre[1].z - 1.0) < 1e-12)));

  auto pre_inf = sq.preimages(SpherePoint::infinity());
  REQUIRE(pre_inf.size() == 2);
  CHECK(pre_inf[0].at_infinity);
  CHECK(pre_inf[1].at_infinity);

  auto pre_cheb = chebyshev2().preimages(SpherePoint::finite(cplx(2.0, 0.0)));
  REQUIRE(pre_cheb.size() == 2);
  double lo = std::min(pre_cheb[0].z.real(), pre_cheb[1].z.real());
  double hi = std::max(pre_cheb[0].z.real(), pre_cheb[1].z.real());
  CHECK(lo == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(hi == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("degree conservation: d preimages with multiplicity, random pairs") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    int degree = 2 + trial % 3;
    RationalMap f = random_map(gen, degree);
    SpherePoint w = SpherePoint::finite(cplx(dist(gen), dist(gen)));
    auto pre = f.preimages(w, 1e-7);
    CHECK(static_cast<int>(pre.size()) == degree);
    for (const auto& z : pre) CHECK(sphere_dist(f.evaluate(z), w) < 1e-7);
  }
}

TEST_CASE("critical points: reference sets") {
  auto crit_sq = power_map(2).critical_points();
  REQUIRE(crit_sq.size() == 2);
  int zeros = 0, infs = 0;
  for (const auto& c : crit_sq) {
    if (c.at_infinity) ++infs;
    else if (std::abs(c.z) < 1e-12) ++zeros;
  }
  CHECK(zeros == 1);
  CHECK(infs == 1);

  // z^2 + c has the same critical set for every c
  RationalMap g(2, Poly{cplx(0.3, -0.2), cplx(0.0, 0.0), cplx(1.0, 0.0)},
                Poly{cplx(1.0, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0)});
  auto crit_g = g.critical_points();
  REQUIRE(crit_g.size() == 2);

  // duplication map: 6 finite critical points whose forward orbits land
  // on the postcritical set {0, 1, -1, infinity}
  RationalMap lat = lattes4();
  auto crit = lat.critical_points();
  REQUIRE(crit.size() == 6);
  for (const auto& c : crit) {
    REQUIRE(!c.at_infinity);
    SpherePoint v = lat.evaluate(c);  // critical value, should be in {0, 1, -1}
    REQUIRE(!v.at_infinity);
    double d0 = std::abs(v.z);
    double d1 = std::abs(v.z - cplx(1.0, 0.0));
    double dm1 = std::abs(v.z + cplx(1.0, 0.0));
    CHECK(std::min({d0, d1, dm1}) < 1e-8);
    CHECK(lat.evaluate(v).at_infinity);  // e_i map to the fixed point at infinity
  }
}

TEST_CASE("map validity: shared roots are rejected") {
  // num = z^2, den = z (as formal degree 2): common root at 0
  CHECK_THROWS_AS(RationalMap(2, Poly{cplx(0, 0), cplx(0, 0), cplx(1, 0)},
                              Poly{cplx(0, 0), cplx(1, 0), cplx(0, 0)}),
                  Error);
}
