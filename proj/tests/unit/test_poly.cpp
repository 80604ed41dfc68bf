#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <complex>
#include <random>

#include "core/poly.hpp"
#include "core/rational_map.hpp"
#include "core/sampler.hpp"

using namespace biflab;

namespace {

std::vector<cplx> finite_sorted(const std::vector<SpherePoint>& pts) {
  std::vector<cplx> out;
  for (const auto& p : pts)
    if (!p.at_infinity) out.push_back(p.z);
  std::sort(out.begin(), out.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return out;
}

int count_infinite(const std::vector<SpherePoint>& pts) {
  int n = 0;
  for (const auto& p : pts) n += p.at_infinity ? 1 : 0;
  return n;
}

}  // namespace

TEST_CASE("quadratic roots are exact on simple inputs") {
  Poly p = {cplx(-1.0, 0.0), cplx(0.0, 0.0), cplx(1.0, 0.0)};  // z^2 - 1
  auto roots = finite_sorted(poly_roots(p));
  REQUIRE(roots.size() == 2);
  CHECK(std::abs(roots[0] - cplx(-1.0, 0.0)) < 1e-14);
  CHECK(std::abs(roots[1] - cplx(1.0, 0.0)) < 1e-14);
}

TEST_CASE("degree drop reports roots at infinity") {
  // formal degree 3, actual degree 1: two roots at infinity
  Poly p = {cplx(2.0, 0.0), cplx(1.0, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0)};
  auto roots = poly_roots(p);
  REQUIRE(roots.size() == 3);
  CHECK(count_infinite(roots) == 2);
  auto fin = finite_sorted(roots);
  REQUIRE(fin.size() == 1);
  CHECK(std::abs(fin[0] - cplx(-2.0, 0.0)) < 1e-14);
}

TEST_CASE("random polynomials: residuals vanish after polishing") {
  std::mt19937_64 gen(12345);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int degree = 2; degree <= 8; ++degree) {
    for (int trial = 0; trial < 25; ++trial) {
      Poly p(degree + 1);
      for (auto& c : p) c = cplx(dist(gen), dist(gen));
      auto roots = poly_roots(p);
      REQUIRE(static_cast<int>(roots.size()) == degree);
      for (const auto& r : roots) {
        if (r.at_infinity) continue;
        double scale = 0.0, zp = 1.0;
        for (const auto& c : p) {
          scale += std::abs(c) * zp;
          zp *= std::max(1.0, std::abs(r.z));
        }
        CHECK(std::abs(poly_eval(p, r.z)) <= 1e-8 * scale);
      }
    }
  }
}

TEST_CASE("quartic with multiple roots") {
  // (z^2 - 2z + 1)(z^2 + 1) = z^4 - 2z^3 + 2z^2 - 2z + 1
  Poly p = {cplx(1.0, 0.0), cplx(-2.0, 0.0), cplx(2.0, 0.0), cplx(-2.0, 0.0), cplx(1.0, 0.0)};
  auto roots = finite_sorted(poly_roots(p));
  REQUIRE(roots.size() == 4);
  int near_one = 0, near_i = 0, near_minus_i = 0;
  for (cplx r : roots) {
    if (std::abs(r - cplx(1.0, 0.0)) < 1e-5) ++near_one;
    if (std::abs(r - cplx(0.0, 1.0)) < 1e-7) ++near_i;
    if (std::abs(r - cplx(0.0, -1.0)) < 1e-7) ++near_minus_i;
  }
  CHECK(near_one == 2);
  CHECK(near_i == 1);
  CHECK(near_minus_i == 1);
}

TEST_CASE("resultant detects shared roots including at infinity") {
  // p = z^2 - 1, q = z - 1 as formal degree 2 (common root z=1)
  Poly p = {cplx(-1.0, 0.0), cplx(0.0, 0.0), cplx(1.0, 0.0)};
  Poly q = {cplx(-1.0, 0.0), cplx(1.0, 0.0), cplx(0.0, 0.0)};
  CHECK(std::abs(resultant(p, q)) < 1e-14);
  // both top coefficients vanish: shared root at infinity
  Poly r = {cplx(1.0, 0.0), cplx(1.0, 0.0), cplx(0.0, 0.0)};
  Poly s = {cplx(2.0, 0.0), cplx(1.0, 0.0), cplx(0.0, 0.0)};
  CHECK(std::abs(resultant(r, s)) < 1e-14);
  // generic pair: nonzero
  Poly u = {cplx(-1.0, 0.0), cplx(0.0, 0.0), cplx(1.0, 0.0)};
  Poly v = {cplx(1.0, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0)};
  CHECK(std::abs(resultant(u, v)) > 0.5);
}
