#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "core/errors.hpp"
#include "core/field.hpp"

using namespace biflab;

TEST_CASE("grid layout: row 0 is the top, spacing uniform") {
  ParameterGrid g;
  g.center = cplx(1.0, -0.5);
  g.half_width = 2.0;
  g.resolution = 17;
  CHECK(g.node(0, 0) == cplx(-1.0, 1.5));
  CHECK(g.node(16, 16) == cplx(3.0, -2.5));
  CHECK(g.node(8, 8) == g.center);
  CHECK(g.spacing() == doctest::Approx(0.25));
}

TEST_CASE("synthetic harmonic field: laplacian vanishes") {
  ParameterGrid g;
  g.half_width = 1.0;
  g.resolution = 32;
  BifurcationField f = field_from_values(g, [](cplx l) { return l.real(); });
  for (int i = 1; i + 1 < g.resolution; ++i)
    for (int j = 1; j + 1 < g.resolution; ++j)
      CHECK(std::fabs(f.laplacian[g.index(i, j)]) < 1e-6);
}

TEST_CASE("synthetic |lambda|^2 field: laplacian is 4") {
  ParameterGrid g;
  g.half_width = 1.3;
  g.resolution = 24;
  BifurcationField f = field_from_values(g, [](cplx l) { return std::norm(l); });
  for (int i = 1; i + 1 < g.resolution; ++i)
    for (int j = 1; j + 1 < g.resolution; ++j)
      CHECK(f.laplacian[g.index(i, j)] == doctest::Approx(4.0).epsilon(1e-9));
  // boundary ring carries no laplacian
  CHECK(!std::isfinite(f.laplacian[g.index(0, 5)]));
}

TEST_CASE("constant family: mask is empty") {
  RationalMap cheb(2, Poly{cplx(-2.0, 0.0), cplx(0.0, 0.0), cplx(1.0, 0.0)},
                   Poly{cplx(1.0, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0)});
  HolomorphicFamily fam = HolomorphicFamily::constant(cheb, 2.0);
  ParameterGrid g;
  g.half_width = 0.5;
  g.resolution = 16;
  BifurcationField f = compute_field(fam, g, 400, 11);
  CHECK(f.mask_count() == 0);
  CHECK(f.failed_nodes == 0);
  // shared digits + identical maps: the field is exactly constant
  for (std::size_t idx = 1; idx < f.L.size(); ++idx) CHECK(f.L[idx] == f.L[0]);
  CHECK(f.threshold >= 3.0 * f.noise_floor);
}

TEST_CASE("field determinism: same seed, same bits; thread count irrelevant") {
  HolomorphicFamily fam = HolomorphicFamily::quadratic();
  ParameterGrid g;
  g.center = cplx(-0.2, 0.1);
  g.half_width = 0.3;
  g.resolution = 16;
  BifurcationField f1 = compute_field(fam, g, 300, 5);
  setenv("BIFLAB_THREADS", "3", 1);
  BifurcationField f2 = compute_field(fam, g, 300, 5);
  unsetenv("BIFLAB_THREADS");
  for (std::size_t i = 0; i < f1.L.size(); ++i) CHECK(f1.L[i] == f2.L[i]);
  CHECK(f1.noise_floor == f2.noise_floor);
  CHECK(f1.threshold == f2.threshold);
}

TEST_CASE("mandelbrot escape classification at reference parameters") {
  ParameterGrid g;
  g.center = cplx(-0.5, 0.0);
  g.half_width = 1.75;  // nodes at exact quarter steps include -2, 0, 1
  g.resolution = 15;
  auto escaped = mandelbrot_escape(g, 2000);
  auto at = [&](cplx target) {
    for (int i = 0; i < g.resolution; ++i)
      for (int j = 0; j < g.resolution; ++j)
        if (std::abs(g.node(i, j) - target) < 1e-12) return escaped[g.index(i, j)];
    REQUIRE(false);
    return std::uint8_t{0};
  };
  CHECK(at(cplx(0.0, 0.0)) == 0);   // superattracting center: bounded
  CHECK(at(cplx(1.0, 0.0)) == 1);   // escapes
  CHECK(at(cplx(-2.0, 0.0)) == 0);  // orbit lands on the fixed point 2
}

TEST_CASE("boundary cells straddle the escape boundary; -2 is one at scale") {
  ParameterGrid g;
  g.center = cplx(-1.0, 0.0);
  g.half_width = 1.28;
  g.resolution = 129;  // h = 0.02, row through the real axis
  auto escaped = mandelbrot_escape(g, 3000);
  auto boundary = boundary_cells(escaped, g.resolution);
  // find the node at -2 exactly: column j with node == -2 on the center row
  int ci = 64;
  bool found = false;
  for (int j = 0; j < g.resolution; ++j) {
    if (std::abs(g.node(ci, j) - cplx(-2.0, 0.0)) < 1e-9) {
      CHECK(boundary[g.index(ci, j)] == 1);
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("mask agreement helper counts two-sided registration") {
  int res = 8;
  std::vector<std::uint8_t> mask(64, 0), boundary(64, 0);
  mask[8 * 3 + 3] = 1;
  boundary[8 * 3 + 4] = 1;  // one cell apart
  MaskAgreement ag = mask_agreement(mask, boundary, res, 2);
  CHECK(ag.mask_near_boundary == 1.0);
  CHECK(ag.boundary_near_mask == 1.0);
  mask[8 * 0 + 7] = 1;  // far from the boundary cell
  ag = mask_agreement(mask, boundary, res, 2);
  CHECK(ag.mask_near_boundary == doctest::Approx(0.5));
}

TEST_CASE("grid outside the family domain is rejected") {
  HolomorphicFamily fam = HolomorphicFamily::quadratic(1.0);
  ParameterGrid g;
  g.half_width = 1.0;  // corners at |lambda| = sqrt(2) > domain radius
  g.resolution = 16;
  CHECK_THROWS_AS(compute_field(fam, g, 100, 1), Error);
}
