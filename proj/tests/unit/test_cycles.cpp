#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/continuation.hpp"
#include "core/cycles.hpp"
#include "core/errors.hpp"

using namespace biflab;

namespace {

RationalMap quad(cplx c) {
  return RationalMap(2, Poly{c, cplx(0.0, 0.0), cplx(1.0, 0.0)},
                     Poly{cplx(1.0, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0)});
}

}  // namespace

TEST_CASE("fixed points of z^2 inside radius 2") {
  auto pts = find_periodic(quad(cplx(0.0, 0.0)), 1, cplx(0.0, 0.0), 2.0);
  REQUIRE(pts.size() == 2);
  CHECK(std::abs(pts[0].point) < 1e-10);
  CHECK(std::abs(pts[0].multiplier) < 1e-9);
  CHECK(std::abs(pts[1].point - cplx(1.0, 0.0)) < 1e-10);
  CHECK(std::abs(pts[1].multiplier - cplx(2.0, 0.0)) < 1e-9);
}

TEST_CASE("fixed points of z^2 - 2") {
  auto pts = find_periodic(quad(cplx(-2.0, 0.0)), 1, cplx(0.0, 0.0), 3.0);
  REQUIRE(pts.size() == 2);
  CHECK(std::abs(pts[0].point - cplx(-1.0, 0.0)) < 1e-10);
  CHECK(std::abs(pts[0].multiplier - cplx(-2.0, 0.0)) < 1e-9);
  CHECK(std::abs(pts[1].point - cplx(2.0, 0.0)) < 1e-10);
  CHECK(std::abs(pts[1].multiplier - cplx(4.0, 0.0)) < 1e-9);
}

TEST_CASE("primitive 2-cycle of z^2 has multiplier 4") {
  auto pts = find_periodic(quad(cplx(0.0, 0.0)), 2, cplx(0.0, 0.0), 1.5);
  // period-2 solutions include both fixed points; the primitive cycle is
  // the pair of nontrivial cube roots of unity
  int primitive = 0;
  RationalMap f = quad(cplx(0.0, 0.0));
  for (const auto& p : pts) {
    SpherePoint image = f.evaluate(SpherePoint::finite(p.point));
    if (sphere_dist(image, SpherePoint::finite(p.point)) > 1e-8) {
      ++primitive;
      CHECK(std::abs(p.point - cplx(1.0, 0.0)) > 0.5);
      CHECK(std::abs(std::abs(p.point) - 1.0) < 1e-10);
      CHECK(std::abs(p.multiplier - cplx(4.0, 0.0)) < 1e-8);
    }
  }
  CHECK(primitive == 2);
}

TEST_CASE("continuation of the repelling fixed point matches the closed form") {
  HolomorphicFamily fam = HolomorphicFamily::quadratic();
  ParameterGrid grid;
  grid.center = cplx(0.0, 0.0);
  grid.half_width = 0.2;
  grid.resolution = 17;
  // beta(lambda) = (1 + sqrt(1-4 lambda)) / 2, repelling branch near 0
  cplx seed = cplx(1.0, 0.0);
  CycleContinuation cont = continue_repelling_cycle(fam, seed, 1, grid);
  for (int i = 0; i < grid.resolution; ++i) {
    for (int j = 0; j < grid.resolution; ++j) {
      std::size_t idx = grid.index(i, j);
      REQUIRE(cont.status[idx] == NodeStatus::ok);
      cplx lambda = grid.node(i, j);
      cplx beta = 0.5 * (1.0 + std::sqrt(cplx(1.0, 0.0) - 4.0 * lambda));
      CHECK(std::abs(cont.point[idx] - beta) < 1e-9);
      CHECK(std::abs(cont.multiplier[idx] - 2.0 * beta) < 1e-9);
    }
  }
}

TEST_CASE("continuation marks non-repelling nodes instead of crossing them") {
  HolomorphicFamily fam = HolomorphicFamily::quadratic();
  ParameterGrid grid;
  grid.center = cplx(0.20, 0.0);
  grid.half_width = 0.1;  // contains the parabolic parameter 1/4
  grid.resolution = 33;
  CycleContinuation cont =
      continue_repelling_cycle(fam, 0.5 * (1.0 + std::sqrt(cplx(1.0, 0.0) - 0.8)), 1, grid);
  long long marked = 0;
  for (auto s : cont.status)
    if (s == NodeStatus::not_repelling) ++marked;
  CHECK(marked >= 1);  // the cells at the parabolic point lose repelling
}

TEST_CASE("constant family: continued point is constant") {
  RationalMap f = quad(cplx(-2.0, 0.0));
  HolomorphicFamily fam = HolomorphicFamily::constant(f, 1.0);
  ParameterGrid grid;
  grid.center = cplx(0.0, 0.0);
  grid.half_width = 0.3;
  grid.resolution = 17;
  CycleContinuation cont = continue_repelling_cycle(fam, cplx(2.0, 0.0), 1, grid);
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    REQUIRE(cont.status[idx] == NodeStatus::ok);
    CHECK(std::abs(cont.point[idx] - cplx(2.0, 0.0)) < 1e-10);
  }
}

TEST_CASE("cycle polish at off-grid parameters") {
  HolomorphicFamily fam = HolomorphicFamily::quadratic();
  ParameterGrid grid;
  grid.center = cplx(0.0, 0.0);
  grid.half_width = 0.2;
  grid.resolution = 17;
  CycleContinuation cont = continue_repelling_cycle(fam, cplx(1.0, 0.0), 1, grid);
  cplx lambda(0.0731, -0.0419);
  auto pp = cont.at(fam, lambda);
  REQUIRE(pp.has_value());
  cplx beta = 0.5 * (1.0 + std::sqrt(cplx(1.0, 0.0) - 4.0 * lambda));
  CHECK(std::abs(pp->point - beta) < 1e-10);
}
