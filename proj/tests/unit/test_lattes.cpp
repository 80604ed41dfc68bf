#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "core/errors.hpp"
#include "core/lattes.hpp"
#include "core/sampler.hpp"

using namespace biflab;

TEST_CASE("duplication formula for g2=4, g3=0 is (x^2+1)^2 / (4x(x^2-1))") {
  LattesMap lat = build_lattes({cplx(4.0, 0.0), cplx(0.0, 0.0)});
  CHECK(lat.map.degree() == 4);
  // normalized coefficient ratios must match the closed form
  // num = (x^2+1)^2 = 1 + 2x^2 + x^4, den = 4x(x^2-1) = -4x + 4x^3
  const Poly& num = lat.map.num();
  const Poly& den = lat.map.den();
  cplx scale = num[4];  // x^4 coefficient corresponds to 1 in the closed form
  CHECK(std::abs(num[0] / scale - 1.0) < 1e-12);
  CHECK(std::abs(num[1] / scale) < 1e-12);
  CHECK(std::abs(num[2] / scale - 2.0) < 1e-12);
  CHECK(std::abs(num[3] / scale) < 1e-12);
  CHECK(std::abs(den[0] / scale) < 1e-12);
  CHECK(std::abs(den[1] / scale + 4.0) < 1e-12);
  CHECK(std::abs(den[2] / scale) < 1e-12);
  CHECK(std::abs(den[3] / scale - 4.0) < 1e-12);
  CHECK(std::abs(den[4] / scale) < 1e-12);

  // denominator root: f(1) = infinity
  CHECK(lat.map.evaluate(SpherePoint::finite(cplx(1.0, 0.0))).at_infinity);
  // construction-time semiconjugacy residual
  CHECK(lat.max_semiconjugacy_residual < 1e-6);
}

TEST_CASE("degree is 4 for any valid invariants") {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  int built = 0;
  while (built < 8) {
    EllipticInvariants inv{cplx(dist(gen), dist(gen)), cplx(dist(gen), dist(gen))};
    try {
      LattesMap lat = build_lattes(inv);
      CHECK(lat.map.degree() == 4);
      CHECK(lat.max_semiconjugacy_residual < 1e-6);
      ++built;
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::degenerate_lattice);
    }
  }
}

TEST_CASE("degenerate lattice is rejected") {
  // g2^3 = 27 g3^2 at g2 = 3, g3 = 1
  CHECK_THROWS_AS(build_lattes({cplx(3.0, 0.0), cplx(1.0, 0.0)}), Error);
}

TEST_CASE("exponent minimality at random Lattes parameters") {
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> dist(-6.0, 6.0);
  int tested = 0;
  while (tested < 5) {
    EllipticInvariants inv{cplx(dist(gen), dist(gen)), cplx(dist(gen), dist(gen))};
    try {
      LattesMap lat = build_lattes(inv);
      LyapunovEstimate est = estimate_lyapunov(lat.map, 41, 50, 40000);
      CHECK(std::fabs(est.value - std::log(2.0)) < 3.0 * est.std_error + 5e-3);
      ++tested;
    } catch (const Error&) {
      continue;
    }
  }
}

TEST_CASE("critical values of the duplication map are preperiodic") {
  LattesMap lat = build_lattes({cplx(4.0, 0.0), cplx(0.0, 0.0)});
  for (const auto& c : lat.map.critical_points()) {
    SpherePoint v = lat.map.evaluate(c);
    // forward orbit of each critical value becomes (pre)periodic within 4 steps
    std::vector<SpherePoint> orbit{v};
    for (int i = 0; i < 4; ++i) orbit.push_back(lat.map.evaluate(orbit.back()));
    bool periodic = false;
    for (std::size_t i = 0; i < orbit.size() && !periodic; ++i)
      for (std::size_t j = i + 1; j < orbit.size(); ++j)
        if (sphere_dist(orbit[i], orbit[j]) < 1e-6) {
          periodic = true;
          break;
        }
    CHECK(periodic);
  }
}

TEST_CASE("perturbed family: lambda = 0 slice equals the base coefficients") {
  LattesMap lat = build_lattes({cplx(4.0, 0.0), cplx(0.0, 0.0)});
  HolomorphicFamily fam = perturbed_family(lat, 0.05);
  RationalMap at0 = fam.map_at(cplx(0.0, 0.0));
  for (int i = 0; i <= 4; ++i) {
    CHECK(std::abs(at0.num()[i] - lat.map.num()[i]) < 1e-14);
    CHECK(std::abs(at0.den()[i] - lat.map.den()[i]) < 1e-14);
  }
}

TEST_CASE("perturbed family: zero direction is the constant family") {
  LattesMap lat = build_lattes({cplx(4.0, 0.0), cplx(0.0, 0.0)});
  Poly zero(5, cplx(0.0, 0.0));
  HolomorphicFamily fam = perturbed_family(lat, zero, zero, 0.05);
  RationalMap a = fam.map_at(cplx(0.03, 0.02));
  RationalMap b = fam.map_at(cplx(0.0, 0.0));
  for (int i = 0; i <= 4; ++i) CHECK(std::abs(a.num()[i] - b.num()[i]) < 1e-14);
}

TEST_CASE("perturbed family: boundary resultant check passes at radius 0.08") {
  LattesMap lat = build_lattes({cplx(4.0, 0.0), cplx(0.0, 0.0)});
  CHECK_NOTHROW(perturbed_family(lat, 0.08));
}
