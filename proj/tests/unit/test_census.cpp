#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "core/census.hpp"
#include "core/errors.hpp"
#include "core/sampler.hpp"

using namespace biflab;

namespace {

RationalMap power2() {
  return RationalMap(2, Poly{cplx(0, 0), cplx(0, 0), cplx(1, 0)},
                     Poly{cplx(1, 0), cplx(0, 0), cplx(0, 0)});
}

RationalMap chebyshev2() {
  return RationalMap(2, Poly{cplx(-2.0, 0.0), cplx(0, 0), cplx(1, 0)},
                     Poly{cplx(1, 0), cplx(0, 0), cplx(0, 0)});
}

double chordal(cplx a, cplx b) {
  return std::abs(a - b) /
         (std::sqrt(1.0 + std::norm(a)) * std::sqrt(1.0 + std::norm(b)));
}

// Oracle for z^2, ball centered at the fixed point 1: the depth-n tree
// of 1 consists exactly of the 2^n-th roots of unity, where the
// spherical derivative is exactly 2. A branch returns iff
//   chordal(endpoint, 1) + kappa * r * 2^-n <= r.
std::vector<long long> census_oracle_power2(double r, double kappa, int n_max) {
  std::vector<long long> counts(static_cast<std::size_t>(n_max) + 1, 0);
  counts[0] = 1;
  for (int n = 1; n <= n_max; ++n) {
    long long total = 1LL << n;
    long long m = 0;
    double tail = kappa * r * std::pow(2.0, -n);
    for (long long k = 0; k < total; ++k) {
      double theta = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(total);
      cplx z(std::cos(theta), std::sin(theta));
      if (chordal(z, cplx(1.0, 0.0)) + tail <= r * (1.0 + 1e-12)) ++m;
    }
    counts[static_cast<std::size_t>(n)] = m;
  }
  return counts;
}

// Oracle for z^2 - 2, ball at the fixed point 2, via the angle
// semiconjugacy z = 2cos(psi): depth-n endpoints are 2cos(2 pi k / 2^n)
// and the inverse-branch derivative product follows from the forward
// chain rule along the angle orbit. Branches through the critical point
// 0 (angle hitting pi/2 mod pi) are excluded exactly as in the census.
std::vector<long long> census_oracle_chebyshev(double r, double kappa, int n_max) {
  std::vector<long long> counts(static_cast<std::size_t>(n_max) + 1, 0);
  counts[0] = 1;
  auto f_sharp = [](cplx z) {
    cplx fz = z * z - 2.0;
    return 2.0 * std::abs(z) * (1.0 + std::norm(z)) / (1.0 + std::norm(fz));
  };
  for (int n = 1; n <= n_max; ++n) {
    long long total = 1LL << n;
    for (long long k = 0; k < total; ++k) {
      // backward path angles psi_j = 2 pi k / 2^j for j = n down to 1;
      // forward orbit of the endpoint visits 2cos(2 pi k / 2^j).
      bool critical = false;
      double log_rate = 0.0;
      for (int j = n; j >= 1; --j) {
        double psi = 2.0 * M_PI * static_cast<double>(k % (1LL << j)) /
                     static_cast<double>(1LL << j);
        cplx z = 2.0 * std::cos(psi);
        double d = f_sharp(z);
        if (d < 1e-30) {
          critical = true;
          break;
        }
        log_rate -= std::log(d);
      }
      if (critical) continue;
      double psi_end = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(total);
      cplx endpoint = 2.0 * std::cos(psi_end);
      double dist = chordal(endpoint, cplx(2.0, 0.0));
      if (dist <= r && dist + kappa * r * std::exp(log_rate) <= r * (1.0 + 1e-12))
        counts[static_cast<std::size_t>(n)] += 1;
    }
  }
  return counts;
}

}  // namespace

TEST_CASE("census of z^2 at the fixed point 1 matches the exact enumeration") {
  const double r = 0.2;
  const int n_max = 12;
  CensusOptions opts;
  opts.window_chi = std::log(2.0);
  BranchCensus census = branch_census(power2(), SpherePoint::finite(cplx(1.0, 0.0)), r,
                                      n_max, opts);
  auto oracle = census_oracle_power2(r, opts.kappa, n_max);
  REQUIRE(census.counts.size() == oracle.size());
  for (int n = 0; n <= n_max; ++n) {
    INFO("depth ", n);
    CHECK(census.counts[static_cast<std::size_t>(n)] == oracle[static_cast<std::size_t>(n)]);
  }
  // frozen values from the oracle: counts for n = 0..12
  std::vector<long long> frozen = {1, 1, 1, 1, 1, 3, 7, 17, 33, 65, 131, 263, 525};
  for (int n = 0; n <= n_max; ++n)
    CHECK(oracle[static_cast<std::size_t>(n)] == frozen[static_cast<std::size_t>(n)]);

  // m(n) > 0 throughout, and log m(n) grows at slope ln 2 within 15%
  for (int n = 0; n <= n_max; ++n) CHECK(census.counts[static_cast<std::size_t>(n)] > 0);
  double slope = census.slope(4, 12);
  CHECK(std::fabs(slope - std::log(2.0)) < 0.15 * std::log(2.0));
  // rates are exactly 1/2 per step on the invariant circle
  for (int n = 1; n <= n_max; ++n) {
    CHECK(census.min_rate[static_cast<std::size_t>(n)] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(census.max_rate[static_cast<std::size_t>(n)] == doctest::Approx(0.5).epsilon(1e-9));
  }
}

TEST_CASE("census of z^2 - 2 at the fixed point 2 matches the angle oracle") {
  const double r = 0.2;
  const int n_max = 12;
  CensusOptions opts;
  opts.window_chi = std::log(2.0);
  BranchCensus census = branch_census(chebyshev2(), SpherePoint::finite(cplx(2.0, 0.0)), r,
                                      n_max, opts);
  auto oracle = census_oracle_chebyshev(r, opts.kappa, n_max);
  for (int n = 0; n <= n_max; ++n) {
    INFO("depth ", n);
    CHECK(census.counts[static_cast<std::size_t>(n)] == oracle[static_cast<std::size_t>(n)]);
  }
  double slope = census.slope(4, 12);
  CHECK(std::fabs(slope - std::log(2.0)) < 0.15 * std::log(2.0));
  // m(n) <= d^n
  for (int n = 0; n <= n_max; ++n)
    CHECK(census.counts[static_cast<std::size_t>(n)] <= (1LL << n));
}

TEST_CASE("in-window branch family keeps the exponential slope (K = 4, eps = 0.1)") {
  CensusOptions opts;
  opts.window_chi = std::log(2.0);
  for (const RationalMap& f : {power2(), chebyshev2()}) {
    SpherePoint center = SpherePoint::finite(cplx(f.num()[0].real() == 0.0 ? 1.0 : 2.0, 0.0));
    BranchCensus census = branch_census(f, center, 0.2, 12, opts);
    double slope = census.slope(4, 12, /*window=*/true);
    CHECK(std::fabs(slope - std::log(2.0)) < 0.15 * std::log(2.0));
    // window never exceeds the full count
    for (std::size_t n = 0; n < census.counts.size(); ++n)
      CHECK(census.window_counts[n] <= census.counts[n]);
  }
}

TEST_CASE("census preconditions") {
  // ball far away from the Julia set carries no measure mass
  CHECK_THROWS_AS(
      branch_census(power2(), SpherePoint::finite(cplx(5.0, 0.0)), 0.05, 4, {}),
      Error);
}
