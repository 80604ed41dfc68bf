#include "family.hpp"

#include <cmath>

#include "errors.hpp"
#include "fastmath.hpp"

namespace biflab {

namespace {

constexpr int kBoundaryProbes = 64;

// z-coefficients of p'q - pq' with lambda-polynomial arithmetic.
std::vector<Poly> wronskian_polys(const std::vector<Poly>& num,
                                  const std::vector<Poly>& den, int degree) {
  const std::size_t wlen = 2 * static_cast<std::size_t>(degree) - 1;
  std::vector<Poly> w(wlen, Poly{});
  for (int i = 0; i <= degree; ++i) {
    for (int j = 0; j <= degree; ++j) {
      // term (i * num_i den_j - j * num_i den_j) z^{i+j-1} from p'q - pq'
      int k = i + j - 1;
      if (k < 0 || k >= static_cast<int>(wlen)) continue;
      double factor = static_cast<double>(i - j);
      if (factor == 0.0) continue;
      Poly term = poly_scale(poly_multiply(num[static_cast<std::size_t>(i)],
                                           den[static_cast<std::size_t>(j)]),
                             cplx(factor, 0.0));
      w[static_cast<std::size_t>(k)] = poly_add(w[static_cast<std::size_t>(k)], term);
    }
  }
  return w;
}

}  // namespace

HolomorphicFamily::HolomorphicFamily(int degree, std::vector<Poly> num_coeff_polys,
                                     std::vector<Poly> den_coeff_polys,
                                     double domain_radius)
    : degree_(degree),
      num_polys_(std::move(num_coeff_polys)),
      den_polys_(std::move(den_coeff_polys)),
      domain_radius_(domain_radius) {
  require(degree_ >= 2, ErrorCode::invalid_argument, "family degree must be >= 2");
  require(domain_radius_ > 0.0, ErrorCode::invalid_argument, "domain radius must be > 0");
  require(num_polys_.size() == static_cast<std::size_t>(degree_) + 1 &&
              den_polys_.size() == static_cast<std::size_t>(degree_) + 1,
          ErrorCode::invalid_argument, "need degree+1 coefficient polynomials each");
  wron_polys_ = wronskian_polys(num_polys_, den_polys_, degree_);

  // Degree conservation over the closed domain disc: the resultant must
  // stay away from zero at the center and on the boundary circle.
  auto check = [&](cplx lambda) {
    Poly num(num_polys_.size()), den(den_polys_.size());
    for (std::size_t i = 0; i < num.size(); ++i) {
      num[i] = poly_eval(num_polys_[i], lambda);
      den[i] = poly_eval(den_polys_[i], lambda);
    }
    double scale = std::max(poly_max_abs_coeff(num), poly_max_abs_coeff(den));
    if (scale <= 0.0)
      fail(ErrorCode::degeneration_on_disc, "family coefficients vanish on the domain");
    num = poly_scale(num, 1.0 / scale);
    den = poly_scale(den, 1.0 / scale);
    if (std::abs(resultant(num, den)) <= RationalMap::resultant_floor())
      fail(ErrorCode::degeneration_on_disc,
           "family degree drops inside the domain disc; shrink the radius");
  };
  check(cplx(0.0, 0.0));
  for (int k = 0; k < kBoundaryProbes; ++k) {
    double th = 2.0 * M_PI * k / kBoundaryProbes;
    check(domain_radius_ * cplx(std::cos(th), std::sin(th)));
  }
}

RationalMap HolomorphicFamily::map_at(cplx lambda) const {
  require(fast_abs(lambda) <= domain_radius_ * (1.0 + 1e-12),
          ErrorCode::out_of_domain, "parameter outside the family domain");
  Poly num(num_polys_.size()), den(den_polys_.size());
  for (std::size_t i = 0; i < num.size(); ++i) {
    num[i] = poly_eval(num_polys_[i], lambda);
    den[i] = poly_eval(den_polys_[i], lambda);
  }
  return RationalMap(degree_, num, den);
}

void HolomorphicFamily::coefficients_at(cplx lambda, Poly& num, Poly& den,
                                        Poly& dnum, Poly& dden) const {
  const std::size_t n = num_polys_.size();
  num.resize(n);
  den.resize(n);
  dnum.resize(n);
  dden.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto [nv, nd] = poly_eval_with_derivative(num_polys_[i], lambda);
    auto [dv, dd] = poly_eval_with_derivative(den_polys_[i], lambda);
    num[i] = nv;
    dnum[i] = nd;
    den[i] = dv;
    dden[i] = dd;
  }
}

HolomorphicFamily HolomorphicFamily::constant(const RationalMap& map, double domain_radius) {
  std::vector<Poly> num, den;
  for (int i = 0; i <= map.degree(); ++i) {
    num.push_back(Poly{map.num()[static_cast<std::size_t>(i)]});
    den.push_back(Poly{map.den()[static_cast<std::size_t>(i)]});
  }
  return HolomorphicFamily(map.degree(), std::move(num), std::move(den), domain_radius);
}

HolomorphicFamily HolomorphicFamily::quadratic(double domain_radius) {
  // z^2 + lambda over 1
  std::vector<Poly> num = {
      Poly{cplx(0.0, 0.0), cplx(1.0, 0.0)},  // constant coeff = lambda
      Poly{cplx(0.0, 0.0)},
      Poly{cplx(1.0, 0.0)},
  };
  std::vector<Poly> den = {
      Poly{cplx(1.0, 0.0)},
      Poly{cplx(0.0, 0.0)},
      Poly{cplx(0.0, 0.0)},
  };
  return HolomorphicFamily(2, std::move(num), std::move(den), domain_radius);
}

}  // namespace biflab
