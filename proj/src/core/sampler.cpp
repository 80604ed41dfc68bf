#include "sampler.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "fastmath.hpp"

namespace biflab {

namespace {

constexpr cplx kGenericStart{0.4, 0.3};
constexpr double kGolden = 0.6180339887498949;

bool sphere_less(const SpherePoint& a, const SpherePoint& b) {
  if (a.at_infinity != b.at_infinity) return b.at_infinity;  // finite first
  if (a.at_infinity) return false;
  if (std::real(a.z) != std::real(b.z)) return std::real(a.z) < std::real(b.z);
  return std::imag(a.z) < std::imag(b.z);
}

// Exceptional points are totally invariant: their fiber collapses to
// the point itself. Detect by inspecting the preimage set.
bool is_exceptional(const RationalMap& map, const SpherePoint& z) {
  std::vector<SpherePoint> pre;
  try {
    pre = map.preimages(z, 1e-6);
  } catch (const Error&) {
    return true;  // degenerate fiber: treat as exceptional and perturb
  }
  for (const auto& p : pre)
    if (sphere_dist(p, z) > 1e-9) return false;
  return true;
}

SpherePoint generic_start(const RationalMap& map) {
  SpherePoint z = SpherePoint::finite(kGenericStart);
  for (int attempt = 0; attempt < 8; ++attempt) {
    if (!is_exceptional(map, z)) return z;
    z.z += cplx(1e-3, 1e-3);  // deterministic nudge off the exceptional set
  }
  fail(ErrorCode::degenerate_sample, "could not find a non-exceptional start point");
}

}  // namespace

BackwardChain::BackwardChain(const RationalMap& map)
    : map_(map), state_(generic_start(map)) {
  // Polynomial quadratics admit a closed-form step; everything else goes
  // through the general fiber solver.
  const Poly& den = map.den();
  const Poly& num = map.num();
  if (map.degree() == 2 && norm2(den[1]) == 0.0 && norm2(den[2]) == 0.0 &&
      norm2(num[2]) > 0.0) {
    kind_ = Kind::poly_quadratic;
    cplx p2 = num[2], p1 = num[1], p0 = num[0], q0 = den[0];
    qp_center_ = fast_div(-p1, 2.0 * p2);
    qp_u0_ = p1 * p1 - 4.0 * p2 * p0;
    qp_v0_ = 4.0 * p2 * q0;
    qp_scale_ = fast_div(cplx(1.0, 0.0), 2.0 * p2);
    qp_da_ = fast_div(2.0 * p2, q0);
    qp_db_ = fast_div(p1, q0);
  } else {
    kind_ = Kind::generic;
  }
}

SpherePoint BackwardChain::step_generic(double u) {
  map_.preimages_into(state_, 1e-6, pre_, /*check_residual=*/false);
  std::sort(pre_.begin(), pre_.end(), sphere_less);
  const std::size_t d = pre_.size();
  double digit = u;
  for (int tries = 0; tries < 64; ++tries) {
    std::size_t idx = std::min<std::size_t>(d - 1, static_cast<std::size_t>(digit * d));
    const SpherePoint& cand = pre_[idx];
    double deriv = map_.spherical_derivative(cand);
    if (deriv >= near_critical_floor) {
      state_ = cand;
      state_derivative_ = deriv;
      return state_;
    }
    ++rejected_;
    digit += kGolden;
    digit -= std::floor(digit);
  }
  fail(ErrorCode::degenerate_sample, "all preimages of the current state are critical");
}

SpherePoint BackwardChain::step(double u) {
  if (kind_ == Kind::generic || state_.at_infinity || norm2(state_.z) > 1e16)
    return step_generic(u);

  // closed-form fiber of a polynomial quadratic: c +- sqrt(u0 + v0 w) / (2 p2)
  const cplx w = state_.z;
  cplx delta = fast_sqrt(qp_u0_ + qp_v0_ * w) * qp_scale_;
  cplx ra = qp_center_ + delta;
  cplx rb = qp_center_ - delta;
  // canonical (re, im) order so digits select stable branches
  if (ra.real() > rb.real() ||
      (ra.real() == rb.real() && ra.imag() > rb.imag()))
    std::swap(ra, rb);

  const double inv_img = 1.0 / (1.0 + norm2(w));
  double digit = u;
  for (int tries = 0; tries < 64; ++tries) {
    cplx z = (digit < 0.5) ? ra : rb;
    double deriv = fast_abs(qp_da_ * z + qp_db_) * (1.0 + norm2(z)) * inv_img;
    if (deriv >= near_critical_floor) {
      state_ = SpherePoint::finite(z);
      state_derivative_ = deriv;
      return state_;
    }
    ++rejected_;
    digit += kGolden;
    digit -= std::floor(digit);
  }
  fail(ErrorCode::degenerate_sample, "all preimages of the current state are critical");
}

SpherePoint BackwardChain::step_shadow(double u, const SpherePoint& ref, double confidence) {
  if (kind_ == Kind::poly_quadratic && !state_.at_infinity && !ref.at_infinity &&
      norm2(state_.z) <= 1e16) {
    const cplx w = state_.z;
    cplx delta = fast_sqrt(qp_u0_ + qp_v0_ * w) * qp_scale_;
    cplx ra = qp_center_ + delta;
    cplx rb = qp_center_ - delta;
    double da = norm2(ra - ref.z);
    double db = norm2(rb - ref.z);
    if (db < da) {
      std::swap(ra, rb);
      std::swap(da, db);
    }
    const double inv_img = 1.0 / (1.0 + norm2(w));
    if (db >= confidence * confidence * da) {
      double deriv = fast_abs(qp_da_ * ra + qp_db_) * (1.0 + norm2(ra)) * inv_img;
      if (deriv >= near_critical_floor) {
        state_ = SpherePoint::finite(ra);
        state_derivative_ = deriv;
        return state_;
      }
    }
    return step(u);  // ambiguous or critical: digit rule
  }

  // generic path
  map_.preimages_into(state_, 1e-6, pre_, /*check_residual=*/false);
  double best = 1e300, second = 1e300;
  std::size_t best_idx = 0;
  for (std::size_t i = 0; i < pre_.size(); ++i) {
    double d = sphere_dist(pre_[i], ref);
    if (d < best) {
      second = best;
      best = d;
      best_idx = i;
    } else if (d < second) {
      second = d;
    }
  }
  if (second >= confidence * best) {
    double deriv = map_.spherical_derivative(pre_[best_idx]);
    if (deriv >= near_critical_floor) {
      state_ = pre_[best_idx];
      state_derivative_ = deriv;
      return state_;
    }
  }
  return step(u);
}

MeasureSample sample_measure(const RationalMap& map, std::uint64_t seed,
                             int burn_in, long long n) {
  require(n >= 1, ErrorCode::invalid_argument, "need n >= 1");
  require(burn_in >= 20, ErrorCode::invalid_argument, "need burn_in >= 20");
  DigitStream digits = DigitStream::make(seed, static_cast<std::size_t>(burn_in) + n);
  BackwardChain chain(map);
  MeasureSample out;
  out.seed = seed;
  out.burn_in = burn_in;
  out.chain_length = n;
  out.points.reserve(static_cast<std::size_t>(n));
  for (long long t = 0; t < burn_in + n; ++t) {
    SpherePoint z = chain.step(digits.u[static_cast<std::size_t>(t)]);
    if (t >= burn_in) out.points.push_back(z);
  }
  out.rejected_near_critical = chain.rejected();
  return out;
}

LyapunovEstimate lyapunov(const RationalMap& map, const MeasureSample& sample) {
  require(!sample.points.empty(), ErrorCode::invalid_argument, "empty sample");
  double sum = 0.0, sum2 = 0.0;
  for (const auto& z : sample.points) {
    double d = map.spherical_derivative(z);
    if (d <= 0.0)
      fail(ErrorCode::degenerate_sample, "sample point is critical; resample with a new seed");
    double l = std::log(d);
    sum += l;
    sum2 += l * l;
  }
  const double n = static_cast<double>(sample.points.size());
  LyapunovEstimate est;
  est.value = sum / n;
  double var = std::max(0.0, sum2 / n - est.value * est.value);
  est.std_error = std::sqrt(var / n);
  est.sample_count = static_cast<long long>(sample.points.size());
  est.rejected_near_critical = sample.rejected_near_critical;
  return est;
}

LyapunovEstimate lyapunov_stream(const RationalMap& map, const DigitStream& digits,
                                 int burn_in, long long n,
                                 const std::vector<SpherePoint>* reference,
                                 double confidence) {
  require(n >= 1, ErrorCode::invalid_argument, "need n >= 1");
  require(burn_in >= 0, ErrorCode::invalid_argument, "need burn_in >= 0");
  require(digits.u.size() >= static_cast<std::size_t>(burn_in) + n,
          ErrorCode::invalid_argument, "digit stream too short");
  require(!reference || reference->size() >= static_cast<std::size_t>(burn_in) + n,
          ErrorCode::invalid_argument, "reference chain too short");
  BackwardChain chain(map);
  double sum = 0.0, sum2 = 0.0;
  for (long long t = 0; t < burn_in + n; ++t) {
    if (reference)
      chain.step_shadow(digits.u[static_cast<std::size_t>(t)],
                        (*reference)[static_cast<std::size_t>(t)], confidence);
    else
      chain.step(digits.u[static_cast<std::size_t>(t)]);
    if (t >= burn_in) {
      double l = std::log(chain.state_derivative());
      sum += l;
      sum2 += l * l;
    }
  }
  LyapunovEstimate est;
  const double nn = static_cast<double>(n);
  est.value = sum / nn;
  double var = std::max(0.0, sum2 / nn - est.value * est.value);
  est.std_error = std::sqrt(var / nn);
  est.sample_count = n;
  est.rejected_near_critical = chain.rejected();
  return est;
}

LyapunovEstimate estimate_lyapunov(const RationalMap& map, std::uint64_t seed,
                                   int burn_in, long long n) {
  DigitStream digits = DigitStream::make(seed, static_cast<std::size_t>(burn_in) + n);
  return lyapunov_stream(map, digits, burn_in, n);
}


std::vector<SpherePoint> chain_states(const RationalMap& map, const DigitStream& digits,
                                      long long count) {
  require(digits.u.size() >= static_cast<std::size_t>(count), ErrorCode::invalid_argument,
          "digit stream too short");
  BackwardChain chain(map);
  std::vector<SpherePoint> states(static_cast<std::size_t>(count));
  for (long long t = 0; t < count; ++t)
    states[static_cast<std::size_t>(t)] = chain.step(digits.u[static_cast<std::size_t>(t)]);
  return states;
}

}  // namespace biflab
