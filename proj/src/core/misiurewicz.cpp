#include "misiurewicz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "errors.hpp"
#include "fastmath.hpp"
#include "rng.hpp"

namespace biflab {

namespace {

Dual horner(const std::vector<Dual>& coeffs, const Dual& z) {
  Dual acc = coeffs.back();
  for (std::size_t i = coeffs.size() - 1; i-- > 0;) acc = acc * z + coeffs[i];
  return acc;
}

}  // namespace

OrbitTracker::OrbitTracker(const HolomorphicFamily& family) : family_(family) {
  RationalMap center = family.map_at(cplx(0.0, 0.0));
  for (const auto& c : center.critical_points())
    if (!c.at_infinity) crit_base_.push_back(c.z);
  crit_last_ = crit_base_;
  const std::size_t n = static_cast<std::size_t>(family.degree()) + 1;
  num_.resize(n);
  den_.resize(n);
  num_rev_.resize(n);
  den_rev_.resize(n);
  wron_val_.resize(2 * static_cast<std::size_t>(family.degree()) - 1);
  wron_dl_.resize(wron_val_.size());
}

bool OrbitTracker::set_lambda(cplx lambda) {
  lambda_ = lambda;
  Poly num, den, dnum, dden;
  family_.coefficients_at(lambda, num, den, dnum, dden);
  const std::size_t n = num.size();
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    scale = std::max({scale, fast_abs(num[i]), fast_abs(den[i])});
  if (scale <= 0.0) return false;
  for (std::size_t i = 0; i < n; ++i) {
    num_[i] = Dual(num[i], dnum[i]);
    den_[i] = Dual(den[i], dden[i]);
    num_rev_[n - 1 - i] = num_[i];
    den_rev_[n - 1 - i] = den_[i];
  }
  const auto& wpolys = family_.wronskian_coeff_polys();
  for (std::size_t i = 0; i < wpolys.size(); ++i) {
    auto [v, d] = poly_eval_with_derivative(wpolys[i], lambda);
    wron_val_[i] = v;
    wron_dl_[i] = d;
  }
  return true;
}

bool OrbitTracker::critical_point(int index, State& out) {
  cplx z = crit_last_[static_cast<std::size_t>(index)];
  // Newton on W(z; lambda) = 0 in z
  bool converged = false;
  for (int it = 0; it < 40; ++it) {
    cplx v(0.0, 0.0), dz(0.0, 0.0);
    for (std::size_t i = wron_val_.size(); i-- > 0;) {
      dz = dz * z + v;
      v = v * z + wron_val_[i];
    }
    if (norm2(dz) < 1e-40) return false;  // multiple critical point
    cplx step = fast_div(v, dz);
    z -= step;
    if (fast_abs(step) < 1e-13 * std::max(1.0, fast_abs(z))) {
      converged = true;
      break;
    }
    if (norm2(z) > 1e12) return false;
  }
  if (!converged) return false;
  crit_last_[static_cast<std::size_t>(index)] = z;
  // c'(lambda) = -W_lambda / W_z at c
  cplx wv(0.0, 0.0), wz(0.0, 0.0), wl(0.0, 0.0);
  for (std::size_t i = wron_val_.size(); i-- > 0;) {
    wz = wz * z + wv;
    wv = wv * z + wron_val_[i];
    wl = wl * z + wron_dl_[i];
  }
  if (norm2(wz) < 1e-40) return false;
  out.v = Dual(z, fast_div(-wl, wz));
  out.inverted = false;
  if (norm2(z) > 1.0) {
    out.v = Dual(cplx(1.0, 0.0)) / out.v;
    out.inverted = true;
  }
  return true;
}

void OrbitTracker::step(State& s) const {
  const auto& A = s.inverted ? num_rev_ : num_;
  const auto& B = s.inverted ? den_rev_ : den_;
  Dual a = horner(A, s.v);
  Dual b = horner(B, s.v);
  // point = a/b; keep the representative inside the unit disc
  if (norm2(a.v) >= norm2(b.v)) {
    s.v = b / a;
    s.inverted = true;
  } else {
    s.v = a / b;
    s.inverted = false;
  }
}

SpherePoint OrbitTracker::point(const State& s) const {
  if (!s.inverted) return SpherePoint::finite(s.v.v);
  if (norm2(s.v.v) < 1e-30) return SpherePoint::infinity();
  return SpherePoint::finite(sq_inv(s.v.v));
}

namespace {

struct SigmaEval {
  Dual value;  // cycle point with d/dlambda
  cplx multiplier;
  bool ok = false;
};

// sigma(lambda) with derivative from the implicit function theorem:
// sigma' = d_lambda(f^p)(sigma) / (1 - d_z(f^p)(sigma)).
SigmaEval eval_sigma(const HolomorphicFamily& family, const CycleContinuation& cont,
                     cplx lambda) {
  SigmaEval out;
  auto pp = cont.at(family, lambda);
  if (!pp) return out;
  Poly num, den, dnum, dden;
  family.coefficients_at(lambda, num, den, dnum, dden);
  cplx z = pp->point;
  cplx dz_acc(1.0, 0.0);   // d_z of the orbit so far
  cplx dl_acc(0.0, 0.0);   // d_lambda of the orbit so far
  cplx w = z;
  for (int k = 0; k < cont.period; ++k) {
    auto [pv, pd] = poly_eval_with_derivative(num, w);
    auto [qv, qd] = poly_eval_with_derivative(den, w);
    cplx pl = poly_eval(dnum, w);
    cplx ql = poly_eval(dden, w);
    cplx inv_q = fast_div(cplx(1.0, 0.0), qv);
    cplx value = pv * inv_q;
    cplx fz = (pd - value * qd) * inv_q;
    cplx fl = (pl - value * ql) * inv_q;
    dl_acc = fz * dl_acc + fl;
    dz_acc = fz * dz_acc;
    w = value;
  }
  cplx denom = cplx(1.0, 0.0) - dz_acc;
  if (norm2(denom) < 1e-24) return out;
  out.value = Dual(z, fast_div(dl_acc, denom));
  out.multiplier = pp->multiplier;
  out.ok = true;
  return out;
}

// g_n as a Dual: orbit endpoint compared with sigma in a common chart.
bool eval_g(OrbitTracker& tracker, const HolomorphicFamily& family,
            const CycleContinuation& cont, cplx lambda, int crit_index, int n,
            Dual& g_out, SpherePoint& endpoint_out, SigmaEval& sigma_out) {
  if (fast_abs(lambda) > family.domain_radius()) return false;
  if (!tracker.set_lambda(lambda)) return false;
  OrbitTracker::State s;
  if (!tracker.critical_point(crit_index, s)) return false;
  for (int k = 0; k < n; ++k) tracker.step(s);
  SigmaEval sig = eval_sigma(family, cont, lambda);
  if (!sig.ok) return false;
  g_out = s.inverted ? (Dual(cplx(1.0, 0.0)) - s.v * sig.value) : (s.v - sig.value);
  endpoint_out = tracker.point(s);
  sigma_out = sig;
  return true;
}

}  // namespace

std::vector<MisiurewiczHit> find_misiurewicz(const HolomorphicFamily& family,
                                             const CycleContinuation& sigma,
                                             const ParameterGrid& seeds, int n_lo, int n_hi,
                                             const DetectorOptions& opts) {
  require(n_lo >= 1 && n_hi >= n_lo && n_hi <= 60, ErrorCode::invalid_argument,
          "orbit length range must sit inside [1, 60]");
  OrbitTracker tracker(family);
  const int crit_count = tracker.critical_count();
  std::vector<MisiurewiczHit> hits;

  const double in_grid = seeds.half_width + 0.5 * seeds.spacing();

  for (int crit = 0; crit < crit_count; ++crit) {
    for (int n = n_lo; n <= n_hi; ++n) {
      // non-degeneracy witness: g_n must be visibly nonzero somewhere
      std::mt19937_64 wgen(opts.seed ^ (0x9e3779b97f4a7c15ULL * (crit * 64 + n)));
      bool witness = false;
      for (int w = 0; w < opts.witness_controls && !witness; ++w) {
        double r = seeds.half_width * 0.9 * std::sqrt(uniform_unit(wgen));
        double th = 2.0 * M_PI * uniform_unit(wgen);
        cplx ctrl = seeds.center + r * cplx(std::cos(th), std::sin(th));
        Dual g;
        SpherePoint ep;
        SigmaEval sig;
        if (eval_g(tracker, family, sigma, ctrl, crit, n, g, ep, sig) &&
            fast_abs(g.v) > opts.witness_floor)
          witness = true;
      }
      if (!witness) continue;

      // pruning pass: |g_n| at every grid node, keep the best seeds
      std::vector<std::pair<double, cplx>> ranked;
      ranked.reserve(seeds.size());
      for (int i = 0; i < seeds.resolution; ++i) {
        for (int j = 0; j < seeds.resolution; ++j) {
          cplx l0 = seeds.node(i, j);
          Dual g;
          SpherePoint ep;
          SigmaEval sig;
          if (eval_g(tracker, family, sigma, l0, crit, n, g, ep, sig))
            ranked.emplace_back(fast_abs(g.v), l0);
        }
      }
      std::size_t keep = std::min<std::size_t>(ranked.size(),
                                               static_cast<std::size_t>(opts.max_seeds_per_n));
      std::partial_sort(ranked.begin(), ranked.begin() + keep, ranked.end(),
                        [](const auto& a, const auto& b) { return a.first < b.first; });

      std::vector<cplx> found;
      for (std::size_t si = 0; si < keep; ++si) {
        cplx lambda = ranked[si].second;
        bool converged = false;
        Dual g;
        SpherePoint ep;
        SigmaEval sig;
        for (int it = 0; it < opts.max_newton_iter; ++it) {
          if (!eval_g(tracker, family, sigma, lambda, crit, n, g, ep, sig)) break;
          if (norm2(g.d) < 1e-40) break;
          cplx step = fast_div(g.v, g.d);
          lambda -= step;
          if (fast_abs(step) < 1e-13 * std::max(1.0, fast_abs(lambda))) {
            converged = true;
            break;
          }
        }
        if (!converged) continue;
        if (!eval_g(tracker, family, sigma, lambda, crit, n, g, ep, sig)) continue;
        double residual = sphere_dist(ep, SpherePoint::finite(sig.value.v));
        if (residual >= opts.residual_bound) continue;
        if (std::abs(sig.multiplier) <= 1.0) continue;
        cplx rel = lambda - seeds.center;
        if (std::fabs(rel.real()) > in_grid || std::fabs(rel.imag()) > in_grid) continue;
        bool dup = false;
        for (cplx f : found)
          if (fast_abs(f - lambda) < 1e-9 * std::max(1.0, fast_abs(f))) {
            dup = true;
            break;
          }
        if (dup) continue;
        found.push_back(lambda);
        hits.push_back(MisiurewiczHit{lambda, crit, n, sigma.period, residual,
                                      sig.multiplier});
      }
    }
  }
  std::sort(hits.begin(), hits.end(), [](const MisiurewiczHit& a, const MisiurewiczHit& b) {
    if (a.n0 != b.n0) return a.n0 < b.n0;
    if (a.lambda.real() != b.lambda.real()) return a.lambda.real() < b.lambda.real();
    return a.lambda.imag() < b.lambda.imag();
  });
  return hits;
}

std::vector<AvalancheRow> avalanche_summary(const std::vector<MisiurewiczHit>& hits,
                                            int n_lo, int n_hi) {
  std::vector<AvalancheRow> rows;
  for (int n = n_lo; n <= n_hi; ++n) {
    AvalancheRow row;
    row.n = n;
    row.min_abs_lambda = std::numeric_limits<double>::infinity();
    for (const auto& h : hits) {
      if (h.n0 != n) continue;
      ++row.hit_count;
      row.min_abs_lambda = std::min(row.min_abs_lambda, std::abs(h.lambda));
    }
    if (row.hit_count > 0) rows.push_back(row);
  }
  return rows;
}

}  // namespace biflab
