#include "ifs.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <unordered_map>

#include "errors.hpp"
#include "fastmath.hpp"
#include "rng.hpp"

namespace biflab {

namespace {

constexpr double kMargin = 1e-6;

// deterministic word generator for subsampling
SymbolWord random_word(std::mt19937_64& gen, int depth, int m) {
  SymbolWord w(static_cast<std::size_t>(depth));
  for (auto& d : w) d = static_cast<int>(uniform_index(gen, static_cast<std::uint32_t>(m)));
  return w;
}

}  // namespace

ContractionSystem::ContractionSystem(int k, std::vector<AffineContraction> maps, double a,
                                     double A, double separation_delta, FiberBall ball)
    : k_(k), maps_(std::move(maps)), a_(a), A_(A), delta_(separation_delta), ball_(ball) {
  require(k_ == 1 || k_ == 2, ErrorCode::invalid_argument, "fiber dimension must be 1 or 2");
  require(maps_.size() >= 2, ErrorCode::invalid_argument, "need at least two contractions");
  require(0.0 < a_ && a_ <= A_, ErrorCode::invalid_argument, "need 0 < a <= A");
  require(delta_ > 0.0, ErrorCode::invalid_argument, "separation delta must be > 0");
  require(ball_.radius > 0.0, ErrorCode::invalid_argument, "fiber ball radius must be > 0");
  certify();
}

double ContractionSystem::fiber_norm(const FiberVec& v) const {
  double n = fast_abs(v[0]);
  if (k_ == 2) n = std::max(n, fast_abs(v[1]));
  return n;
}

double ContractionSystem::fiber_dist(const FiberVec& x, const FiberVec& y) const {
  return fiber_norm({x[0] - y[0], x[1] - y[1]});
}

FiberVec ContractionSystem::apply(int j, cplx lambda, const FiberVec& z) const {
  const auto& g = maps_[static_cast<std::size_t>(j)];
  FiberVec out{cplx(0, 0), cplx(0, 0)};
  for (int i = 0; i < k_; ++i) {
    cplx acc = poly_eval(g.offset[static_cast<std::size_t>(i)], lambda);
    for (int l = 0; l < k_; ++l) {
      const Poly& entry = g.linear[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)];
      if (!entry.empty()) acc += poly_eval(entry, lambda) * z[static_cast<std::size_t>(l)];
    }
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

FiberVec ContractionSystem::compose_word(const SymbolWord& word, cplx lambda,
                                         const FiberVec& z) const {
  FiberVec cur = z;
  for (std::size_t i = word.size(); i-- > 0;) {
    int j = word[i];
    require(j >= 0 && j < map_count(), ErrorCode::invalid_argument, "digit out of range");
    cur = apply(j, lambda, cur);
  }
  return cur;
}

std::pair<FiberVec, double> ContractionSystem::graph_point(const SymbolWord& word,
                                                           cplx lambda) const {
  FiberVec v = compose_word(word, lambda, ball_.center);
  double bound = std::exp(-static_cast<double>(word.size()) * a_) * ball_.diameter();
  return {v, bound};
}

std::array<Poly, 2> ContractionSystem::graph_polynomials(const SymbolWord& word) const {
  std::array<Poly, 2> cur;
  for (int i = 0; i < k_; ++i)
    cur[static_cast<std::size_t>(i)] = Poly{ball_.center[static_cast<std::size_t>(i)]};
  for (std::size_t idx = word.size(); idx-- > 0;) {
    const auto& g = maps_[static_cast<std::size_t>(word[idx])];
    std::array<Poly, 2> next;
    for (int i = 0; i < k_; ++i) {
      Poly acc = g.offset[static_cast<std::size_t>(i)];
      for (int l = 0; l < k_; ++l) {
        const Poly& entry = g.linear[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)];
        if (!entry.empty())
          acc = poly_add(acc, poly_multiply(entry, cur[static_cast<std::size_t>(l)]));
      }
      next[static_cast<std::size_t>(i)] = acc;
    }
    cur = next;
    require(cur[0].size() <= 65, ErrorCode::budget_exceeded,
            "graph polynomial degree exceeds the symbolic budget");
  }
  return cur;
}

void ContractionSystem::certify() const {
  const double lo = std::exp(-A_) * (1.0 - kMargin);
  const double hi = std::exp(-a_) * (1.0 + kMargin);
  const double R = ball_.radius;

  // 32 x 32 polar grid of the closed parameter disc
  for (int ir = 0; ir < 32; ++ir) {
    double r = static_cast<double>(ir) / 31.0;
    for (int ia = 0; ia < 32; ++ia) {
      double th = 2.0 * M_PI * ia / 32.0;
      cplx lambda = r * cplx(std::cos(th), std::sin(th));

      struct ImageBox {
        FiberVec center;
        double reach;  // max-norm radius bound of the image of B
      };
      std::vector<ImageBox> boxes;
      for (int j = 0; j < map_count(); ++j) {
        const auto& g = maps_[static_cast<std::size_t>(j)];
        // exact fiber Lipschitz bounds for an affine map in max-norm
        double upper = 0.0, lower = 0.0;
        if (k_ == 1) {
          double av = fast_abs(poly_eval(g.linear[0][0], lambda));
          upper = lower = av;
        } else {
          cplx m00 = poly_eval(g.linear[0][0], lambda);
          cplx m01 = poly_eval(g.linear[0][1], lambda);
          cplx m10 = poly_eval(g.linear[1][0], lambda);
          cplx m11 = poly_eval(g.linear[1][1], lambda);
          upper = std::max(fast_abs(m00) + fast_abs(m01), fast_abs(m10) + fast_abs(m11));
          cplx det = m00 * m11 - m01 * m10;
          require(norm2(det) > 0.0, ErrorCode::invalid_argument,
                  "contraction matrix is singular");
          // 1 / ||M^{-1}||_inf
          double inv_norm = std::max(fast_abs(m11) + fast_abs(m01),
                                     fast_abs(m10) + fast_abs(m00)) /
                            fast_abs(det);
          lower = 1.0 / inv_norm;
        }
        require(upper <= hi, ErrorCode::invalid_argument,
                "axiom 3 upper bound violated: contraction weaker than e^-a");
        require(lower >= lo, ErrorCode::invalid_argument,
                "axiom 3 lower bound violated: contraction stronger than e^-A");

        FiberVec c = apply(j, lambda, ball_.center);
        double reach = upper * R;
        // axiom 1: image box inside the open ball
        for (int i = 0; i < k_; ++i) {
          double off = fast_abs(c[static_cast<std::size_t>(i)] -
                                ball_.center[static_cast<std::size_t>(i)]);
          require(off + reach <= R * (1.0 - kMargin), ErrorCode::invalid_argument,
                  "axiom 1 violated: image leaves the fiber ball");
        }
        boxes.push_back(ImageBox{c, reach});
      }
      // axiom 2: pairwise fiberwise separation
      for (std::size_t p = 0; p < boxes.size(); ++p)
        for (std::size_t q = p + 1; q < boxes.size(); ++q) {
          double cd = fiber_dist(boxes[p].center, boxes[q].center);
          double gap = cd - boxes[p].reach - boxes[q].reach;
          require(gap >= delta_ - kMargin, ErrorCode::invalid_argument,
                  "axiom 2 violated: image separation below delta");
        }
    }
  }
}

std::vector<SlicePoint> slice_cantor(const ContractionSystem& sys, cplx lambda0, int depth,
                                     long long word_budget, std::uint64_t seed) {
  require(depth >= 0, ErrorCode::invalid_argument, "depth must be >= 0");
  require(word_budget >= 1, ErrorCode::budget_exceeded, "word budget must be >= 1");
  const int m = sys.map_count();
  double total_log = depth * std::log(static_cast<double>(m));
  bool enumerate_all = total_log <= std::log(static_cast<double>(word_budget)) + 1e-12;

  std::vector<SlicePoint> out;
  if (enumerate_all) {
    long long total = 1;
    for (int i = 0; i < depth; ++i) total *= m;
    out.reserve(static_cast<std::size_t>(total));
    SymbolWord word(static_cast<std::size_t>(depth), 0);
    for (long long w = 0; w < total; ++w) {
      long long x = w;
      for (int i = depth - 1; i >= 0; --i) {
        word[static_cast<std::size_t>(i)] = static_cast<int>(x % m);
        x /= m;
      }
      auto [pt, bound] = sys.graph_point(word, lambda0);
      out.push_back(SlicePoint{word, pt, bound});
    }
  } else {
    std::mt19937_64 gen(seed);
    out.reserve(static_cast<std::size_t>(word_budget));
    for (long long w = 0; w < word_budget; ++w) {
      SymbolWord word = random_word(gen, depth, m);
      auto [pt, bound] = sys.graph_point(word, lambda0);
      out.push_back(SlicePoint{std::move(word), pt, bound});
    }
  }
  return out;
}

double min_pairwise_distance(const ContractionSystem& sys,
                             const std::vector<SlicePoint>& pts) {
  require(pts.size() >= 2, ErrorCode::invalid_argument, "need at least two points");
  // bucket grid at a cell size aimed at O(1) occupancy
  const int k = sys.fiber_dim();
  double lo[4] = {1e300, 1e300, 1e300, 1e300};
  double hi[4] = {-1e300, -1e300, -1e300, -1e300};
  auto coord = [&](const SlicePoint& p, int c) {
    cplx z = p.point[static_cast<std::size_t>(c / 2)];
    return (c % 2 == 0) ? z.real() : z.imag();
  };
  const int dims = 2 * k;
  for (const auto& p : pts)
    for (int c = 0; c < dims; ++c) {
      lo[c] = std::min(lo[c], coord(p, c));
      hi[c] = std::max(hi[c], coord(p, c));
    }
  double extent = 1e-300;
  for (int c = 0; c < dims; ++c) extent = std::max(extent, hi[c] - lo[c]);
  double cell = extent / std::max(1.0, std::floor(std::pow(
                             static_cast<double>(pts.size()), 1.0 / dims)));
  if (cell <= 0.0) return 0.0;

  auto key_of = [&](const SlicePoint& p) {
    long long key = 0;
    for (int c = 0; c < dims; ++c) {
      long long q = static_cast<long long>(std::floor((coord(p, c) - lo[c]) / cell));
      key = key * 1'000'003 + q;
    }
    return key;
  };
  std::unordered_map<long long, std::vector<std::size_t>> buckets;
  for (std::size_t i = 0; i < pts.size(); ++i) buckets[key_of(pts[i])].push_back(i);

  double best = 1e300;
  // compare within neighboring buckets
  for (std::size_t i = 0; i < pts.size(); ++i) {
    long long q[4];
    for (int c = 0; c < dims; ++c)
      q[c] = static_cast<long long>(std::floor((coord(pts[i], c) - lo[c]) / cell));
    constexpr int span = 1;
    long long off[4] = {0, 0, 0, 0};
    std::function<void(int)> visit = [&](int c) {
      if (c == dims) {
        long long key = 0;
        for (int d = 0; d < dims; ++d) key = key * 1'000'003 + (q[d] + off[d]);
        auto it = buckets.find(key);
        if (it == buckets.end()) return;
        for (std::size_t j : it->second) {
          if (j <= i) continue;
          best = std::min(best, sys.fiber_dist(pts[i].point, pts[j].point));
        }
        return;
      }
      for (off[c] = -span; off[c] <= span; ++off[c]) visit(c + 1);
    };
    visit(0);
  }
  if (best > 1e299) {
    // sparse fallback: brute force on a capped subset
    std::size_t cap = std::min<std::size_t>(pts.size(), 4096);
    for (std::size_t i = 0; i < cap; ++i)
      for (std::size_t j = i + 1; j < cap; ++j)
        best = std::min(best, sys.fiber_dist(pts[i].point, pts[j].point));
  }
  return best;
}

std::vector<HolonomyPair> holonomy_pairs(const ContractionSystem& sys, cplx lambda_src,
                                         cplx lambda_dst, int depth, int pair_budget,
                                         std::uint64_t seed) {
  require(depth >= 1, ErrorCode::invalid_argument, "depth must be >= 1");
  require(pair_budget >= 1, ErrorCode::invalid_argument, "pair budget must be >= 1");
  const int m = sys.map_count();
  std::mt19937_64 gen(seed);
  std::vector<HolonomyPair> out;
  out.reserve(static_cast<std::size_t>(pair_budget));
  int per_stratum = std::max(1, pair_budget / depth);
  for (int q = 0; q < depth && static_cast<int>(out.size()) < pair_budget; ++q) {
    for (int t = 0; t < per_stratum && static_cast<int>(out.size()) < pair_budget; ++t) {
      SymbolWord w1 = random_word(gen, depth, m);
      SymbolWord w2 = w1;
      // force first disagreement at depth q
      int a = w1[static_cast<std::size_t>(q)];
      int b = (a + 1 + static_cast<int>(uniform_index(
                           gen, static_cast<std::uint32_t>(m - 1)))) % m;
      w2[static_cast<std::size_t>(q)] = b;
      for (int i = q + 1; i < depth; ++i)
        w2[static_cast<std::size_t>(i)] =
            static_cast<int>(uniform_index(gen, static_cast<std::uint32_t>(m)));
      FiberVec s1 = sys.graph_point(w1, lambda_src).first;
      FiberVec s2 = sys.graph_point(w2, lambda_src).first;
      FiberVec d1 = sys.graph_point(w1, lambda_dst).first;
      FiberVec d2 = sys.graph_point(w2, lambda_dst).first;
      out.push_back(HolonomyPair{sys.fiber_dist(s1, s2), sys.fiber_dist(d1, d2)});
    }
  }
  return out;
}

cplx Hypersurface::phi(cplx lambda, cplx z2) const {
  cplx acc(0.0, 0.0);
  for (std::size_t i = coeff.size(); i-- > 0;) {
    cplx inner(0.0, 0.0);
    for (std::size_t j = coeff[i].size(); j-- > 0;) inner = inner * z2 + coeff[i][j];
    acc = acc * lambda + inner;
  }
  return acc;
}

Poly Hypersurface::compose(const Poly& z2_of_lambda) const {
  // phi(lambda, z2(lambda)) as a polynomial in lambda
  Poly acc{};
  for (std::size_t i = coeff.size(); i-- > 0;) {
    // inner = sum_j coeff[i][j] z2(lambda)^j  (Horner in z2)
    Poly inner{};
    for (std::size_t j = coeff[i].size(); j-- > 0;) {
      inner = poly_multiply(inner, z2_of_lambda);
      if (inner.empty()) inner = Poly{cplx(0.0, 0.0)};
      inner[0] += coeff[i][j];
    }
    // acc = acc * lambda + inner
    if (!acc.empty()) {
      acc.insert(acc.begin(), cplx(0.0, 0.0));
    }
    acc = poly_add(acc, inner);
  }
  return acc;
}

void certify_properness(Hypersurface& Z, const ContractionSystem& sys, int samples) {
  // pi_D(Z cap D x B) subset D_{r0}: for |lambda| in [r0, 1] no z in B
  // may satisfy z1 = phi(lambda, z2). For affine phi in z2 a coarse
  // sample of the annulus and of B's z2-section suffices to refute;
  // certification demands a uniform margin.
  const double r0 = Z.proper_range;
  const FiberBall& B = sys.ball();
  int na = std::max(16, samples / 16);
  bool ok = true;
  for (int ir = 0; ir < 16 && ok; ++ir) {
    double r = r0 + (1.0 - r0) * ir / 15.0;
    for (int ia = 0; ia < na && ok; ++ia) {
      double th = 2.0 * M_PI * ia / na;
      cplx lambda = r * cplx(std::cos(th), std::sin(th));
      // min over z2 samples of dist(phi(lambda, z2), B1-disc)
      double closest = 1e300;
      int nz = (sys.fiber_dim() == 2) ? 64 : 1;
      for (int iz = 0; iz < nz; ++iz) {
        cplx z2 = B.center[1];
        if (sys.fiber_dim() == 2) {
          double rr = B.radius * std::sqrt(static_cast<double>(iz % 8) / 7.0);
          double tt = 2.0 * M_PI * (iz / 8) / 8.0;
          z2 = B.center[1] + rr * cplx(std::cos(tt), std::sin(tt));
        }
        closest = std::min(closest, fast_abs(Z.phi(lambda, z2) - B.center[0]));
      }
      if (closest <= B.radius * 1.05) ok = false;  // graph re-enters the ball
    }
  }
  Z.proper_certified = ok;
}

std::vector<cplx> graph_hypersurface_intersection(const ContractionSystem& sys,
                                                  const SymbolWord& word,
                                                  const Hypersurface& Z) {
  auto graph = sys.graph_polynomials(word);
  // F(lambda) = w1(lambda) - phi(lambda, w2(lambda)) = 0
  Poly rhs = Z.compose(sys.fiber_dim() == 2 ? graph[1] : Poly{cplx(0.0, 0.0)});
  Poly F = poly_add(graph[0], poly_scale(rhs, cplx(-1.0, 0.0)));
  // trim trailing zeros but keep at least the constant term
  while (F.size() > 1 && norm2(F.back()) == 0.0) F.pop_back();

  std::vector<cplx> roots_in_disc;
  if (F.size() >= 2 && poly_max_abs_coeff(F) > 0.0) {
    auto roots = poly_roots(F);
    for (const auto& r : roots) {
      if (r.at_infinity) continue;
      if (fast_abs(r.z) > Z.proper_range) continue;
      bool dup = false;
      for (cplx q : roots_in_disc)
        if (fast_abs(q - r.z) < 1e-9) {
          dup = true;
          break;
        }
      if (!dup) roots_in_disc.push_back(r.z);
    }
  }
  if (roots_in_disc.empty() && Z.proper_certified)
    fail(ErrorCode::anomaly_no_intersection,
         "certified-proper hypersurface missed every graph root (numerical failure)");
  std::sort(roots_in_disc.begin(), roots_in_disc.end(), [](cplx x, cplx y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return roots_in_disc;
}

ProjectedIntersection projected_intersection_set(const ContractionSystem& sys,
                                                 const Hypersurface& Z, int depth,
                                                 long long word_budget,
                                                 std::uint64_t seed) {
  require(depth >= 0, ErrorCode::invalid_argument, "depth must be >= 0");
  const int m = sys.map_count();
  double total_log = depth * std::log(static_cast<double>(m));
  bool enumerate_all = total_log <= std::log(static_cast<double>(word_budget)) + 1e-12;

  ProjectedIntersection out;
  auto process = [&](const SymbolWord& word) {
    ++out.words_processed;
    try {
      auto roots = graph_hypersurface_intersection(sys, word, Z);
      out.points.insert(out.points.end(), roots.begin(), roots.end());
    } catch (const Error& e) {
      if (e.code() == ErrorCode::anomaly_no_intersection)
        ++out.anomalies;
      else
        throw;
    }
  };

  if (enumerate_all) {
    long long total = 1;
    for (int i = 0; i < depth; ++i) total *= m;
    SymbolWord word(static_cast<std::size_t>(depth), 0);
    for (long long w = 0; w < total; ++w) {
      long long x = w;
      for (int i = depth - 1; i >= 0; --i) {
        word[static_cast<std::size_t>(i)] = static_cast<int>(x % m);
        x /= m;
      }
      process(word);
    }
  } else {
    std::mt19937_64 gen(seed);
    for (long long w = 0; w < word_budget; ++w) process(random_word(gen, depth, m));
  }
  return out;
}

}  // namespace biflab
