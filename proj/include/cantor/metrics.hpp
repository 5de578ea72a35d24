#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "cantor/conjugacy.hpp"
#include "cantor/errors.hpp"
#include "cantor/ratioset.hpp"

namespace cantor {

enum class MetricKind { C1, Hausdorff, Measure };

template <class R>
struct MetricValue {
  MetricKind kind{};
  R value{};
  R truncation_err{};
};

// Monotone (piecewise linear) resample onto a new grid.
template <class R>
ConjugacyGrid<R> resample(const ConjugacyGrid<R>& g, const std::vector<R>& grid) {
  ConjugacyGrid<R> out;
  out.x = grid;
  out.v.reserve(grid.size());
  out.dv.reserve(grid.size());
  std::size_t j = 0;
  for (const R& x : grid) {
    while (j + 2 < g.x.size() && g.x[j + 1] <= x) ++j;
    const R t = (x - g.x[j]) / (g.x[j + 1] - g.x[j]);
    out.v.push_back(g.v[j] + t * (g.v[j + 1] - g.v[j]));
    out.dv.push_back(g.dv[j] + t * (g.dv[j + 1] - g.dv[j]));
  }
  return out;
}

// C1 distance on sampled conjugacies: max|f-g| + max|Df-Dg| over the grid.
// Grid sup-norms are lower bounds of the true sup-norms.
template <class R>
MetricValue<R> d_c(const ConjugacyGrid<R>& f, const ConjugacyGrid<R>& g) {
  using std::abs;
  const ConjugacyGrid<R>* gg = &g;
  ConjugacyGrid<R> resampled;
  if (f.x != g.x) {
    resampled = resample(g, f.x);
    gg = &resampled;
  }
  R dv(0), dd(0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    dv = std::max(dv, abs(f.v[i] - gg->v[i]));
    dd = std::max(dd, abs(f.dv[i] - gg->dv[i]));
  }
  return {MetricKind::C1, dv + dd, R(0)};
}

namespace detail {

// Distance from a point to a finite union of closed intervals.
template <class R>
R point_set_distance(const R& p, const RescaledSet<R>& s) {
  R best = std::numeric_limits<R>::max();
  std::size_t lo = 0, hi = s.count();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (s.left(mid) <= p)
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo > 0) {
    const std::size_t i = lo - 1;
    best = p <= s.right(i) ? R(0) : p - s.right(i);
  }
  if (lo < s.count()) best = std::min(best, s.left(lo) - p);
  return best;
}

// sup over points of A of dist(., B).  For interval unions the supremum is
// attained at an endpoint of A or at a gap midpoint of B lying inside A.
template <class R>
R directed_hausdorff(const RescaledSet<R>& A, const RescaledSet<R>& B) {
  R worst(0);
  for (std::size_t i = 0; i < A.count(); ++i) {
    worst = std::max(worst, point_set_distance(A.left(i), B));
    worst = std::max(worst, point_set_distance(A.right(i), B));
  }
  for (std::size_t i = 0; i + 1 < B.count(); ++i) {
    const R mid = (B.right(i) + B.left(i + 1)) / R(2);
    if (point_set_distance(mid, A) == R(0))
      worst = std::max(worst, point_set_distance(mid, B));
  }
  return worst;
}

}  // namespace detail

// Exact Hausdorff distance between two finite unions of closed intervals.
// truncation_err records how far each skeleton may sit from the set it
// approximates.
template <class R>
MetricValue<R> d_h(const RescaledSet<R>& A, const RescaledSet<R>& B) {
  if (A.count() == 0 || B.count() == 0) throw config_error("d_h: empty set");
  const R v = std::max(detail::directed_hausdorff(A, B), detail::directed_hausdorff(B, A));
  return {MetricKind::Hausdorff, v, std::max(A.trunc, B.trunc)};
}

// A finite measure carried by the intervals of a skeleton; mass within an
// interval is spread uniformly (the documented proxy rule).
template <class R>
struct IntervalMeasure {
  std::vector<R> left, len, weight;
  R total{};

  static IntervalMeasure on_set(const RescaledSet<R>& s, std::vector<R> w) {
    if (w.size() != s.count()) throw config_error("IntervalMeasure: weight count mismatch");
    IntervalMeasure m;
    m.weight = std::move(w);
    for (std::size_t i = 0; i < s.count(); ++i) {
      m.left.push_back(s.left(i));
      m.len.push_back(s.len(i));
      m.total += m.weight[i];
    }
    return m;
  }

  // mass of a closed interval [lo, hi]
  R mass(const R& lo, const R& hi) const {
    R out(0);
    for (std::size_t i = 0; i < left.size(); ++i) {
      const R a = std::max(lo, left[i]);
      const R b = std::min(hi, left[i] + len[i]);
      if (b > a) out += weight[i] * (b - a) / len[i];
    }
    return out;
  }
};

// Measure metric: the canonical enumeration is E_1 = [0,1] followed by the
// 2^k dyadic cells of each level k = 1, 2, ... in increasing position; term
// n contributes |mu_A(E_n) - mu_B(E_n)| * 2^{-n}.
template <class R>
MetricValue<R> d_m(const IntervalMeasure<R>& muA, const IntervalMeasure<R>& muB, int N = 40) {
  using std::abs;
  R sum(0);
  R w(1);
  int n = 0;
  auto term = [&](const R& lo, const R& hi) {
    w /= R(2);
    ++n;
    sum += abs(muA.mass(lo, hi) - muB.mass(lo, hi)) * w;
  };
  term(R(0), R(1));
  for (int k = 1; n < N; ++k) {
    const std::uint64_t denom = std::uint64_t{1} << k;
    for (std::uint64_t j = 0; j < denom && n < N; ++j)
      term(R(j) / R(denom), R(j + 1) / R(denom));
  }
  // remaining tail: sum_{m > N} (mA + mB) 2^{-m} = (mA + mB) 2^{-N}
  return {MetricKind::Measure, sum, (muA.total + muB.total) * w};
}

}  // namespace cantor
