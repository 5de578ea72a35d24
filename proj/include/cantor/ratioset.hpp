#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "cantor/errors.hpp"
#include "cantor/hierarchy.hpp"
#include "cantor/scaling.hpp"
#include "cantor/symbolic.hpp"

namespace cantor {

// 2^depth ordered disjoint closed subintervals of [0,1], stored as
// (left, length) pairs.  Houses ratio-set approximants as well as rescaled
// sub-hierarchies C_{n,x}.
template <class R>
struct RescaledSet {
  int depth = 0;
  std::vector<std::pair<R, R>> intervals;  // (left, length), increasing
  R trunc{};                               // set-approximation slack of the skeleton
  std::string provenance;

  R left(std::size_t i) const { return intervals[i].first; }
  R len(std::size_t i) const { return intervals[i].second; }
  R right(std::size_t i) const { return intervals[i].first + intervals[i].second; }
  std::size_t count() const { return intervals.size(); }
};

// Total scaling data: answers a ratio triple for every queried past.  Table
// sources answer by length-m suffix lookup (zero-padded when shorter).
template <class R>
struct ScalingSource {
  std::function<RatioTriple<R>(const DualWord&)> rule;
  std::string describe;
};

template <class R>
ScalingSource<R> constant_source(RatioTriple<R> t) {
  t.require_interior("constant_source");
  return {[t](const DualWord&) { return t; }, "constant"};
}

template <class R>
ScalingSource<R> table_source(std::shared_ptr<const ScalingTable<R>> table) {
  return {[table](const DualWord& y) { return table->lookup(y); },
          "table m=" + std::to_string(table->m) + " n=" + std::to_string(table->n)};
}

// Evaluates R_n of the system on the fly for each queried past.
template <class R>
ScalingSource<R> system_source(std::shared_ptr<const ContractionSystem<R>> sys, int est_depth) {
  return {[sys, est_depth](const DualWord& y) {
            return scaling_estimate(*sys, y.suffix(est_depth), est_depth).value;
          },
          "system " + sys->family + " n=" + std::to_string(est_depth)};
}

// Level-n approximation of the ratio Cantor set C^y: the subdivision of the
// node with word w uses the triple R(y . w); the left child keeps the left
// endpoint, the right child keeps the right endpoint.
template <class R>
RescaledSet<R> build_ratio_set(const ScalingSource<R>& src, const DualWord& y, int n,
                               int depth_cap = kDefaultDepthCap) {
  if (n < 0) throw config_error("build_ratio_set: negative depth");
  if (n > depth_cap) throw resource_limit("build_ratio_set: depth cap exceeded");
  std::vector<std::pair<R, R>> level = {{R(0), R(1)}};
  for (int k = 0; k < n; ++k) {
    std::vector<std::pair<R, R>> next;
    next.reserve(level.size() * 2);
    for (std::uint64_t i = 0; i < level.size(); ++i) {
      // past of the node = y . (bits of i at depth k)
      DualWord p = y;
      for (int j = 0; j < k; ++j)
        p = p.appended(static_cast<std::uint8_t>((i >> (k - 1 - j)) & 1u));
      const RatioTriple<R> t = src.rule(p);
      t.require_interior("build_ratio_set");
      const auto& [a, len] = level[i];
      next.emplace_back(a, t.l * len);
      next.emplace_back(a + len - t.r * len, t.r * len);
    }
    level = std::move(next);
  }
  RescaledSet<R> out;
  out.depth = n;
  out.intervals = std::move(level);
  out.provenance = "ratio set, source " + src.describe + ", past " + to_string(y);
  for (const auto& iv : out.intervals) out.trunc = std::max(out.trunc, iv.second);
  return out;
}

// Interval of the node reached by `w` in the ratio-set construction.
template <class R>
std::pair<R, R> ratio_node(const ScalingSource<R>& src, const DualWord& y, const Word& w) {
  R a(0), len(1);
  DualWord past = y;
  for (int k = 0; k < w.size(); ++k) {
    const RatioTriple<R> t = src.rule(past);
    t.require_interior("ratio_node");
    if (w[k] == 0) {
      len *= t.l;
    } else {
      a += len - t.r * len;
      len *= t.r;
    }
    past = past.appended(w[k]);
  }
  return {a, len};
}

template <class R>
struct IdentityReport {
  R max_abs_diff{};
  std::size_t witness = 0;  // endpoint index of the worst mismatch
  bool pass = true;
};

// The exact scenery identity: rescaling the sub-hierarchy of C^y below the
// node I^y_{x_0...x_{n-1}} reproduces the ratio set of the shifted past.
template <class R>
IdentityReport<R> scenery_identity_check(const ScalingSource<R>& src, const BiWindow& window,
                                         int n, int depth, const R& tol) {
  using std::abs;
  if (window.future.size() < n) throw config_error("scenery_identity_check: future too short");
  const Word head(Symbols(window.future.symbols.begin(), window.future.symbols.begin() + n));

  const RescaledSet<R> full = build_ratio_set(src, window.past, n + depth);
  const auto [base_left, base_len] = ratio_node(src, window.past, head);
  const std::uint64_t block = std::uint64_t{1} << depth;
  const std::uint64_t start = word_index(head) * block;

  const RescaledSet<R> shifted =
      build_ratio_set(src, shift_n(window, n).past, depth);

  IdentityReport<R> rep;
  for (std::uint64_t i = 0; i < block; ++i) {
    const R lhs_left = (full.left(start + i) - base_left) / base_len;
    const R lhs_len = full.len(start + i) / base_len;
    const R dl = abs(lhs_left - shifted.left(i));
    const R dr = abs((lhs_left + lhs_len) - shifted.right(i));
    const R worst = std::max(dl, dr);
    if (worst > rep.max_abs_diff) {
      rep.max_abs_diff = worst;
      rep.witness = static_cast<std::size_t>(i);
    }
  }
  rep.pass = rep.max_abs_diff <= tol;
  return rep;
}

}  // namespace cantor
