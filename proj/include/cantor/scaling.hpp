#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "cantor/errors.hpp"
#include "cantor/hierarchy.hpp"
#include "cantor/symbolic.hpp"
#include "cantor/system.hpp"

namespace cantor {

// A point of the open simplex: normalized (left child, gap, right child)
// lengths of a subdivided interval.
template <class R>
struct RatioTriple {
  R l{}, g{}, r{};

  void require_interior(const char* who) const {
    if (!(l > R(0) && g > R(0) && r > R(0)))
      throw invariant_violation(std::string(who) + ": ratio triple not in the open simplex");
  }
};

// Componentwise sup-norm of log t1 - log t2.
template <class R>
R log_diff_inf(const RatioTriple<R>& t1, const RatioTriple<R>& t2) {
  using std::abs;
  using std::log;
  R m = abs(log(t1.l) - log(t2.l));
  m = std::max(m, abs(log(t1.g) - log(t2.g)));
  m = std::max(m, abs(log(t1.r) - log(t2.r)));
  return m;
}

template <class R>
R sup_diff(const RatioTriple<R>& t1, const RatioTriple<R>& t2) {
  using std::abs;
  return std::max({abs(t1.l - t2.l), abs(t1.g - t2.g), abs(t1.r - t2.r)});
}

// Ratio geometry of I_w: lengths of (I_{w0}, G_w, I_{w1}) normalized by
// |I_w|.  The three segment lengths are propagated together, so the
// components sum to 1 at working precision for any depth.
template <class R>
RatioTriple<R> ratio_geometry(const ContractionSystem<R>& sys, const Word& w) {
  sys.check_depth(w.size() + 1);
  std::vector<R> pts = {R(0), sys.gap_lo(), sys.gap_hi(), R(1)};
  std::vector<R> seg = {pts[1] - pts[0], pts[2] - pts[1], pts[3] - pts[2]};
  propagate_breakpoints(sys, w, pts, seg);
  const R total = seg[0] + seg[1] + seg[2];
  RatioTriple<R> t{seg[0] / total, seg[1] / total, seg[2] / total};
  t.require_interior("ratio_geometry");
  return t;
}

// R_n(y) for n = |y|: the dual word read as a plain word.
template <class R>
RatioTriple<R> ratio_dual(const ContractionSystem<R>& sys, const DualWord& y) {
  if (y.empty()) throw config_error("ratio_dual: dual word must be nonempty");
  return ratio_geometry(sys, y.as_word());
}

template <class R>
struct ScalingEstimate {
  RatioTriple<R> value;
  R err;  // multiplicative slack: true R(y') = value * e^{+-log(1+err)} componentwise
};

// log-scale error budget for estimating R at a finite past: Cauchy slack
// K beta^(n gamma) for stopping at depth n plus the Holder tail
// 2 K beta^(|y| gamma) for not knowing the past beyond |y|.
template <class R>
R scaling_err_log(const ContractionSystem<R>& sys, int known_len, int est_depth) {
  using std::pow;
  return sys.K * pow(sys.beta, R(est_depth) * sys.gamma) +
         R(2) * sys.K * pow(sys.beta, R(known_len) * sys.gamma);
}

// Extends y on the old side to length n by the zero-padding rule and
// returns R_n together with the certified multiplicative error bound.
template <class R>
ScalingEstimate<R> scaling_estimate(const ContractionSystem<R>& sys, const DualWord& y, int n) {
  using std::expm1;
  if (n < y.size()) throw config_error("scaling_estimate: est depth below |y|");
  sys.check_depth(n + 1);
  ScalingEstimate<R> out;
  out.value = ratio_dual(sys, y.padded_to(n));
  out.err = expm1(scaling_err_log(sys, y.size(), n));
  return out;
}

// Estimated scaling function on all depth-m dual cylinders, each evaluated
// at depth n, with one uniform multiplicative error bound.
template <class R>
struct ScalingTable {
  int m = 0;        // dual cylinder depth (2^m entries)
  int n = 0;        // estimation depth
  R err_bound{};    // multiplicative slack, uniform in y
  R beta{}, gamma{}, K{};
  std::vector<RatioTriple<R>> entries;  // indexed by the suffix word, MSB first

  const RatioTriple<R>& lookup(const DualWord& y) const {
    const DualWord s = y.padded_to(m).suffix(m);
    return entries[word_index(s.symbols)];
  }
};

template <class R>
ScalingTable<R> build_scaling_table(const ContractionSystem<R>& sys, int m, int n,
                                    std::uint64_t entry_budget = std::uint64_t{1} << 20) {
  using std::expm1;
  if (m < 1 || m > n) throw config_error("build_scaling_table: need 1 <= m <= n");
  sys.check_depth(n + 1);
  if ((std::uint64_t{1} << m) > entry_budget)
    throw resource_limit("build_scaling_table: 2^m exceeds the entry budget");
  ScalingTable<R> t;
  t.m = m;
  t.n = n;
  t.beta = sys.beta;
  t.gamma = sys.gamma;
  t.K = sys.K;
  t.err_bound = expm1(scaling_err_log(sys, m, n));
  t.entries.reserve(std::size_t{1} << m);
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << m); ++i) {
    const DualWord y(word_from_index(i, m).symbols);
    t.entries.push_back(ratio_dual(sys, y.padded_to(n)));
  }
  return t;
}

template <class R>
struct HolderReport {
  R max_ratio{};  // max over pairs of lhs / bound
  std::uint64_t worst_i = 0, worst_j = 0;
  bool pass = true;
};

// Exhaustive pair scan of a table against the Holder bound
//   ||log R(y) - log R(w)||_inf <= 2 K d_beta(y,w)^gamma + 2 log(1+err).
template <class R>
HolderReport<R> holder_diagnostic(const ScalingTable<R>& table, const R& beta, const R& gamma,
                                  const R& K) {
  using std::log1p;
  using std::pow;
  HolderReport<R> rep;
  const R tail = R(2) * log1p(table.err_bound);
  const std::uint64_t count = table.entries.size();
  for (std::uint64_t i = 0; i < count; ++i) {
    for (std::uint64_t j = i + 1; j < count; ++j) {
      // common suffix of the dual words = common low bits of the indices
      const int suffix = std::min<int>(table.m, std::countr_zero(i ^ j));
      const R bound = R(2) * K * pow(pow(beta, R(suffix)), gamma) + tail;
      const R lhs = log_diff_inf(table.entries[i], table.entries[j]);
      if (lhs == R(0)) continue;  // affine families: 0/0 is a pass
      const R ratio = lhs / bound;
      if (ratio > rep.max_ratio) {
        rep.max_ratio = ratio;
        rep.worst_i = i;
        rep.worst_j = j;
      }
    }
  }
  rep.pass = rep.max_ratio <= R(1);
  return rep;
}

}  // namespace cantor
