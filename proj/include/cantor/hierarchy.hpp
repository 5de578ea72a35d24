#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cantor/errors.hpp"
#include "cantor/system.hpp"
#include "cantor/symbolic.hpp"

namespace cantor {

// Cylinder interval I_w.  Stored as (left, length); the length is carried
// multiplicatively through the composition so deep cylinders keep full
// relative accuracy even when right - left would cancel.
template <class R>
struct CylinderInterval {
  Word word;
  R left{};
  R length{};
  R right() const { return left + length; }
};

// Order-preserving affine map of a source interval onto [0,1].
template <class R>
struct AffineRescale {
  R scale{}, offset{};
  R operator()(const R& x) const { return scale * x + offset; }
  R inverse(const R& t) const { return (t - offset) / scale; }
};

// Images of sorted breakpoints of [0,1] under phi_w (first symbol of w is
// the outermost map).  `pts` become absolute positions; `seg[i]`, the length
// of [pts[i], pts[i+1]], is multiplied by the exact divided difference at
// every step, so segment lengths never suffer endpoint cancellation.
template <class R>
void propagate_breakpoints(const ContractionSystem<R>& sys, const Word& w, std::vector<R>& pts,
                           std::vector<R>& seg) {
  for (int j = w.size() - 1; j >= 0; --j) {
    const auto& phi = sys.branch(w[j]);
    for (std::size_t i = 0; i < seg.size(); ++i) seg[i] *= phi.slope(pts[i], pts[i + 1]);
    for (auto& p : pts) p = phi(p);
  }
}

template <class R>
CylinderInterval<R> interval_for_word(const ContractionSystem<R>& sys, const Word& w) {
  if (w.empty()) throw config_error("interval_for_word: word must be nonempty");
  sys.check_depth(w.size());
  std::vector<R> pts = {R(0), R(1)};
  std::vector<R> seg = {R(1)};
  propagate_breakpoints(sys, w, pts, seg);
  return CylinderInterval<R>{w, pts[0], seg[0]};
}

// All 2^n level-n intervals in lexicographic (= increasing) order.  Each
// word re-composes from the root: O(n 2^n) map evaluations.
template <class R>
std::vector<CylinderInterval<R>> level_intervals(const ContractionSystem<R>& sys, int n) {
  sys.check_depth(n);
  if (n == 0) return {CylinderInterval<R>{Word{}, R(0), R(1)}};
  std::vector<CylinderInterval<R>> out;
  out.reserve(std::size_t{1} << n);
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << n); ++i)
    out.push_back(interval_for_word(sys, word_from_index(i, n)));
  return out;
}

// The open middle gap of I_w, i.e. phi_w(G) with G = (phi0(1), phi1(0)).
template <class R>
CylinderInterval<R> gap(const ContractionSystem<R>& sys, const Word& w) {
  sys.check_depth(w.size() + 1);
  std::vector<R> pts = {sys.gap_lo(), sys.gap_hi()};
  std::vector<R> seg = {pts[1] - pts[0]};
  propagate_breakpoints(sys, w, pts, seg);
  return CylinderInterval<R>{w, pts[0], seg[0]};
}

template <class R>
AffineRescale<R> rescale(const CylinderInterval<R>& iv) {
  if (!(iv.length > R(0))) throw config_error("rescale: degenerate interval");
  const R s = R(1) / iv.length;
  return AffineRescale<R>{s, -iv.left * s};
}

// The unique length-n word w with x in I_w (cylinders are closed; gap
// endpoints belong to the adjacent cylinder).  Throws gap_error with the
// offending level when x falls into a gap.
template <class R>
Word code_point(const ContractionSystem<R>& sys, const R& x, int n) {
  sys.check_depth(n);
  if (x < R(0) || x > R(1)) throw config_error("code_point: x outside [0,1]");
  Symbols s;
  s.reserve(static_cast<std::size_t>(n));
  R z = x;
  for (int level = 0; level < n; ++level) {
    if (z <= sys.gap_lo()) {
      s.push_back(0);
      z = sys.phi0.inverse(z);
    } else if (z >= sys.gap_hi()) {
      s.push_back(1);
      z = sys.phi1.inverse(z);
    } else {
      throw gap_error("code_point: x lies in a gap at level " + std::to_string(level), level);
    }
  }
  return Word(std::move(s));
}

}  // namespace cantor
