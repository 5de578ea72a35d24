#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "cantor/errors.hpp"
#include "cantor/hierarchy.hpp"
#include "cantor/symbolic.hpp"
#include "cantor/system.hpp"

namespace cantor {

// A sampled order-preserving self-map of [0,1] with derivative values, the
// common currency for renormalized and rigidity conjugacies.
template <class R>
struct ConjugacyGrid {
  std::vector<R> x;    // strictly increasing, includes 0 and 1
  std::vector<R> v;    // map values
  std::vector<R> dv;   // first derivative
  std::vector<R> d2v;  // second derivative (empty when not sampled)

  std::size_t size() const { return x.size(); }
  bool has_d2() const { return !d2v.empty(); }
};

// Uniform dyadic grid with 2^pow2 + 1 points.
template <class R>
std::vector<R> dyadic_grid(int pow2) {
  const std::uint64_t n = std::uint64_t{1} << pow2;
  std::vector<R> x;
  x.reserve(n + 1);
  for (std::uint64_t i = 0; i <= n; ++i) x.push_back(R(i) / R(n));
  return x;
}

inline constexpr int kDefaultGridPow = 10;  // 1025 points

// Renormalized conjugacy of depth n along the past y:
//   Phi^y_n = rescale(I_{y_{-n}...y_{-1}}) o phi_{y_{-n}} o ... o phi_{y_{-1}},
// sampled with first and second derivatives by the chain rule.
template <class R>
ConjugacyGrid<R> phi_grid(const ContractionSystem<R>& sys, const DualWord& y, int n,
                          const std::vector<R>& grid) {
  if (n > y.size()) throw config_error("phi_grid: depth n exceeds |y|");
  sys.check_depth(n);
  const Word u = y.suffix(n).as_word();
  CylinderInterval<R> iv =
      n == 0 ? CylinderInterval<R>{Word{}, R(0), R(1)} : interval_for_word(sys, u);
  const R inv_len = R(1) / iv.length;

  ConjugacyGrid<R> out;
  out.x = grid;
  out.v.reserve(grid.size());
  out.dv.reserve(grid.size());
  out.d2v.reserve(grid.size());
  for (const R& x0 : grid) {
    R v = x0, d1 = R(1), d2 = R(0);
    for (int i = 0; i < n; ++i) {
      // innermost branch first: y_{-1}, then y_{-2}, ...
      const auto& phi = sys.branch(y.recent(i));
      R pv, p1, p2;
      phi.eval012(v, pv, p1, p2);
      d2 = p2 * d1 * d1 + p1 * d2;
      d1 = p1 * d1;
      v = pv;
    }
    out.v.push_back((v - iv.left) * inv_len);
    out.dv.push_back(d1 * inv_len);
    out.d2v.push_back(d2 * inv_len);
  }
  return out;
}

// Constants from the exponential-convergence bound:
//   ||Phi^y_n - Phi^y||_C1 < k1 beta^(n gamma),  k1 = e^K k0,
//   k0 = (e^(e^K) - 1) / e^K.
template <class R>
R k0_constant(const R& K) {
  using std::exp;
  return (exp(exp(K)) - R(1)) / exp(K);
}

template <class R>
R k1_constant(const R& K) {
  using std::exp;
  return exp(K) * k0_constant(K);
}

template <class R>
struct LimitConjugacy {
  ConjugacyGrid<R> grid;
  int n_used = 0;
  R bound{};      // certified C1 distance to the limit: k1 beta^(n_used gamma)
  bool reached = false;  // whether the requested tolerance was met
};

// Certified C1 distance of the depth-n approximant to the limit.  Affine
// systems (K = 0) have distortion exactly 1, so every approximant already
// is the limit and the bound collapses to 0.
template <class R>
R conjugacy_tail_bound(const ContractionSystem<R>& sys, int n) {
  using std::pow;
  if (sys.K == R(0)) return R(0);
  return k1_constant(sys.K) * pow(sys.beta, R(n) * sys.gamma);
}

// Smallest-depth approximation of the limit conjugacy Phi^y whose certified
// C1 distance to the limit is at most tol.  When |y| is too short for tol,
// returns the deepest available approximation with its achievable bound.
template <class R>
LimitConjugacy<R> limit_conjugacy(const ContractionSystem<R>& sys, const DualWord& y, const R& tol,
                                  const std::vector<R>& grid) {
  int n = y.size();
  R bound = conjugacy_tail_bound(sys, n);
  const bool reached = bound <= tol;
  if (reached) {
    // walk back to the smallest depth that still meets tol
    while (n > 0 && conjugacy_tail_bound(sys, n - 1) <= tol) --n;
    bound = conjugacy_tail_bound(sys, n);
  }
  LimitConjugacy<R> out;
  out.grid = phi_grid(sys, y, n, grid);
  out.n_used = n;
  out.bound = bound;
  out.reached = reached;
  return out;
}

}  // namespace cantor
