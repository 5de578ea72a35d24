#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "cantor/conjugacy.hpp"
#include "cantor/errors.hpp"
#include "cantor/hierarchy.hpp"
#include "cantor/metrics.hpp"
#include "cantor/ratioset.hpp"
#include "cantor/scaling.hpp"
#include "cantor/symbolic.hpp"
#include "cantor/system.hpp"

namespace cantor {

// Endpoints of all level-`depth` cylinders, used as template breakpoints
// when rescaling sub-hierarchies.  Cache the result around hot loops.
template <class R>
std::vector<R> hierarchy_breakpoints(const ContractionSystem<R>& sys, int depth) {
  std::vector<R> pts;
  pts.reserve((std::size_t{2} << depth));
  for (const auto& iv : level_intervals(sys, depth)) {
    pts.push_back(iv.left);
    pts.push_back(iv.right());
  }
  return pts;
}

// The level-`depth` skeleton of C below I_u, affinely rescaled to [0,1]:
// the cylinders I_{u.v} for |v| = depth carried by rescale(I_u).  Segment
// lengths stay multiplicative, so this is stable for long u.
template <class R>
RescaledSet<R> rescaled_subhierarchy(const ContractionSystem<R>& sys, const Word& u, int depth,
                                     const std::vector<R>& template_pts) {
  using std::pow;
  std::vector<R> pts = template_pts;
  std::vector<R> seg(pts.size() - 1);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) seg[i] = pts[i + 1] - pts[i];
  propagate_breakpoints(sys, u, pts, seg);
  R total(0);
  for (const auto& s : seg) total += s;

  RescaledSet<R> out;
  out.depth = depth;
  out.intervals.reserve(std::size_t{1} << depth);
  R pos(0);
  for (std::size_t i = 0; i < seg.size(); ++i) {
    const R len = seg[i] / total;
    if (i % 2 == 0) out.intervals.emplace_back(pos, len);
    pos += len;
  }
  out.trunc = pow(sys.beta, R(depth));
  out.provenance = "subhierarchy of " + sys.family + " below " + to_string(u);
  return out;
}

template <class R>
RescaledSet<R> rescaled_subhierarchy(const ContractionSystem<R>& sys, const Word& u, int depth) {
  return rescaled_subhierarchy(sys, u, depth, hierarchy_breakpoints(sys, depth));
}

template <class R>
struct LimitSet {
  RescaledSet<R> set;
  int n_used = 0;
  R bound{};  // certified C1 distance of the depth-n_used conjugacy to the limit
};

// Limit set C(y) along the finite past y: the image of the level-`depth`
// hierarchy under the deepest available renormalized conjugacy, which is
// exactly the rescaled sub-hierarchy below the word y_{-n}...y_{-1}.
template <class R>
LimitSet<R> limit_set(const ContractionSystem<R>& sys, const DualWord& y, int depth) {
  LimitSet<R> out;
  out.set = rescaled_subhierarchy(sys, y.as_word(), depth);
  out.set.provenance = "limit set along past " + to_string(y);
  out.n_used = y.size();
  out.bound = conjugacy_tail_bound(sys, out.n_used);
  return out;
}

// Scenery sequence: for n = 0..n_max the level-`depth` skeleton of C_{n,x},
// the rescaled sub-hierarchy below I_{x_0...x_n}.
template <class R>
std::vector<RescaledSet<R>> scenery_sequence(const ContractionSystem<R>& sys, const Word& x_prefix,
                                             int n_max, int depth) {
  if (x_prefix.size() < n_max + depth)
    throw config_error("scenery_sequence: prefix shorter than n_max + depth");
  const auto tmpl = hierarchy_breakpoints(sys, depth);
  std::vector<RescaledSet<R>> out;
  out.reserve(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    const Word u(Symbols(x_prefix.symbols.begin(), x_prefix.symbols.begin() + n + 1));
    out.push_back(rescaled_subhierarchy(sys, u, depth, tmpl));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rigidity conjugacies (gap-by-gap construction from the dynamics)

// Self-map of the root gap of system A onto the root gap of system B with
// first and second derivative oracles; the free parameter of the rigidity
// construction.
template <class R>
struct GapSeed {
  std::function<R(const R&)> eval;
  std::function<R(const R&)> d1;
  std::function<R(const R&)> d2;
  std::string describe;
};

// Affine seed G_A -> G_B (the "identity" choice whenever the gaps agree).
template <class R>
GapSeed<R> affine_gap_seed(const ContractionSystem<R>& A, const ContractionSystem<R>& B) {
  const R alo = A.gap_lo(), blo = B.gap_lo();
  const R s = (B.gap_hi() - blo) / (A.gap_hi() - alo);
  return {[alo, blo, s](const R& t) { return blo + s * (t - alo); },
          [s](const R&) { return s; }, [](const R&) { return R(0); }, "affine"};
}

// Seed given by an explicit diffeomorphism restricted to the root gap.
template <class R>
GapSeed<R> function_gap_seed(std::function<R(const R&)> f, std::function<R(const R&)> f1,
                             std::function<R(const R&)> f2, std::string name) {
  return {std::move(f), std::move(f1), std::move(f2), std::move(name)};
}

template <class R>
struct RigidityPointValue {
  R value{}, d1{}, d2{};
  bool in_gap = false;
  int level = 0;  // gap level, or the cut depth when the point is unresolved
};

// The rigidity conjugacy evaluated at one point.  Descends the hierarchy of
// A by branch inverses; on the gap G_{x_0...x_{k-1}} the map is
// phiB_{x_0...x_{k-1}} o seed o S^k, exactly as the dynamics dictates.
// Points still unresolved at the cut depth lie within beta^depth of the
// Cantor set: there the value interpolates the coding bijection through
// phiB_w o S^depth, and the derivatives report the coding bijection's local
// scales |IB_w| / |IA_w| (these converge to the conjugacy derivative on C;
// the raw derivative of the cut-stage filler does not).
template <class R>
RigidityPointValue<R> rigidity_eval(const ContractionSystem<R>& A, const ContractionSystem<R>& B,
                                    const GapSeed<R>& seed, int depth, const R& x) {
  using std::log;
  RigidityPointValue<R> out;
  R z = x, z1 = R(1), z2 = R(0);  // S^k(x) with first two derivatives
  Symbols w;
  int level = 0;
  for (; level < depth; ++level) {
    int s;
    if (z <= A.gap_lo())
      s = 0;
    else if (z >= A.gap_hi())
      s = 1;
    else
      break;  // z in the root gap: x in a level-`level` gap of A
    const auto& phi = A.branch(s);
    const R u = phi.inverse(z);
    R pv, p1, p2;
    phi.eval012(u, pv, p1, p2);
    (void)pv;
    // inverse-map chain: u' = 1/phi'(u), u'' = -phi''(u) u'^3
    const R i1 = R(1) / p1;
    const R i2 = -p2 * i1 * i1 * i1;
    z2 = i2 * z1 * z1 + i1 * z2;
    z1 = i1 * z1;
    z = u;
    w.push_back(static_cast<std::uint8_t>(s));
  }

  out.in_gap = level < depth;
  out.level = level;
  const Word word(w);

  if (!out.in_gap) {
    // value: forward the preimage through B's branches
    R v = z;
    for (std::size_t j = w.size(); j-- > 0;) v = B.branch(w[j])(v);
    out.value = v;
    // derivatives from the coding bijection's interval scales
    std::vector<R> pa = {R(0), A.gap_lo(), A.gap_hi(), R(1)};
    std::vector<R> sa = {pa[1], pa[2] - pa[1], R(1) - pa[2]};
    propagate_breakpoints(A, word, pa, sa);
    std::vector<R> pb = {R(0), B.gap_lo(), B.gap_hi(), R(1)};
    std::vector<R> sb = {pb[1], pb[2] - pb[1], R(1) - pb[2]};
    propagate_breakpoints(B, word, pb, sb);
    const R la = sa[0] + sa[1] + sa[2], lb = sb[0] + sb[1] + sb[2];
    out.d1 = lb / la;
    // D log DPhi from the child scales, anchored at the child midpoints
    const R s0 = sb[0] / sa[0], s1 = sb[2] / sa[2];
    const R m0 = pa[0] + sa[0] / R(2), m1 = pa[2] + sa[2] / R(2);
    const R dlog = (log(s1) - log(s0)) / (m1 - m0);
    out.d2 = out.d1 * dlog;
    return out;
  }

  R v = seed.eval(z), v1 = seed.d1(z), v2 = seed.d2(z);
  // chain through S^k then forward through B's branches, innermost first
  v2 = v2 * z1 * z1 + v1 * z2;
  v1 = v1 * z1;
  for (std::size_t j = w.size(); j-- > 0;) {
    const auto& phiB = B.branch(w[j]);
    R bv, b1, b2;
    phiB.eval012(v, bv, b1, b2);
    v2 = b2 * v1 * v1 + b1 * v2;
    v1 = b1 * v1;
    v = bv;
  }
  out.value = v;
  out.d1 = v1;
  out.d2 = v2;
  return out;
}

template <class R>
struct RigidityConjugacy {
  ConjugacyGrid<R> grid;
  R table_mismatch{};  // max componentwise |log R_A - log R_B| over the check table
  R table_tolerance{};
  int depth = 0;
};

// Builds the rigidity conjugacy between two systems with equal scaling
// functions (checked against the combined table error before building).
template <class R>
RigidityConjugacy<R> rigidity_conjugacy(const ContractionSystem<R>& A,
                                        const ContractionSystem<R>& B, const GapSeed<R>& seed,
                                        int depth, const std::vector<R>& grid, int check_m = 6,
                                        int check_n = 16) {
  using std::log1p;
  RigidityConjugacy<R> out;
  out.depth = depth;

  const auto tA = build_scaling_table(A, check_m, check_n);
  const auto tB = build_scaling_table(B, check_m, check_n);
  for (std::size_t i = 0; i < tA.entries.size(); ++i)
    out.table_mismatch = std::max(out.table_mismatch, log_diff_inf(tA.entries[i], tB.entries[i]));
  out.table_tolerance = log1p(tA.err_bound) + log1p(tB.err_bound) + R(1e-12);
  if (out.table_mismatch > out.table_tolerance)
    throw invariant_violation(
        "rigidity_conjugacy: scaling functions differ beyond the combined table error; "
        "the systems are not C1-conjugate at certified accuracy");

  out.grid.x = grid;
  out.grid.v.reserve(grid.size());
  out.grid.dv.reserve(grid.size());
  out.grid.d2v.reserve(grid.size());
  for (const R& x : grid) {
    const auto p = rigidity_eval(A, B, seed, depth, x);
    out.grid.v.push_back(p.value);
    out.grid.dv.push_back(p.d1);
    out.grid.d2v.push_back(p.d2);
  }
  return out;
}

// Conjugacy-equation residual SB(Phi(a)) - Phi(SA(a)) at a point a in a
// level >= 1 gap of A.
template <class R>
R conjugacy_residual(const ContractionSystem<R>& A, const ContractionSystem<R>& B,
                     const GapSeed<R>& seed, int depth, const R& a) {
  using std::abs;
  int s;
  if (a <= A.gap_lo())
    s = 0;
  else if (a >= A.gap_hi())
    s = 1;
  else
    throw config_error("conjugacy_residual: point lies in the root gap");
  const R sa = A.branch(s).inverse(a);
  const R phi_a = rigidity_eval(A, B, seed, depth, a).value;
  const R phi_sa = rigidity_eval(A, B, seed, depth, sa).value;
  const R sb = B.branch(s).inverse(phi_a);
  return abs(sb - phi_sa);
}

// ---------------------------------------------------------------------------
// Smoothness probe

template <class R>
struct ProbeReport {
  std::vector<R> scale_estimates;  // per dyadic separation, coarse to fine
  R estimate{};                    // max over scales (grid lower bound)
  bool stable = true;
  int k = 1;
};

// Finite-difference estimate of the Holder constant of D^{k-1} log Df
// across dyadic scale pairs.  Flags divergence when the finest scales keep
// growing instead of saturating.
template <class R>
ProbeReport<R> smoothness_probe(const ConjugacyGrid<R>& f, int k, const R& gamma = R(1)) {
  using std::abs;
  using std::isfinite;
  using std::log;
  using std::pow;
  if (k < 1 || k > 2) throw config_error("smoothness_probe: k must be 1 or 2");
  if (k == 2 && !f.has_d2())
    throw config_error("smoothness_probe: grid carries no second-derivative samples");
  const std::size_t n = f.size();
  if (n < 9) throw config_error("smoothness_probe: insufficient grid resolution");

  std::vector<R> g(n);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = k == 1 ? log(f.dv[i]) : f.d2v[i] / f.dv[i];

  ProbeReport<R> rep;
  rep.k = k;
  std::vector<std::size_t> steps;
  for (std::size_t s = (n - 1) / 2; s >= 1; s /= 2) steps.push_back(s);
  for (std::size_t s : steps) {
    R worst(0);
    for (std::size_t i = 0; i + s < n; ++i) {
      if (!isfinite(g[i]) || !isfinite(g[i + s])) continue;
      const R q = abs(g[i + s] - g[i]) / pow(f.x[i + s] - f.x[i], gamma);
      if (q > worst) worst = q;
    }
    rep.scale_estimates.push_back(worst);
    if (worst > rep.estimate) rep.estimate = worst;
  }
  // stability: the finest scales must not outgrow the mid scales
  const std::size_t m = rep.scale_estimates.size();
  if (m >= 4) {
    R coarse(0);
    for (std::size_t i = 0; i + 2 < m; ++i) coarse = std::max(coarse, rep.scale_estimates[i]);
    const R fine = std::max(rep.scale_estimates[m - 1], rep.scale_estimates[m - 2]);
    rep.stable = fine <= R(2) * coarse + real_eps<R>() * R(1024);
  }
  return rep;
}

}  // namespace cantor
