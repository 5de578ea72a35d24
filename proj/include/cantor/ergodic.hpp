#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "cantor/errors.hpp"
#include "cantor/metrics.hpp"
#include "cantor/rng.hpp"
#include "cantor/scaling.hpp"
#include "cantor/scenery.hpp"
#include "cantor/symbolic.hpp"
#include "cantor/system.hpp"
#include "cantor/thermo.hpp"

namespace cantor {

struct OrbitSample {
  std::uint64_t seed = 0;
  Symbols symbols;
  int law_depth = 0;
  std::string law;
};

// Draws a symbol sequence whose law is the order-(depth-1) Markov
// approximation of the Gibbs chain: conditional probabilities are cylinder
// weight ratios, and the warm-up start uses the marginal prefix weights, so
// the window law is stationary from step 0.
template <class R>
OrbitSample sample_orbit(const CylinderMeasure<R>& gibbs, int length, std::uint64_t seed) {
  if (gibbs.depth < 2) throw config_error("sample_orbit: gibbs depth must be >= 2");
  const int p = gibbs.depth;

  // marginal weights of prefixes per level: level j holds 2^j sums
  std::vector<std::vector<R>> marg(static_cast<std::size_t>(p) + 1);
  marg[static_cast<std::size_t>(p)] = gibbs.weights;
  for (int j = p; j-- > 0;) {
    auto& cur = marg[static_cast<std::size_t>(j)];
    const auto& fine = marg[static_cast<std::size_t>(j) + 1];
    cur.resize(std::size_t{1} << j);
    for (std::size_t q = 0; q < cur.size(); ++q) cur[q] = fine[2 * q] + fine[2 * q + 1];
  }

  CounterRng rng(seed);
  OrbitSample orbit;
  orbit.seed = seed;
  orbit.law_depth = p;
  orbit.law = "gibbs d=" + to_decimal(gibbs.d) + " depth=" + std::to_string(p);
  orbit.symbols.reserve(static_cast<std::size_t>(length));

  std::uint64_t ctx = 0;  // index of the last min(k, p-1) symbols
  int ctx_len = 0;
  for (int k = 0; k < length; ++k) {
    const auto& lvl = marg[static_cast<std::size_t>(ctx_len)];
    const auto& nxt = marg[static_cast<std::size_t>(ctx_len) + 1];
    const R denom = lvl[ctx];
    if (!(denom > R(0))) throw invariant_violation("sample_orbit: zero-probability context");
    const double p0 = static_cast<double>(nxt[2 * ctx] / denom);
    const std::uint8_t s = rng.uniform01() < p0 ? 0 : 1;
    orbit.symbols.push_back(s);
    ctx = (ctx << 1) | s;
    if (ctx_len < p - 1)
      ++ctx_len;
    else
      ctx &= (std::uint64_t{1} << (p - 1)) - 1;
  }
  return orbit;
}

template <class R>
R triple_coord(const RatioTriple<R>& t, int coord) {
  return coord == 0 ? t.l : (coord == 1 ? t.g : t.r);
}

namespace detail {

// last min(n+1, window) symbols of x_0..x_n as a word
inline Word orbit_window(const Symbols& x, int n, int window) {
  const int len = std::min(n + 1, window);
  return Word(Symbols(x.begin() + (n + 1 - len), x.begin() + (n + 1)));
}

// batch-means 3 sigma band for the mean of a dependent series
template <class R>
R batch_band(const std::vector<R>& v, int batches) {
  using std::sqrt;
  const std::size_t bs = v.size() / static_cast<std::size_t>(batches);
  if (bs < 2) return R(0);
  std::vector<R> means;
  for (int b = 0; b < batches; ++b) {
    R acc(0);
    for (std::size_t i = 0; i < bs; ++i) acc += v[static_cast<std::size_t>(b) * bs + i];
    means.push_back(acc / R(static_cast<double>(bs)));
  }
  R mean(0);
  for (const auto& m : means) mean += m;
  mean /= R(batches);
  R var(0);
  for (const auto& m : means) var += (m - mean) * (m - mean);
  var /= R(batches - 1);
  return R(3) * sqrt(var / R(batches));
}

}  // namespace detail

template <class R>
struct BirkhoffReport {
  R time_avg{}, ens_avg{}, diff{}, band{};
  R trunc{};  // systematic allowance from window and table truncation
  int n_used = 0;
  bool pass = true;
};

// Time average of f(R_{n,x}) along the realized orbit against the ensemble
// average sum_w gibbs(w) f(R(w-suffix)) from the scaling table.  R_{n,x} is
// evaluated on the window-truncated word; the window tail is part of the
// reported systematic allowance.
template <class R>
BirkhoffReport<R> birkhoff_ratio_test(const ContractionSystem<R>& sys, const OrbitSample& orbit,
                                      int n_max, int coord, const CylinderMeasure<R>& gibbs_ens,
                                      const ScalingTable<R>& table, int window = 40,
                                      int batches = 32) {
  using std::pow;
  if (static_cast<int>(orbit.symbols.size()) < n_max + 1)
    throw config_error("birkhoff_ratio_test: orbit shorter than n_max");
  if (gibbs_ens.depth != table.m)
    throw config_error("birkhoff_ratio_test: ensemble depth must match table depth");
  window = std::min(window, sys.depth_cap - 1);

  std::vector<R> series;
  series.reserve(static_cast<std::size_t>(n_max));
  R acc(0);
  for (int n = 0; n < n_max; ++n) {
    const Word w = detail::orbit_window(orbit.symbols, n, window);
    const R v = triple_coord(ratio_geometry(sys, w), coord);
    series.push_back(v);
    acc += v;
  }

  BirkhoffReport<R> rep;
  rep.n_used = n_max;
  rep.time_avg = acc / R(n_max);
  R ens(0);
  for (std::uint64_t u = 0; u < table.entries.size(); ++u)
    ens += gibbs_ens.weights[u] * triple_coord(table.entries[u], coord);
  rep.ens_avg = ens;
  rep.diff = rep.time_avg - rep.ens_avg;
  rep.band = detail::batch_band(series, batches);
  // window truncation of R_{n,x} plus the Holder tail of the table entries
  rep.trunc = R(2) * sys.K * pow(sys.beta, R(window - 1) * sys.gamma) +
              R(2) * sys.K * pow(sys.beta, R(table.m) * sys.gamma) + R(1e-12);
  using std::abs;
  rep.pass = abs(rep.diff) <= rep.band + rep.trunc;
  return rep;
}

// ---------------------------------------------------------------------------
// Set-valued scenery process

// Built-in bounded functionals of a rescaled set with declared Lipschitz
// constants with respect to d_H.  The first-gap and largest-gap constants
// hold on skeleton families whose gaps dominate the compared distances,
// which is the regime every test and report stays in.
enum class SetFunctional { refdist, first_gap_left, first_gap_len, largest_gap_mid };

inline const char* to_string(SetFunctional g) {
  switch (g) {
    case SetFunctional::refdist: return "refdist";
    case SetFunctional::first_gap_left: return "first_gap_left";
    case SetFunctional::first_gap_len: return "first_gap_len";
    default: return "largest_gap_mid";
  }
}

template <class R>
R lipschitz_constant(SetFunctional g) {
  return g == SetFunctional::first_gap_len ? R(2) : R(1);
}

template <class R>
R eval_functional(SetFunctional g, const RescaledSet<R>& s, const RescaledSet<R>& ref) {
  switch (g) {
    case SetFunctional::refdist:
      return d_h(s, ref).value;
    case SetFunctional::first_gap_left:
      return s.right(0);
    case SetFunctional::first_gap_len:
      return s.left(1) - s.right(0);
    case SetFunctional::largest_gap_mid: {
      R best_len(-1), mid(0);
      for (std::size_t i = 0; i + 1 < s.count(); ++i) {
        const R len = s.left(i + 1) - s.right(i);
        if (len > best_len) {
          best_len = len;
          mid = (s.right(i) + s.left(i + 1)) / R(2);
        }
      }
      return mid;
    }
  }
  throw config_error("unknown set functional");
}

template <class R>
struct SceneryProcessRow {
  int n = 0;
  R f_actual{}, f_limit{}, run_actual{}, run_limit{}, band{};
};

template <class R>
struct SceneryProcessReport {
  R time_avg_actual{}, time_avg_limit{}, ens_avg{};
  R band{};            // 3 sigma batch-means band of the actual series
  R avg_diff_bound{};  // (Lip k1 / N) sum beta^(n gamma) + truncation allowance
  bool perterm_pass = true;
  bool avg_pass = true;
  bool ens_pass = true;
  std::vector<SceneryProcessRow<R>> rows;
};

struct SceneryProcessParams {
  int window = 40;    // symbols of realized past kept exactly
  int pad = 12;       // zero-padding prepended on the limit side
  int ens_depth = 12; // dual cylinder depth of the ensemble sum
  int assert_nmax = 24;
  int batches = 32;
  int rows_stride = 1;
};

// Follows g along the realized sceneries C_{n,x} and along the limit sets
// C(sigma^(n+1) x), asserts the per-term exponential pairing bound of the
// asymptotic theorem, and compares the time average with the ensemble
// average over Gibbs-weighted pasts.
template <class R>
SceneryProcessReport<R> scenery_process_sim(const ContractionSystem<R>& sys,
                                            const OrbitSample& orbit, int steps, int depth,
                                            SetFunctional g, const CylinderMeasure<R>& gibbs_ens,
                                            SceneryProcessParams pp = {}) {
  using std::abs;
  using std::pow;
  if (static_cast<int>(orbit.symbols.size()) < steps)
    throw config_error("scenery_process_sim: orbit shorter than steps");
  pp.window = std::min(pp.window, sys.depth_cap - 1 - depth);
  if (pp.pad >= pp.window) throw config_error("scenery_process_sim: pad must be below window");
  // the per-term pairing bound only applies while both words are untruncated
  pp.assert_nmax = std::min(pp.assert_nmax, pp.window - pp.pad - 1);

  const auto tmpl = hierarchy_breakpoints(sys, depth);
  const RescaledSet<R> ref = rescaled_subhierarchy(sys, Word{}, depth, tmpl);
  const R lip = lipschitz_constant<R>(g);
  const R k1 = k1_constant(sys.K);

  SceneryProcessReport<R> rep;
  std::vector<R> actual, limit;
  actual.reserve(static_cast<std::size_t>(steps));
  limit.reserve(static_cast<std::size_t>(steps));
  R run_a(0), run_l(0);
  for (int n = 0; n < steps; ++n) {
    const Word wa = detail::orbit_window(orbit.symbols, n, pp.window);
    Symbols padded(static_cast<std::size_t>(pp.pad), 0);
    const Word wl_core = detail::orbit_window(orbit.symbols, n, pp.window - pp.pad);
    padded.insert(padded.end(), wl_core.symbols.begin(), wl_core.symbols.end());
    const Word wl(std::move(padded));

    const R fa = eval_functional(g, rescaled_subhierarchy(sys, wa, depth, tmpl), ref);
    const R fl = eval_functional(g, rescaled_subhierarchy(sys, wl, depth, tmpl), ref);
    actual.push_back(fa);
    limit.push_back(fl);
    run_a += fa;
    run_l += fl;

    if (n <= pp.assert_nmax) {
      const R bound = lip * k1 * pow(sys.beta, R(n) * sys.gamma) + R(1e-9);
      if (abs(fa - fl) > bound) rep.perterm_pass = false;
    }
    if (n % pp.rows_stride == 0 || n + 1 == steps) {
      SceneryProcessRow<R> row;
      row.n = n;
      row.f_actual = fa;
      row.f_limit = fl;
      row.run_actual = run_a / R(n + 1);
      row.run_limit = run_l / R(n + 1);
      rep.rows.push_back(row);
    }
  }
  rep.time_avg_actual = run_a / R(steps);
  rep.time_avg_limit = run_l / R(steps);
  rep.band = detail::batch_band(actual, pp.batches);
  for (auto& row : rep.rows) row.band = rep.band;

  const R bg = pow(sys.beta, sys.gamma);
  rep.avg_diff_bound = lip * k1 / (R(steps) * (R(1) - bg)) + R(1e-9);
  rep.avg_pass = abs(rep.time_avg_actual - rep.time_avg_limit) <= rep.avg_diff_bound;

  // ensemble side: Gibbs-weighted limit-set values over depth-ens pasts
  if (gibbs_ens.depth != pp.ens_depth)
    throw config_error("scenery_process_sim: ensemble measure depth mismatch");
  R ens(0);
  for (std::uint64_t u = 0; u < gibbs_ens.weights.size(); ++u) {
    Symbols s(static_cast<std::size_t>(pp.pad), 0);
    const Word uw = word_from_index(u, pp.ens_depth);
    s.insert(s.end(), uw.symbols.begin(), uw.symbols.end());
    ens += gibbs_ens.weights[u] * eval_functional(g, rescaled_subhierarchy(sys, Word(std::move(s)), depth, tmpl), ref);
  }
  rep.ens_avg = ens;
  const R ens_bias = lip * k1 * pow(sys.beta, R(pp.ens_depth) * sys.gamma) + R(1e-9);
  rep.ens_pass = abs(rep.time_avg_actual - rep.ens_avg) <= rep.band + ens_bias;
  return rep;
}

}  // namespace cantor
