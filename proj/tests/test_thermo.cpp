#include "helpers.hpp"

using namespace cantor;
using ct::near;
using R = ct::real128;

TEST_CASE("middle-third dimension is log 2 / log 3 at every depth", "[thermo]") {
  using std::log;
  const auto sys = make_middle_third<R>();
  const R target = log(R(2)) / log(R(3));
  for (int n : {2, 5, 8}) {
    const auto dim = bowen_root(sys, n, R(1e-10));
    CHECK(near(dim.d, target, R(1e-9)));
    CHECK(dim.lower <= dim.d);
    CHECK(dim.d <= dim.upper);
    CHECK(dim.upper - dim.lower <= R(1e-10) + R(1e-15));
  }
  CHECK_THROWS_AS(bowen_root(sys, 1, R(1e-9)), config_error);
  CHECK_THROWS_AS(bowen_root(sys, 12, R(1e-9), 100), resource_limit);
}

TEST_CASE("Moran roots of linear systems", "[thermo]") {
  using std::pow;
  const auto even = make_linear<R>(R(0.25), R(0.25));
  CHECK(near(bowen_root(even, 6, R(1e-10)).d, R(0.5), R(1e-9)));

  const auto lin = make_linear<R>(R(0.25), R(0.5));
  for (int n : {3, 6, 9}) {
    const auto dim = bowen_root(lin, n, R(1e-11));
    // depth-n root satisfies l^d + r^d = 1
    CHECK(near(pow(R(0.25), dim.d) + pow(R(0.5), dim.d), R(1), R(1e-10)));
  }
}

TEST_CASE("perturbed dimension stabilizes across depths", "[thermo]") {
  using std::abs;
  const auto sys = make_perturbed<R>(R(0.1), R(0.1));
  const auto d14 = bowen_root(sys, 14, R(1e-8));
  const auto d16 = bowen_root(sys, 16, R(1e-8));
  // measured drift between depths 14 and 16 is ~8.5e-6
  CHECK(abs(d16.d - d14.d) <= R(1e-5));
  // certified brackets contain both roots and are nested
  CHECK(d14.lower <= d16.d);
  CHECK(d16.d <= d14.upper);
  CHECK(d14.lower <= d16.lower + R(1e-12));
  CHECK(d16.upper <= d14.upper + R(1e-12));
}

TEST_CASE("conformal weights of the built-in families", "[thermo]") {
  using std::exp;
  using std::log;
  const auto mt = make_middle_third<R>();
  const auto mu = conformal_weights(mt, log(R(2)) / log(R(3)), 3);
  REQUIRE(mu.weights.size() == 8);
  for (const auto& w : mu.weights) CHECK(near(w, R(1) / 8, R(1e-12)));
  CHECK(near(mu.total, R(1)));

  // linear weights are exactly multiplicative along the word
  const auto lin = make_linear<R>(R(0.25), R(0.5));
  const auto dl = bowen_root(lin, 6, R(1e-12)).d;
  const auto ml = conformal_weights(lin, dl, 5);
  for (std::uint64_t i = 0; i < ml.weights.size(); ++i) {
    R expect(1);
    for (int j = 0; j < 5; ++j)
      expect *= exp(dl * log((i >> (4 - j)) & 1 ? R(0.5) : R(0.25)));
    CHECK(near(ml.weights[i], expect, R(1e-12)));
  }
}

TEST_CASE("conformal refinement consistency within the distortion band", "[thermo]") {
  using std::abs;
  using std::log;
  using std::pow;
  const auto sys = make_perturbed<R>(R(0.1), R(0.1));
  const R d = bowen_root(sys, 12, R(1e-9)).d;
  // at depth 8 the certified band K d beta^{(n-1)} still dominates the
  // intrinsic local Moran defect of the scaling function (~1.5e-4)
  const int n = 8;
  const auto muP = conformal_weights(sys, d, n - 1);
  const auto muC = conformal_weights(sys, d, n);
  R worst(0);
  for (std::uint64_t w = 0; w < muP.weights.size(); ++w) {
    const R ratio = (muC.weights[2 * w] + muC.weights[2 * w + 1]) / muP.weights[w];
    worst = std::max(worst, R(abs(log(ratio))));
  }
  CHECK(worst <= sys.K * d * pow(sys.beta, R(n - 1)));
  // the defect saturates rather than decays; guard its level at depth 12
  const auto mP = conformal_weights(sys, d, 11);
  const auto mC = conformal_weights(sys, d, 12);
  R sat(0);
  for (std::uint64_t w = 0; w < mP.weights.size(); ++w) {
    const R ratio = (mC.weights[2 * w] + mC.weights[2 * w + 1]) / mP.weights[w];
    sat = std::max(sat, R(abs(log(ratio))));
  }
  CHECK(sat <= R(1e-3));
}

TEST_CASE("gibbs weights: exact cases and the perturbed defect", "[thermo]") {
  using std::exp;
  using std::log;
  const auto mt = make_middle_third<R>();
  GibbsInfo<R> info;
  const auto gm = gibbs_weights(mt, log(R(2)) / log(R(3)), 6, &info);
  for (const auto& w : gm.weights) CHECK(near(w, R(1) / 64, R(1e-20)));
  CHECK(info.invariance_defect <= R(1e-20));
  CHECK(near(info.lambda, R(1), R(1e-12)));

  const auto lin = make_linear<R>(R(0.25), R(0.5));
  const R dl = bowen_root(lin, 8, R(1e-12)).d;
  GibbsInfo<R> il;
  const auto gl = gibbs_weights(lin, dl, 8, &il);
  // invariance is exact: l^d + r^d = 1
  CHECK(il.invariance_defect <= R(1e-12));
  const auto cl = conformal_weights(lin, dl, 8);
  for (std::uint64_t i = 0; i < gl.weights.size(); ++i)
    CHECK(near(gl.weights[i], cl.weights[i], R(1e-10)));

  const auto sys = make_perturbed<R>(R(0.1), R(0.1));
  const R d = bowen_root(sys, 12, R(1e-9)).d;
  GibbsInfo<R> ip;
  const auto gp = gibbs_weights(sys, d, 12, &ip);
  CHECK(near(gp.total, R(1), R(1e-25)));
  CHECK(ip.invariance_defect <= R(1e-6));

  // bounded equivalence with the conformal proxy
  using std::pow;
  const auto cp = conformal_weights(sys, d, 12);
  const R band = exp(R(2) * sys.K);
  for (std::uint64_t i = 0; i < gp.weights.size(); ++i) {
    const R ratio = gp.weights[i] / cp.weights[i];
    CHECK(ratio <= band);
    CHECK(ratio >= R(1) / band);
  }
}

TEST_CASE("restrict_rescale transports measures self-similarly", "[thermo]") {
  using std::log;
  const auto mt = make_middle_third<R>();
  const R dmt = log(R(2)) / log(R(3));
  const auto mu = conformal_weights(mt, dmt, 6);
  const auto res = restrict_rescale(mt, mu, Word("0"));
  REQUIRE(res.weights.size() == 32);
  for (const auto& w : res.weights) CHECK(near(w, R(1) / 32, R(1e-10)));

  const auto lin = make_linear<R>(R(0.25), R(0.5));
  const R dl = bowen_root(lin, 8, R(1e-12)).d;
  const auto ml = conformal_weights(lin, dl, 6);
  const auto rl = restrict_rescale(lin, ml, Word("1"));
  const auto whole = conformal_weights(lin, dl, 5);
  for (std::uint64_t i = 0; i < rl.weights.size(); ++i)
    CHECK(near(rl.weights[i], whole.weights[i], R(1e-10)));

  CHECK_THROWS_AS(restrict_rescale(mt, mu, Word("0000000")), config_error);
}

TEST_CASE("restricted measures converge along deepening pasts", "[thermo]") {
  // the measure-valued limit: restrictions along suffixes of a fixed past
  const auto sys = make_perturbed<R>(R(0.1), R(0.1));
  const R d = bowen_root(sys, 12, R(1e-9)).d;
  const int DEPTH = 16;
  const auto mu = conformal_weights(sys, d, DEPTH);
  Symbols full;
  for (int t = 0; t < 12; ++t) full.push_back(t % 2 ? 1 : 0);

  auto restricted_marginal = [&](int j, int common) {
    const Word w(Symbols(full.end() - j, full.end()));
    auto rm = restrict_rescale(sys, mu, w);
    // coarsen to the common marginal depth
    const int sub = (DEPTH - j) - common;
    std::vector<R> coarse(std::size_t{1} << common, R(0));
    for (std::size_t i = 0; i < rm.weights.size(); ++i) coarse[i >> sub] += rm.weights[i];
    const Word wl(Symbols(full.end() - j, full.end()));
    return std::pair{rescaled_subhierarchy(sys, wl, common), std::move(coarse)};
  };

  const int common = 4;
  const auto [skel_lim, w_lim] = restricted_marginal(12, common);
  const auto m_lim = IntervalMeasure<R>::on_set(skel_lim, w_lim);
  R prev = std::numeric_limits<R>::max();
  for (int j : {2, 4, 6, 8, 10}) {
    const auto [skel, w] = restricted_marginal(j, common);
    const auto m = IntervalMeasure<R>::on_set(skel, w);
    const R dist = d_m(m, m_lim).value;
    CHECK(dist < prev);  // strictly decreasing toward the limit
    prev = dist;
  }
  using std::pow;
  // exponential envelope: the distance at j = 10 sits under C beta^{10}
  CHECK(prev <= R(100) * pow(sys.beta, R(10)));
}
