#include "helpers.hpp"

using namespace cantor;
using ct::near;
using R = ct::real128;

TEST_CASE("limit sets of affine systems reproduce the system", "[scenery]") {
  const auto mt = make_middle_third<R>();
  const auto ls = limit_set(mt, DualWord("0110"), 4);
  const auto own = level_intervals(mt, 4);
  REQUIRE(ls.set.count() == own.size());
  for (std::size_t i = 0; i < own.size(); ++i) {
    CHECK(near(ls.set.left(i), own[i].left, R(1e-25)));
    CHECK(near(ls.set.len(i), own[i].length, R(1e-25)));
  }
  CHECK(ls.bound == R(0));

  const auto lin = make_linear<R>(R(0.3), R(0.25));
  const auto ll = limit_set(lin, DualWord("10"), 3);
  const auto lown = level_intervals(lin, 3);
  for (std::size_t i = 0; i < lown.size(); ++i)
    CHECK(near(ll.set.left(i), lown[i].left, R(1e-25)));
}

TEST_CASE("limit set agrees with the table-built ratio set", "[scenery]") {
  const auto sys = make_perturbed<R>(R(0.1), R(0.1));
  const auto table = std::make_shared<ScalingTable<R>>(build_scaling_table(sys, 8, 20));
  const DualWord y(std::string(20, '0'));
  const auto ls = limit_set(sys, y, 8);
  const auto rs = build_ratio_set(table_source<R>(table), y, 8);
  CHECK(d_h(ls.set, rs).value <= R(2) * table->err_bound);
}

TEST_CASE("scenery sequences of affine systems are constant", "[scenery]") {
  const auto mt = make_middle_third<R>();
  const auto seq = scenery_sequence(mt, Word("01101001110"), 5, 4);
  REQUIRE(seq.size() == 6);
  const auto ref = rescaled_subhierarchy(mt, Word{}, 4);
  for (const auto& s : seq) {
    REQUIRE(s.count() == ref.count());
    for (std::size_t i = 0; i < s.count(); ++i) CHECK(near(s.left(i), ref.left(i), R(1e-25)));
  }
  CHECK_THROWS_AS(scenery_sequence(mt, Word("01"), 5, 4), config_error);
}

TEST_CASE("scenery elements approach the limit sets at the certified rate", "[scenery]") {
  auto sys = make_perturbed<R>(R(0.1), R(0.1));
  sys.depth_cap = 40;
  const auto grid = dyadic_grid<R>(9);
  const int pad = 8, depth = 5;
  const auto tmpl = hierarchy_breakpoints(sys, depth);
  CounterRng rng(1212);
  const Word prefix(ct::random_symbols(rng, 20));
  std::vector<double> ns, ld;
  for (int n = 2; n <= 14; n += 2) {
    const DualWord y(Symbols(prefix.symbols.begin(), prefix.symbols.begin() + n + 1));
    const DualWord deep = y.padded_to(n + 1 + pad);
    const auto ga = phi_grid(sys, y, n + 1, grid);
    const auto gb = phi_grid(sys, deep, n + 1 + pad, grid);
    const R dc = d_c(ga, gb).value;
    const R bound = conjugacy_tail_bound(sys, n);
    CHECK(dc <= bound);
    // the set-metric gaps obey the same bound through d_H <= d_C
    const auto sa = rescaled_subhierarchy(sys, y.as_word(), depth, tmpl);
    const auto sb = rescaled_subhierarchy(sys, deep.as_word(), depth, tmpl);
    CHECK(d_h(sa, sb).value <= bound);
    ns.push_back(n);
    ld.push_back(static_cast<double>(log(dc)));
  }
  const double slope = ct::ls_slope(ns, ld);
  CHECK(slope <= static_cast<double>(log(sys.beta) * sys.gamma) + 0.1);
}

TEST_CASE("rigidity conjugacy for a conjugated pair equals the conjugation", "[scenery]") {
  const auto A = make_middle_third<R>();
  const auto B = make_conjugated(A, R(0.3));
  const R e(0.3);
  auto psi = [&](const R& x) { return x + e * x * (R(1) - x); };

  // psi seed: gap points reproduce psi exactly; points unresolved at the
  // cut depth carry the coding-scale derivative, within O(beta^depth) of psi
  GapSeed<R> seed = function_gap_seed<R>(
      psi, [&](const R& t) { return R(1) + e * (R(1) - R(2) * t); },
      [&](const R&) { return R(-2) * e; }, "psi");
  const auto grid = dyadic_grid<R>(8);
  const int depth = 12;
  const auto conj = rigidity_conjugacy(A, B, seed, depth, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(near(conj.grid.v[i], psi(grid[i]), R(1e-5)));
    CHECK(near(conj.grid.dv[i], R(1) + e * (R(1) - R(2) * grid[i]), R(1e-5)));
  }
  // interior gap points are exact
  const auto mid = rigidity_eval(A, B, seed, depth, R(0.5));
  CHECK(near(mid.value, psi(R(0.5)), R(1e-30)));
  CHECK(near(mid.d1, R(1) + e * (R(1) - R(2) * R(0.5)), R(1e-30)));

  // Cantor endpoints at level 8 map by the coding bijection, i.e. by psi
  const auto lvlA = level_intervals(A, 8);
  const auto lvlB = level_intervals(B, 8);
  for (std::size_t i = 0; i < lvlA.size(); ++i) {
    CHECK(near(psi(lvlA[i].left), lvlB[i].left, R(1e-12)));
    CHECK(near(psi(lvlA[i].right()), lvlB[i].right(), R(1e-12)));
  }
}

TEST_CASE("rigidity with a different seed still conjugates the dynamics", "[scenery]") {
  const auto A = make_middle_third<R>();
  const auto B = make_conjugated(A, R(0.3));
  const auto seed = affine_gap_seed(A, B);
  const R e(0.3);

  // conjugacy-equation residual on points in level >= 1 gaps
  CounterRng rng(17);
  R worst(0);
  for (int rep = 0; rep < 100; ++rep) {
    const Word w(ct::random_symbols(rng, 1 + static_cast<int>(rng.below(6))));
    const auto g = gap(A, w);
    const R a = g.left + R(0.1 + 0.8 * rng.uniform01()) * g.length;
    worst = std::max(worst, conjugacy_residual(A, B, seed, 12, a));
  }
  CHECK(worst <= R(1e-10));

  // differs from psi on gap interiors, agrees with it on Cantor endpoints
  const R mid = R(0.5);  // interior of the root gap
  const auto pv = rigidity_eval(A, B, seed, 12, mid);
  CHECK(abs(pv.value - (mid + e * mid * (R(1) - mid))) > R(1e-3));
  const auto endp = rigidity_eval(A, B, seed, 12, R(1) / 3);
  CHECK(near(endp.value, R(1) / 3 + e / R(3) * (R(2) / 3), R(1e-12)));
}

TEST_CASE("rigidity rejects systems with different scaling functions", "[scenery]") {
  const auto A = make_middle_third<R>();
  const auto B = make_perturbed<R>(R(0.1), R(0.1));
  const auto seed = affine_gap_seed(A, B);
  const auto grid = dyadic_grid<R>(6);
  CHECK_THROWS_AS(rigidity_conjugacy(A, B, seed, 6, grid), invariant_violation);
}

TEST_CASE("smoothness probe: stable quantities and a known non-example", "[scenery]") {
  using std::log;
  using std::pow;
  using std::sqrt;
  const auto grid = dyadic_grid<R>(10);

  // identity: constant estimate 0 at k = 1 and k = 2
  ConjugacyGrid<R> id;
  id.x = grid;
  for (const auto& x : grid) {
    id.v.push_back(x);
    id.dv.push_back(R(1));
    id.d2v.push_back(R(0));
  }
  const auto p1 = smoothness_probe(id, 1);
  CHECK(p1.stable);
  CHECK(p1.estimate == R(0));
  const auto p2 = smoothness_probe(id, 2);
  CHECK(p2.stable);
  CHECK(p2.estimate == R(0));

  // log D Phi^y_n is Holder uniformly in n: the composition sum gives the
  // constant c (1 + beta^g + beta^{2g} + ...) = c / (1 - beta^g), since the
  // innermost term sees the uncontracted argument
  using std::pow;
  const auto sys = make_perturbed<R>(R(0.1), R(0.1));
  const R c0 = sys.c / (R(1) - pow(sys.beta, sys.gamma));
  for (int n : {4, 8, 12}) {
    const auto g = phi_grid(sys, DualWord(std::string(static_cast<std::size_t>(n), '0')), n, grid);
    const auto pr = smoothness_probe(g, 1, sys.gamma);
    CHECK(pr.stable);
    CHECK(pr.estimate <= c0 + R(1e-12));
  }

  // g(x) = x^{3/2}: derivative is not Lipschitz at 0, the probe diverges
  ConjugacyGrid<R> rough;
  rough.x = grid;
  for (const auto& x : grid) {
    rough.v.push_back(x * sqrt(x));
    rough.dv.push_back(x == R(0) ? R(1e-30) : R(1.5) * sqrt(x));
  }
  const auto pr = smoothness_probe(rough, 1);
  CHECK_FALSE(pr.stable);

  CHECK_THROWS_AS(smoothness_probe(id, 3), config_error);
  ConjugacyGrid<R> no_d2 = rough;
  CHECK_THROWS_AS(smoothness_probe(no_d2, 2), config_error);
}

TEST_CASE("rigidity grids support smoothness probes", "[scenery]") {
  const auto A = make_middle_third<R>();
  const auto B = make_conjugated(A, R(0.3));
  const R e(0.3);
  GapSeed<R> seed = function_gap_seed<R>(
      [&](const R& x) { return x + e * x * (R(1) - x); },
      [&](const R& t) { return R(1) + e * (R(1) - R(2) * t); },
      [&](const R&) { return R(-2) * e; }, "psi");
  const auto conj = rigidity_conjugacy(A, B, seed, 10, dyadic_grid<R>(10));
  const auto p1 = smoothness_probe(conj.grid, 1);
  CHECK(p1.stable);
  const auto p2 = smoothness_probe(conj.grid, 2);
  CHECK(p2.stable);
}
