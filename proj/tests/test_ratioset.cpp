#include "helpers.hpp"

using namespace cantor;
using ct::near;
using R = ct::real128;

TEST_CASE("constant one-third rule rebuilds the middle-third set", "[ratioset]") {
  const auto src = constant_source(RatioTriple<R>{R(1) / 3, R(1) / 3, R(1) / 3});
  const auto set = build_ratio_set(src, DualWord("10"), 2);
  REQUIRE(set.count() == 4);
  const R expect[4][2] = {{R(0), R(1) / 9},
                          {R(2) / 9, R(3) / 9},
                          {R(6) / 9, R(7) / 9},
                          {R(8) / 9, R(1)}};
  for (int i = 0; i < 4; ++i) {
    CHECK(near(set.left(i), expect[i][0], R(1e-30)));
    CHECK(near(set.right(i), expect[i][1], R(1e-30)));
  }
}

TEST_CASE("asymmetric constant rule", "[ratioset]") {
  const auto src = constant_source(RatioTriple<R>{R(0.25), R(0.25), R(0.5)});
  const auto set = build_ratio_set(src, DualWord("0"), 1);
  REQUIRE(set.count() == 2);
  CHECK(near(set.left(0), R(0)));
  CHECK(near(set.right(0), R(0.25)));
  CHECK(near(set.left(1), R(0.5)));
  CHECK(near(set.right(1), R(1)));
  // endpoints 0 and 1 are pinned
  CHECK(set.left(0) == R(0));
  CHECK(set.right(1) == R(1));
}

TEST_CASE("ratio fidelity and monotone refinement", "[ratioset]") {
  using std::abs;
  const auto sysp = std::make_shared<ContractionSystem<R>>(make_perturbed<R>(R(0.1), R(0.1)));
  const auto table =
      std::make_shared<ScalingTable<R>>(build_scaling_table(*sysp, 6, 16));
  const auto src = table_source<R>(table);
  const DualWord y("010011");

  const int n = 7;
  const auto fine = build_ratio_set(src, y, n);
  const auto coarse = build_ratio_set(src, y, n - 1);

  // monotone refinement: children stay inside their parent
  for (std::size_t i = 0; i < fine.count(); ++i) {
    const auto& [pl, plen] = coarse.intervals[i / 2];
    CHECK(fine.left(i) >= pl - R(1e-30));
    CHECK(fine.right(i) <= pl + plen + R(1e-30));
  }

  // every built node reproduces the queried triple to 1e-12
  CounterRng rng(8);
  for (int rep = 0; rep < 30; ++rep) {
    const int k = static_cast<int>(rng.below(n - 1));
    const Word w(ct::random_symbols(rng, k));
    DualWord past = y;
    for (int j = 0; j < w.size(); ++j) past = past.appended(w[j]);
    const auto t = table->lookup(past);
    const auto [a, len] = ratio_node(src, y, w);
    const auto [a0, len0] = ratio_node(src, y, w.child(0));
    const auto [a1, len1] = ratio_node(src, y, w.child(1));
    CHECK(abs(len0 / len - t.l) <= R(1e-12));
    CHECK(abs(len1 / len - t.r) <= R(1e-12));
    CHECK(abs((a1 - (a0 + len0)) / len - t.g) <= R(1e-12));
  }
}

TEST_CASE("table-backed ratio set tracks the limit set of the system", "[ratioset]") {
  const auto sysp = std::make_shared<ContractionSystem<R>>(make_perturbed<R>(R(0.1), R(0.1)));
  const auto table = std::make_shared<ScalingTable<R>>(build_scaling_table(*sysp, 8, 20));
  const DualWord y(std::string(20, '0'));
  const auto rs = build_ratio_set(table_source<R>(table), y, 10);
  const auto ls = limit_set(*sysp, y, 10);
  R sup(0);
  for (std::size_t i = 0; i < rs.count(); ++i) {
    sup = std::max(sup, R(abs(rs.left(i) - ls.set.left(i))));
    sup = std::max(sup, R(abs(rs.right(i) - ls.set.right(i))));
  }
  CHECK(sup <= R(2) * table->err_bound);
}

TEST_CASE("rule outside the simplex is rejected", "[ratioset]") {
  CHECK_THROWS_AS(constant_source(RatioTriple<R>{R(0.5), R(0), R(0.5)}), invariant_violation);
  const ScalingSource<R> bad{[](const DualWord&) {
                               return RatioTriple<R>{R(0.7), R(0.4), R(-0.1)};
                             },
                             "bad"};
  CHECK_THROWS_AS(build_ratio_set(bad, DualWord("0"), 2), invariant_violation);
}

TEST_CASE("scenery identity holds exactly for constant sources", "[ratioset]") {
  const auto src = constant_source(RatioTriple<R>{R(0.25), R(0.25), R(0.5)});
  BiWindow w{DualWord("1"), Word("0110")};
  const auto rep = scenery_identity_check(src, w, 2, 5, R(1e-25));
  CHECK(rep.pass);

  const auto src3 = constant_source(RatioTriple<R>{R(1) / 3, R(1) / 3, R(1) / 3});
  BiWindow v{DualWord(""), Word("101")};
  CHECK(scenery_identity_check(src3, v, 3, 4, R(1e-25)).pass);
}

TEST_CASE("scenery identity holds for table-backed sources", "[ratioset]") {
  const auto sysp = std::make_shared<ContractionSystem<R>>(make_perturbed<R>(R(0.1), R(0.1)));
  const auto table = std::make_shared<ScalingTable<R>>(build_scaling_table(*sysp, 6, 14));
  const auto src = table_source<R>(table);
  CounterRng rng(99);
  for (int rep = 0; rep < 25; ++rep) {
    const int n = 1 + static_cast<int>(rng.below(6));
    const int depth = 2 + static_cast<int>(rng.below(7));
    BiWindow w{DualWord(ct::random_symbols(rng, 6)), Word(ct::random_symbols(rng, n))};
    const auto rep_id = scenery_identity_check(src, w, n, depth, R(1e-20));
    INFO("n=" << n << " depth=" << depth << " diff=" << to_decimal(rep_id.max_abs_diff));
    CHECK(rep_id.pass);
  }
  BiWindow shortw{DualWord("01"), Word("1")};
  CHECK_THROWS_AS(scenery_identity_check(src, shortw, 2, 3, R(1e-20)), config_error);
}
