#include "helpers.hpp"

using namespace cantor;
using ct::near;

TEST_CASE("shift moves symbols from future to past", "[symbolic]") {
  BiWindow w{DualWord("0"), Word("10")};
  auto s = shift(w);
  CHECK(s.past == DualWord("01"));
  CHECK(s.future == Word("0"));

  BiWindow v{DualWord(""), Word("1")};
  auto sv = shift(v);
  CHECK(sv.past == DualWord("1"));
  CHECK(sv.future.empty());

  CHECK_THROWS_AS(shift(sv), config_error);
}

TEST_CASE("shift^n transfers exactly n symbols", "[symbolic]") {
  CounterRng rng(101);
  for (int rep = 0; rep < 50; ++rep) {
    const int np = static_cast<int>(rng.below(6));
    const int nf = 1 + static_cast<int>(rng.below(12));
    BiWindow w{DualWord(ct::random_symbols(rng, np)), Word(ct::random_symbols(rng, nf))};
    const int n = static_cast<int>(rng.below(static_cast<std::uint64_t>(nf) + 1));
    const auto s = shift_n(w, n);
    // past of shift^n = original past followed by the first n future symbols
    Symbols expect = w.past.symbols;
    expect.insert(expect.end(), w.future.symbols.begin(), w.future.symbols.begin() + n);
    CHECK(s.past.symbols == expect);
    CHECK(s.future.size() == nf - n);
  }
}

TEST_CASE("beta metric on dual words", "[symbolic]") {
  using R = double;
  const auto d1 = beta_metric(DualWord("011"), DualWord("111"), R(1) / 3);
  CHECK(d1.kind == BetaMetricKind::exact);
  CHECK(ct::near(d1.value, R(1) / 9));

  const auto d2 = beta_metric(DualWord("01101"), DualWord("01101"), R(0.5));
  CHECK(d2.kind == BetaMetricKind::agrees_to_depth);
  CHECK(d2.value == R(0));

  const auto d3 = beta_metric(DualWord("0"), DualWord("1"), R(0.4333));
  CHECK(d3.kind == BetaMetricKind::exact);
  CHECK(d3.value == R(1));

  // strict suffix: upper bound beta^min-length
  const auto d4 = beta_metric(DualWord("101"), DualWord("01101"), R(0.5));
  CHECK(d4.kind == BetaMetricKind::upper_bound);
  CHECK(ct::near(d4.value, R(0.125)));

  CHECK_THROWS_AS(beta_metric(DualWord("0"), DualWord("1"), R(1.5)), config_error);
}

TEST_CASE("beta metric is symmetric and ultrametric", "[symbolic]") {
  using R = double;
  CounterRng rng(77);
  const R beta = 0.37;
  for (int rep = 0; rep < 200; ++rep) {
    const int len = 1 + static_cast<int>(rng.below(10));
    DualWord y(ct::random_symbols(rng, len)), w(ct::random_symbols(rng, len)),
        z(ct::random_symbols(rng, len));
    const R dyw = beta_metric(y, w, beta).value;
    CHECK(dyw == beta_metric(w, y, beta).value);
    CHECK(dyw <= std::max(beta_metric(y, z, beta).value, beta_metric(z, w, beta).value));
  }
}

TEST_CASE("cylinder enumeration is lexicographic and complete", "[symbolic]") {
  CHECK(enumerate_cylinders(0) == std::vector<Word>{Word{}});
  CHECK(enumerate_cylinders(1) == std::vector<Word>{Word("0"), Word("1")});

  const auto w3 = enumerate_cylinders(3);
  REQUIRE(w3.size() == 8);
  CHECK(w3.front() == Word("000"));
  CHECK(w3.back() == Word("111"));

  const auto w10 = enumerate_cylinders(10);
  CHECK(w10.size() == 1024);
  for (std::size_t i = 0; i < w10.size(); ++i) {
    CHECK(word_index(w10[i]) == i);  // distinct and ordered
    if (i) CHECK(w10[i - 1] < w10[i]);
  }

  CHECK_THROWS_AS(enumerate_cylinders(27), resource_limit);
  CHECK_THROWS_AS(enumerate_cylinders(5, 4), resource_limit);
}

TEST_CASE("word serialization", "[symbolic]") {
  CHECK(to_string(Word("0101")) == "0101");
  CHECK(to_string(DualWord("110")) == "110");
  CHECK(to_string(DualWord("110"), true) == "…110");
  CHECK(word_from_index(word_index(Word("10110")), 5) == Word("10110"));
  CHECK_THROWS_AS(Word("012"), config_error);

  const DualWord y("0110");
  CHECK(y.padded_to(6) == DualWord("000110"));
  CHECK(y.suffix(2) == DualWord("10"));
  CHECK(y.as_word() == Word("0110"));
  CHECK(y.recent(0) == 0);
  CHECK(y.recent(3) == 0);
  CHECK(y.recent(2) == 1);
}
