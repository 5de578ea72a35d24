#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "cantor/errors.hpp"

namespace cantor {

inline constexpr int kDefaultDepthCap = 26;

using Symbols = std::vector<std::uint8_t>;

namespace detail {
inline void check_symbols(const Symbols& s) {
  for (auto b : s)
    if (b > 1) throw config_error("symbol out of alphabet {0,1}");
}
}  // namespace detail

// Finite word x_0...x_{n-1}; the first symbol is the outermost map in the
// cylinder composition.
struct Word {
  Symbols symbols;

  Word() = default;
  explicit Word(Symbols s) : symbols(std::move(s)) { detail::check_symbols(symbols); }
  explicit Word(const std::string& bits) {
    symbols.reserve(bits.size());
    for (char ch : bits) {
      if (ch != '0' && ch != '1') throw config_error("word string must be over {0,1}");
      symbols.push_back(static_cast<std::uint8_t>(ch - '0'));
    }
  }

  int size() const { return static_cast<int>(symbols.size()); }
  bool empty() const { return symbols.empty(); }
  std::uint8_t operator[](int i) const { return symbols[static_cast<std::size_t>(i)]; }

  Word child(std::uint8_t s) const {
    Word w = *this;
    w.symbols.push_back(s);
    return w;
  }

  bool operator==(const Word&) const = default;
  // lexicographic on equal lengths; shorter-first otherwise
  bool operator<(const Word& o) const {
    if (symbols.size() != o.symbols.size()) return symbols.size() < o.symbols.size();
    return symbols < o.symbols;
  }
};

// Finite suffix y_{-n}...y_{-1} of a past sequence.  symbols.front() is the
// oldest coordinate y_{-n}, symbols.back() is y_{-1}.
struct DualWord {
  Symbols symbols;

  DualWord() = default;
  explicit DualWord(Symbols s) : symbols(std::move(s)) { detail::check_symbols(symbols); }
  explicit DualWord(const std::string& bits) : DualWord(Word(bits).symbols) {}

  int size() const { return static_cast<int>(symbols.size()); }
  bool empty() const { return symbols.empty(); }

  // y_{-1}, y_{-2}, ... indexed from the recent end: recent(0) == y_{-1}
  std::uint8_t recent(int i) const { return symbols[symbols.size() - 1 - static_cast<std::size_t>(i)]; }

  // The dual word read left-to-right as a plain word (y_{-n} outermost).
  Word as_word() const { return Word(symbols); }

  // Appends a future symbol on the recent side (shift action).
  DualWord appended(std::uint8_t s) const {
    DualWord y = *this;
    y.symbols.push_back(s);
    return y;
  }

  // Extends on the old side to length n by repeating `pad` (the documented
  // padding rule uses pad = 0).
  DualWord padded_to(int n, std::uint8_t pad = 0) const {
    if (size() >= n) return *this;
    Symbols s(static_cast<std::size_t>(n - size()), pad);
    s.insert(s.end(), symbols.begin(), symbols.end());
    return DualWord(std::move(s));
  }

  // Keeps only the most recent n coordinates.
  DualWord suffix(int n) const {
    if (size() <= n) return *this;
    return DualWord(Symbols(symbols.end() - n, symbols.end()));
  }

  bool operator==(const DualWord&) const = default;
};

// Bi-infinite point truncated to finite coordinates; shifting moves the
// boundary between past and future.
struct BiWindow {
  DualWord past;
  Word future;
};

inline BiWindow shift(const BiWindow& w) {
  if (w.future.empty()) throw config_error("shift: future is empty");
  BiWindow out;
  out.past = w.past.appended(w.future.symbols.front());
  out.future.symbols.assign(w.future.symbols.begin() + 1, w.future.symbols.end());
  return out;
}

inline BiWindow shift_n(BiWindow w, int n) {
  for (int i = 0; i < n; ++i) w = shift(w);
  return w;
}

// d_beta(y,w) = beta^n with n the longest common suffix.  Finite inputs can
// only bound the true metric, so the result carries how to read it.
enum class BetaMetricKind {
  exact,            // a disagreement was found within both inputs
  agrees_to_depth,  // equal length, all symbols agree: true value in [0, beta^len]
  upper_bound,      // one input is a strict suffix of the other
};

template <class R>
struct BetaDistance {
  R value;
  BetaMetricKind kind;
  int common_suffix;
};

template <class R>
BetaDistance<R> beta_metric(const DualWord& y, const DualWord& w, const R& beta) {
  if (!(beta > R(0) && beta < R(1))) throw config_error("beta_metric: beta must lie in (0,1)");
  const int avail = std::min(y.size(), w.size());
  int n = 0;
  while (n < avail && y.recent(n) == w.recent(n)) ++n;
  using std::pow;
  if (n < avail) return {pow(beta, R(n)), BetaMetricKind::exact, n};
  if (y.size() == w.size()) return {R(0), BetaMetricKind::agrees_to_depth, n};
  return {pow(beta, R(n)), BetaMetricKind::upper_bound, n};
}

// All 2^n words of length n in lexicographic order.
inline std::vector<Word> enumerate_cylinders(int n, int depth_cap = kDefaultDepthCap) {
  if (n < 0) throw config_error("enumerate_cylinders: negative depth");
  if (n > depth_cap) throw resource_limit("enumerate_cylinders: depth cap exceeded");
  std::vector<Word> out;
  out.reserve(std::size_t{1} << n);
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << n); ++i) {
    Symbols s(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) s[static_cast<std::size_t>(j)] = (i >> (n - 1 - j)) & 1u;
    out.emplace_back(std::move(s));
  }
  return out;
}

// MSB-first index of a word among words of its length.
inline std::uint64_t word_index(const Symbols& s) {
  std::uint64_t idx = 0;
  for (auto b : s) idx = (idx << 1) | b;
  return idx;
}
inline std::uint64_t word_index(const Word& w) { return word_index(w.symbols); }

inline Word word_from_index(std::uint64_t idx, int len) {
  Symbols s(static_cast<std::size_t>(len));
  for (int j = 0; j < len; ++j) s[static_cast<std::size_t>(j)] = (idx >> (len - 1 - j)) & 1u;
  return Word(std::move(s));
}

inline std::string to_string(const Word& w) {
  std::string s;
  s.reserve(w.symbols.size());
  for (auto b : w.symbols) s.push_back(static_cast<char>('0' + b));
  return s;
}

// Machine output is the plain bit string; human-readable output marks the
// infinite tail on the old side.
inline std::string to_string(const DualWord& y, bool human = false) {
  std::string bits = to_string(Word(y.symbols));
  return human ? "…" + bits : bits;
}

}  // namespace cantor
