#pragma once

#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "cantor/cli.hpp"

namespace ct {

using cantor::real128;
using cantor::real256;

// |a - b| <= tol with a readable failure message for extended-precision types.
template <class R>
bool near(const R& a, const R& b, const R& tol) {
  using std::abs;
  if (abs(a - b) <= tol) return true;
  UNSCOPED_INFO("near: |" << cantor::to_decimal(a) << " - " << cantor::to_decimal(b)
                          << "| > " << cantor::to_decimal(tol));
  return false;
}

template <class R>
bool near(const R& a, const R& b) {
  return near(a, b, cantor::real_eps<R>() * R(4096));
}

// least-squares slope of y against x
inline double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline cantor::Symbols random_symbols(cantor::CounterRng& rng, int len) {
  cantor::Symbols s(static_cast<std::size_t>(len));
  for (auto& b : s) b = static_cast<std::uint8_t>(rng.bit());
  return s;
}

}  // namespace ct
