#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cstdint>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <type_traits>

#include "cantor/errors.hpp"

namespace cantor {

namespace mp = boost::multiprecision;

// Extended-precision reals with a fixed binary mantissa.  All numerical
// modules are templates over the real type; these are the instantiations
// the CLI dispatches to.
using real128 = mp::number<mp::cpp_bin_float<128, mp::digit_base_2>, mp::et_off>;
using real256 = mp::number<mp::cpp_bin_float<256, mp::digit_base_2>, mp::et_off>;

template <class R>
inline R real_eps() {
  return std::numeric_limits<R>::epsilon();
}

template <class R>
inline std::string to_decimal(const R& x) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<R>::max_digits10) << x;
  return os.str();
}

template <class R>
inline R from_decimal(const std::string& s) {
  if constexpr (std::is_same_v<R, double>) {
    return std::stod(s);
  } else {
    return R(s);
  }
}

inline bool supported_precision(int bits) { return bits == 53 || bits == 128 || bits == 256; }

// Invokes f with a value-initialized tag of the real type selected by
// `bits` (53 = hardware double, 128/256 = software floats).
template <class F>
auto with_precision(int bits, F&& f) {
  switch (bits) {
    case 53:
      return f(double{});
    case 128:
      return f(real128{});
    case 256:
      return f(real256{});
    default:
      throw config_error("unsupported precision_bits " + std::to_string(bits) +
                         " (choose 53, 128 or 256)");
  }
}

}  // namespace cantor
