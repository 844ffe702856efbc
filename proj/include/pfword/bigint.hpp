#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace pfword {

// Exact arbitrary-precision integer used for all path and class counts.
using BigInt = boost::multiprecision::cpp_int;

inline unsigned bit_length(const BigInt& x) {
  return x.is_zero() ? 0u : boost::multiprecision::msb(x) + 1u;
}

}  // namespace pfword
