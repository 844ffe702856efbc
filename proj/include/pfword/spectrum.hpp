#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "pfword/bigint.hpp"
#include "pfword/errors.hpp"

namespace pfword {

// C(n, k); zero when k > n.
inline BigInt binomial(unsigned n, unsigned k) {
  if (k > n) return BigInt(0);
  if (k > n - k) k = n - k;
  BigInt r = 1;
  for (unsigned i = 1; i <= k; ++i) {
    r *= (n - k + i);
    r /= i;  // divides exactly: r is C(n-k+i, i) after each step
  }
  return r;
}

// Number of length-n words over an m-symbol alphabet at Hamming distance
// exactly ell from a fixed word: C(n, ell) * (m-1)^ell.
inline BigInt class_count(unsigned n, unsigned m, unsigned ell) {
  if (m < 2) throw DomainError("class_count: alphabet size must be >= 2");
  if (ell > n) throw DomainError("class_count: distance exceeds word length");
  return binomial(n, ell) * boost::multiprecision::pow(BigInt(m - 1), ell);
}

// Distance-class counts for ell = 0..n. counts[ell] can be zero only for
// chain-restricted spectra; the sensitive word itself always contributes
// counts[0] = 1.
struct DistanceSpectrum {
  unsigned n = 0;
  unsigned m = 0;  // alphabet (or chain state-space) size
  std::vector<BigInt> counts;

  BigInt total() const {
    BigInt t = 0;
    for (const BigInt& c : counts) t += c;
    return t;
  }

  bool empty_class(unsigned ell) const { return counts.at(ell).is_zero(); }
};

// The unconstrained spectrum of all m^n words grouped by distance.
inline DistanceSpectrum full_spectrum(unsigned n, unsigned m) {
  if (n < 1) throw DomainError("full_spectrum: word length must be >= 1");
  if (m < 2) throw DomainError("full_spectrum: alphabet size must be >= 2");
  DistanceSpectrum s{n, m, {}};
  s.counts.reserve(n + 1);
  for (unsigned ell = 0; ell <= n; ++ell)
    s.counts.push_back(class_count(n, m, ell));
  return s;
}

// Natural log of an exact count, good to 12+ significant digits at any
// magnitude. Counts beyond double range are split as mantissa * 2^shift.
inline double log_count(const BigInt& x) {
  if (x <= 0) throw DomainError("log_count: requires x >= 1");
  const unsigned bits = bit_length(x);
  if (bits <= 1000) return std::log(x.convert_to<double>());
  const unsigned shift = bits - 512;
  const BigInt mantissa = x >> shift;
  return std::log(mantissa.convert_to<double>()) +
         static_cast<double>(shift) * std::numbers::ln2;
}

}  // namespace pfword
