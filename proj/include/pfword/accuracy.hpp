#pragma once

#include <cmath>
#include <vector>

#include "pfword/class_distribution.hpp"
#include "pfword/errors.hpp"
#include "pfword/spectrum.hpp"
#include "pfword/word.hpp"

namespace pfword {

// Expected-error bound ingredients: C = (m-1) e^{-eps/2b}, the closed-form
// upper bound nC/(1+C) (which equals the exponential-mechanism mean), and
// the covariance correction built from Phi at the extreme classes.
struct BoundReport {
  double c = 0.0;
  double upper = 0.0;
  double lower = 0.0;
  double e_em_phi = 0.0;
  double phi0 = 0.0;
  double phin = 0.0;
  unsigned tail_class = 0;        // class used for the Phi(n) term
  bool tail_substituted = false;  // true when class n was empty
};

inline double upper_bound(unsigned n, unsigned m, const PrivacyParams& params) {
  if (m < 2) throw DomainError("upper_bound: alphabet size must be >= 2");
  const double c =
      static_cast<double>(m - 1) * std::exp(-params.exponent_scale());
  return static_cast<double>(n) * c / (1.0 + c);
}

inline BoundReport bound_report(const DistanceSpectrum& spectrum,
                                const PrivacyParams& params) {
  if (spectrum.m < 2)
    throw DomainError("bound_report: alphabet size must be >= 2");
  if (spectrum.counts.empty() || spectrum.counts[0].is_zero())
    throw DomainError("bound_report: class 0 must be nonempty");
  BoundReport report;
  const unsigned n = spectrum.n;
  report.c =
      static_cast<double>(spectrum.m - 1) * std::exp(-params.exponent_scale());
  report.upper = static_cast<double>(n) * report.c / (1.0 + report.c);

  const ClassDistribution em = em_class_distribution(spectrum, params);
  unsigned tail = 0;
  report.e_em_phi = 0.0;
  std::vector<double> phis(n + 1, 0.0);
  for (unsigned ell = 0; ell <= n; ++ell) {
    if (spectrum.counts[ell].is_zero()) continue;
    phis[ell] = std::exp(log_phi(spectrum, params, ell));
    report.e_em_phi += em.probs[ell] * phis[ell];
    tail = ell;
  }
  report.phi0 = phis[0];
  report.tail_class = tail;
  report.tail_substituted = tail != n;
  report.phin = phis[tail];
  report.lower = report.upper - static_cast<double>(n) *
                                    (report.phi0 - report.phin) /
                                    (4.0 * report.e_em_phi);
  return report;
}

inline double lower_bound(const DistanceSpectrum& spectrum,
                          const PrivacyParams& params) {
  return bound_report(spectrum, params).lower;
}

// Two-sided concentration of the sampled distance: P(|l - E[l]| >= t) is at
// most 2 exp(-2 t^2 / n^2) because the distance lives in [0, n].
inline double hoeffding_tail(unsigned n, double t) {
  if (!(t > 0.0)) throw DomainError("hoeffding_tail: t must be positive");
  const double nn = static_cast<double>(n);
  return 2.0 * std::exp(-2.0 * t * t / (nn * nn));
}

}  // namespace pfword
