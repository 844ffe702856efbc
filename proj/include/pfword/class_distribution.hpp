#pragma once

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "pfword/errors.hpp"
#include "pfword/quadrature.hpp"
#include "pfword/random.hpp"
#include "pfword/spectrum.hpp"
#include "pfword/word.hpp"

namespace pfword {

inline double log_sum_exp(const std::vector<double>& xs) {
  double max = -std::numeric_limits<double>::infinity();
  for (double x : xs)
    if (x > max) max = x;
  if (!std::isfinite(max))
    throw DomainError("log_sum_exp: no finite entries");
  double sum = 0.0;
  for (double x : xs)
    if (std::isfinite(x)) sum += std::exp(x - max);
  return max + std::log(sum);
}

// log Phi(b, L, ell): the alternating subset-sum factor of the
// permute-and-flip pmf, evaluated for one representative word of distance
// class ell. Computed through the integral form
//
//   Phi = integral_0^1 prod_{j != rep} (1 - t e^{-eps L_j / 2b}) dt,
//
// which collapses over distance classes to
//
//   integral_0^1 exp( sum_d cnt'(d) log(1 - t q_d) ) dt,  q_d = e^{-eps d/2b},
//
// with cnt' equal to the class counts minus one unit at class ell. The
// integrand is log-concave with slope -S1 = -sum cnt'(d) q_d at 0, so
// concavity gives the tail bound integral_T^1 <= e^{-S1 T}/S1 and the range
// is truncated at T = 46/S1 with relative tail below 1e-19.
inline double log_phi(const DistanceSpectrum& spectrum,
                      const PrivacyParams& params, unsigned ell) {
  if (ell >= spectrum.counts.size())
    throw DomainError("phi: distance exceeds word length");
  if (spectrum.counts[ell].is_zero())
    throw DomainError("phi: class is empty");

  struct Factor {
    double q;
    double count;
  };
  std::vector<Factor> factors;
  double s1 = 0.0;
  const double scale = params.exponent_scale();
  for (unsigned d = 0; d < spectrum.counts.size(); ++d) {
    if (spectrum.counts[d].is_zero()) continue;
    double count = spectrum.counts[d].convert_to<double>();
    if (!std::isfinite(count))
      throw NumericError("phi: class count exceeds double range", 0.0,
                         std::numeric_limits<double>::infinity());
    if (d == ell) count -= 1.0;
    if (count <= 0.0) continue;
    const double q = d == 0 ? 1.0 : std::exp(-scale * d);
    factors.push_back({q, count});
    s1 += count * q;
  }
  if (factors.empty()) return 0.0;  // Phi over an empty product is 1

  const auto integrand = [&factors](double t) {
    double f = 0.0;
    for (const Factor& fac : factors) f += fac.count * std::log1p(-fac.q * t);
    return std::exp(f);
  };

  const double upper = s1 > 46.0 ? 46.0 / s1 : 1.0;
  std::vector<double> seeds;
  seeds.push_back(0.0);
  for (double t = 1.0 / std::max(s1, 1.0); t < upper; t *= 2.0)
    seeds.push_back(t);
  seeds.push_back(upper);

  const double value =
      detail::integrate_adaptive(integrand, seeds, 1e-12, 4000);
  return std::log(value);
}

// Probability mass over distance classes. log_weights hold the
// unnormalized weights (-inf on empty classes); probs are normalized by
// log-sum-exp. prenorm_sum records the raw weight sum as a diagnostic (the
// permute-and-flip weights already form a pmf, so it should sit at 1 up to
// quadrature error).
struct ClassDistribution {
  DistanceSpectrum spectrum;
  PrivacyParams params;
  std::vector<double> log_weights;
  std::vector<double> probs;
  double prenorm_sum = 0.0;
};

namespace detail {
inline void normalize_class_distribution(ClassDistribution& dist) {
  const double lse = log_sum_exp(dist.log_weights);
  dist.prenorm_sum = std::exp(lse);
  dist.probs.assign(dist.log_weights.size(), 0.0);
  for (std::size_t i = 0; i < dist.log_weights.size(); ++i)
    if (std::isfinite(dist.log_weights[i]))
      dist.probs[i] = std::exp(dist.log_weights[i] - lse);
}
}  // namespace detail

// Permute-and-flip class pmf: weight(ell) = e^{-eps ell/2b} cnt(ell) Phi(ell).
inline ClassDistribution pf_class_distribution(DistanceSpectrum spectrum,
                                               const PrivacyParams& params) {
  if (spectrum.counts.empty() || spectrum.counts[0].is_zero())
    throw DomainError("class 0 must contain the sensitive word");
  ClassDistribution dist{std::move(spectrum), params, {}, {}, 0.0};
  const double scale = params.exponent_scale();
  dist.log_weights.assign(dist.spectrum.counts.size(),
                          -std::numeric_limits<double>::infinity());
  for (unsigned ell = 0; ell < dist.spectrum.counts.size(); ++ell) {
    if (dist.spectrum.counts[ell].is_zero()) continue;
    dist.log_weights[ell] = -scale * ell + log_count(dist.spectrum.counts[ell]) +
                            log_phi(dist.spectrum, params, ell);
  }
  detail::normalize_class_distribution(dist);
  return dist;
}

// Exponential-mechanism baseline: weight(ell) = e^{-eps ell/2b} cnt(ell).
// On the unconstrained spectrum this is Binomial(n, C/(1+C)) with
// C = (m-1) e^{-eps/2b}.
inline ClassDistribution em_class_distribution(DistanceSpectrum spectrum,
                                               const PrivacyParams& params) {
  ClassDistribution dist{std::move(spectrum), params, {}, {}, 0.0};
  const double scale = params.exponent_scale();
  dist.log_weights.assign(dist.spectrum.counts.size(),
                          -std::numeric_limits<double>::infinity());
  for (unsigned ell = 0; ell < dist.spectrum.counts.size(); ++ell) {
    if (dist.spectrum.counts[ell].is_zero()) continue;
    dist.log_weights[ell] = -scale * ell + log_count(dist.spectrum.counts[ell]);
  }
  detail::normalize_class_distribution(dist);
  return dist;
}

// Draws a distance class; deterministic given the stream state.
inline unsigned sample_class(const ClassDistribution& dist, Rng& rng) {
  const double u = rng.next_double();
  double acc = 0.0;
  unsigned last = 0;
  for (unsigned ell = 0; ell < dist.probs.size(); ++ell) {
    if (dist.probs[ell] <= 0.0) continue;
    last = ell;
    acc += dist.probs[ell];
    if (u < acc) return ell;
  }
  return last;  // guards against cumulative rounding below 1
}

inline double expected_error(const ClassDistribution& dist) {
  double mean = 0.0;
  for (unsigned ell = 0; ell < dist.probs.size(); ++ell)
    mean += static_cast<double>(ell) * dist.probs[ell];
  return mean;
}

}  // namespace pfword
