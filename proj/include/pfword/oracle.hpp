#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "pfword/errors.hpp"
#include "pfword/markov.hpp"
#include "pfword/random.hpp"
#include "pfword/word.hpp"

// Desk-scale brute-force ground truth, kept independent of the production
// sampling path: literal alternating subset sums, exhaustive enumeration,
// a shuffle-then-accept simulator, and exact privacy-ratio verification.
namespace pfword::oracle {

inline constexpr std::size_t kMaxCandidates = 24;

// Literal evaluation of the permute-and-flip subset sum
//   sum over subsets S of the candidates (excluding one index) of
//   (-1)^|S| / (|S|+1) * prod_{s in S} exp(eps * u_s / 2b).
// Enumerates all 2^(|L|-1) subsets; accumulates in long double because the
// alternating sum cancels several leading digits.
inline double psi_literal(const std::vector<std::int64_t>& utilities,
                          std::size_t exclude, const PrivacyParams& params) {
  if (utilities.size() > kMaxCandidates)
    throw CapacityError("psi_literal: more than 24 candidates");
  if (exclude >= utilities.size())
    throw DomainError("psi_literal: excluded index out of range");
  std::vector<long double> weights;
  weights.reserve(utilities.size() - 1);
  const long double scale = params.exponent_scale();
  for (std::size_t i = 0; i < utilities.size(); ++i)
    if (i != exclude)
      weights.push_back(expl(scale * static_cast<long double>(utilities[i])));

  long double total = 0.0L;
  const auto recurse = [&](const auto& self, std::size_t idx, unsigned size,
                           long double product) -> void {
    if (idx == weights.size()) {
      const long double term = product / static_cast<long double>(size + 1);
      total += (size % 2 == 0) ? term : -term;
      return;
    }
    self(self, idx + 1, size, product);
    self(self, idx + 1, size + 1, product * weights[idx]);
  };
  recurse(recurse, 0, 0, 1.0L);
  return static_cast<double>(total);
}

// Exact word-level pmf over an explicit candidate set.
struct ExactPmf {
  std::vector<Word> support;
  std::vector<double> probs;
};

// pmf(w') = exp(eps u(w, w') / 2b) * psi_literal(..., w'), the literal
// permute-and-flip selection probabilities.
inline ExactPmf exact_pf_pmf(const Word& w, const std::vector<Word>& candidates,
                             const PrivacyParams& params) {
  if (candidates.size() > kMaxCandidates)
    throw CapacityError("exact_pf_pmf: more than 24 candidates");
  if (candidates.empty()) throw DomainError("exact_pf_pmf: empty candidates");
  std::vector<std::int64_t> utilities;
  utilities.reserve(candidates.size());
  for (const Word& c : candidates) utilities.push_back(utility(w, c));
  ExactPmf pmf{candidates, {}};
  pmf.probs.reserve(candidates.size());
  const double scale = params.exponent_scale();
  for (std::size_t i = 0; i < candidates.size(); ++i)
    pmf.probs.push_back(std::exp(scale * static_cast<double>(utilities[i])) *
                        psi_literal(utilities, i, params));
  return pmf;
}

// Operational permute-and-flip: shuffle the candidates, then accept the
// first one whose coin exp(eps (u_r - u_max) / 2b) comes up heads. The
// maximal-utility candidate always accepts, so each trial ends within |L|
// flips. Returns empirical frequencies aligned with the candidate order;
// an independent sampler for cross-checking the subset-sum pmf.
inline std::vector<double> simulate_pf(const Word& w,
                                       const std::vector<Word>& candidates,
                                       const PrivacyParams& params,
                                       std::size_t trials, Rng& rng) {
  if (candidates.empty()) throw DomainError("simulate_pf: empty candidates");
  if (trials == 0) throw DomainError("simulate_pf: trials must be >= 1");
  std::vector<std::int64_t> utilities;
  utilities.reserve(candidates.size());
  std::int64_t u_max = std::numeric_limits<std::int64_t>::min();
  for (const Word& c : candidates) {
    utilities.push_back(utility(w, c));
    u_max = std::max(u_max, utilities.back());
  }
  const double scale = params.exponent_scale();
  std::vector<double> accept(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i)
    accept[i] = std::exp(scale * static_cast<double>(utilities[i] - u_max));

  std::vector<std::size_t> order(candidates.size());
  std::vector<std::size_t> counts(candidates.size(), 0);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[rng.next_below(std::uint64_t{i})]);
    for (std::size_t idx : order) {
      if (accept[idx] >= 1.0 || rng.next_double() < accept[idx]) {
        ++counts[idx];
        break;
      }
    }
  }
  std::vector<double> freq(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i)
    freq[i] = static_cast<double>(counts[i]) / static_cast<double>(trials);
  return freq;
}

struct DpCheck {
  double max_log_ratio = 0.0;
  std::size_t worst_input = 0;   // index into the family
  std::size_t worst_other = 0;   // index into the family
  std::size_t worst_output = 0;  // index into the shared support
  std::size_t pairs_checked = 0;
  bool zero_probability_asymmetry = false;
  bool holds = true;
};

// Max over adjacent sensitive pairs and outputs of log(p_w(o) / p_v(o)).
// Privacy holds iff the max stays below epsilon (plus 1e-9 slack); a zero
// probability on one side only is reported as a violation outright.
inline DpCheck verify_dp(const std::vector<std::pair<Word, ExactPmf>>& family,
                         unsigned b, double epsilon) {
  DpCheck result;
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t k = 0; k < family.size(); ++k) {
      if (i == k) continue;
      if (!is_adjacent(family[i].first, family[k].first, b)) continue;
      ++result.pairs_checked;
      const std::vector<double>& pi = family[i].second.probs;
      const std::vector<double>& pk = family[k].second.probs;
      if (pi.size() != pk.size())
        throw DomainError("verify_dp: pmfs must share a support");
      for (std::size_t o = 0; o < pi.size(); ++o) {
        if (pi[o] <= 0.0 && pk[o] <= 0.0) continue;
        if (pi[o] <= 0.0 || pk[o] <= 0.0) {
          result.zero_probability_asymmetry = true;
          result.max_log_ratio = std::numeric_limits<double>::infinity();
          result.worst_input = i;
          result.worst_other = k;
          result.worst_output = o;
          continue;
        }
        const double ratio = std::log(pi[o] / pk[o]);
        if (ratio > result.max_log_ratio) {
          result.max_log_ratio = ratio;
          result.worst_input = i;
          result.worst_other = k;
          result.worst_output = o;
        }
      }
    }
  }
  result.holds = !result.zero_probability_asymmetry &&
                 result.max_log_ratio <= epsilon + 1e-9;
  return result;
}

// All m^n words in symbol-index order.
inline std::vector<Word> enumerate_words(const AlphabetPtr& alphabet,
                                         unsigned n) {
  if (n < 1) throw DomainError("enumerate_words: length must be >= 1");
  const std::size_t m = alphabet->size();
  double size = std::pow(static_cast<double>(m), static_cast<double>(n));
  if (size > 1e7)
    throw CapacityError("enumerate_words: m^n too large to enumerate");
  std::vector<Word> words;
  std::vector<std::uint32_t> current(n, 0);
  for (;;) {
    words.emplace_back(alphabet, current);
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      if (++current[pos] < m) break;
      current[pos] = 0;
      if (pos == 0) return words;
    }
  }
}

// All feasible length-n trajectories from the chain's initial state, in
// symbol-index order.
inline std::vector<Word> enumerate_feasible_words(const MarkovChain& chain,
                                                  unsigned n) {
  if (n < 1)
    throw DomainError("enumerate_feasible_words: length must be >= 1");
  std::vector<Word> words;
  std::vector<std::uint32_t> current;
  const auto recurse = [&](const auto& self, std::size_t y) -> void {
    if (current.size() == n) {
      words.emplace_back(chain.states(), current);
      return;
    }
    for (std::size_t next = 0; next < chain.size(); ++next) {
      if (!chain.feasible_step(y, next)) continue;
      current.push_back(static_cast<std::uint32_t>(next));
      self(self, next);
      current.pop_back();
    }
    if (words.size() > 10'000'000)
      throw CapacityError("enumerate_feasible_words: too many words");
  };
  recurse(recurse, chain.initial());
  return words;
}

}  // namespace pfword::oracle
