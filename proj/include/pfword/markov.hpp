#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pfword/bigint.hpp"
#include "pfword/errors.hpp"
#include "pfword/hamming_nfa.hpp"
#include "pfword/random.hpp"
#include "pfword/spectrum.hpp"
#include "pfword/word.hpp"

namespace pfword {

// Finite Markov chain (states, row-stochastic transition matrix, fixed
// initial state). Chain states double as the output alphabet of privatized
// trajectories. Only the zero/nonzero pattern of the matrix matters to the
// mechanisms; the probabilities themselves are kept for validation and for
// generating synthetic trajectories.
class MarkovChain {
 public:
  static constexpr double kRowSumTolerance = 1e-9;

  MarkovChain(AlphabetPtr states, std::vector<std::vector<double>> transitions,
              std::size_t initial)
      : states_(std::move(states)),
        transitions_(std::move(transitions)),
        initial_(initial) {
    if (!states_) throw DomainError("chain requires a state alphabet");
    const std::size_t k = states_->size();
    if (transitions_.size() != k)
      throw DomainError("transition matrix must be square over the states");
    for (const auto& row : transitions_) {
      if (row.size() != k)
        throw DomainError("transition matrix must be square over the states");
      double sum = 0.0;
      for (double p : row) {
        if (!(p >= 0.0) || p > 1.0 || !std::isfinite(p))
          throw DomainError("transition entries must lie in [0, 1]");
        sum += p;
      }
      if (std::abs(sum - 1.0) > kRowSumTolerance)
        throw DomainError("transition rows must sum to 1");
    }
    if (initial_ >= k) throw DomainError("initial state out of range");
  }

  std::size_t size() const noexcept { return states_->size(); }
  const AlphabetPtr& states() const noexcept { return states_; }
  std::size_t initial() const noexcept { return initial_; }
  const std::vector<std::vector<double>>& transitions() const noexcept {
    return transitions_;
  }

  double transition(std::size_t from, std::size_t to) const {
    return transitions_.at(from).at(to);
  }

  bool feasible_step(std::size_t from, std::size_t to) const {
    return transitions_[from][to] > 0.0;
  }

 private:
  AlphabetPtr states_;
  std::vector<std::vector<double>> transitions_;
  std::size_t initial_;
};

namespace detail {
inline void require_chain_word(const MarkovChain& chain, const Word& w) {
  if (w.alphabet() != chain.states() &&
      !w.alphabet()->same_symbols(*chain.states()))
    throw DimensionError("word alphabet does not match the chain states");
}
}  // namespace detail

struct InfeasibleStep {
  std::size_t position;  // 0 = the step leaving the initial state
  std::size_t from;
  std::size_t to;
};

// First transition with zero probability along y0 -> w_1 -> ... -> w_n,
// or nullopt when the whole trajectory is feasible.
inline std::optional<InfeasibleStep> first_infeasible_step(
    const MarkovChain& chain, const Word& w) {
  detail::require_chain_word(chain, w);
  std::size_t prev = chain.initial();
  for (std::size_t t = 0; t < w.length(); ++t) {
    if (!chain.feasible_step(prev, w[t]))
      return InfeasibleStep{t, prev, w[t]};
    prev = w[t];
  }
  return std::nullopt;
}

inline bool is_feasible(const MarkovChain& chain, const Word& w) {
  return !first_infeasible_step(chain, w).has_value();
}

namespace detail {
inline std::string infeasible_message(const MarkovChain& chain,
                                      const InfeasibleStep& step) {
  std::ostringstream out;
  out << "infeasible transition " << chain.states()->symbol(step.from) << "->"
      << chain.states()->symbol(step.to) << " at step " << step.position;
  return out.str();
}
}  // namespace detail

// Product of the Hamming-distance acceptor with the chain's feasibility
// relation: states (i, j, y) where y is the most recently emitted chain
// state. Accepts exactly the feasible length-n trajectories from y0 at
// distance ell from the sensitive word. The initial state y0 is fixed by
// the chain and never emitted or perturbed.
class ProductNfa {
 public:
  ProductNfa(MarkovChain chain, Word word, unsigned ell)
      : chain_(std::move(chain)), word_(std::move(word)), ell_(ell) {
    detail::require_chain_word(chain_, word_);
    if (const auto step = first_infeasible_step(chain_, word_))
      throw FeasibilityError(detail::infeasible_message(chain_, *step));
    const unsigned n = length();
    if (ell_ > n) throw DomainError("target distance exceeds word length");
    counts_.resize(n + 1);
    for (unsigned i = 0; i <= n; ++i)
      counts_[i].assign((j_max(i) - j_min(i) + 1) * chain_.size(), BigInt(0));
  }

  const MarkovChain& chain() const noexcept { return chain_; }
  const Word& sensitive() const noexcept { return word_; }
  unsigned target_distance() const noexcept { return ell_; }
  unsigned length() const noexcept {
    return static_cast<unsigned>(word_.length());
  }
  bool policy_ready() const noexcept { return ready_; }

  unsigned j_min(unsigned i) const {
    const unsigned remaining = length() - i;
    return ell_ > remaining ? ell_ - remaining : 0u;
  }
  unsigned j_max(unsigned i) const { return i < ell_ ? i : ell_; }

  bool state_exists(unsigned i, unsigned j) const {
    return i <= length() && j >= j_min(i) && j <= j_max(i);
  }

  const BigInt& completion_count(unsigned i, unsigned j,
                                 std::size_t y) const {
    if (!state_exists(i, j) || y >= chain_.size())
      throw DomainError("no such automaton state");
    return counts_[i][(j - j_min(i)) * chain_.size() + y];
  }

  // V at the start state (0 symbols emitted, chain at y0); equals the number
  // of feasible words at distance exactly ell. Zero means the class is empty.
  const BigInt& start_count() const {
    return completion_count(0, 0, chain_.initial());
  }

 private:
  friend ProductNfa& synthesize_product_policy(ProductNfa& pnfa);

  BigInt& count_slot(unsigned i, unsigned j, std::size_t y) {
    return counts_[i][(j - j_min(i)) * chain_.size() + y];
  }

  MarkovChain chain_;
  Word word_;
  unsigned ell_;
  std::vector<std::vector<BigInt>> counts_;
  bool ready_ = false;
};

inline ProductNfa build_product(const MarkovChain& chain, const Word& word,
                                unsigned ell) {
  return ProductNfa(chain, word, ell);
}

// Backward pass from the accepting layer: V(n, ell, y) = 1 for every chain
// state, then each state sums its feasible successors. V(start) = 0 is the
// empty-class signal, not a failure.
inline ProductNfa& synthesize_product_policy(ProductNfa& pnfa) {
  const unsigned n = pnfa.length();
  const std::size_t k = pnfa.chain_.size();
  const Word& w = pnfa.word_;
  for (std::size_t y = 0; y < k; ++y)
    pnfa.count_slot(n, pnfa.ell_, y) = 1;
  for (unsigned i = n; i-- > 0;) {
    for (unsigned j = pnfa.j_min(i); j <= pnfa.j_max(i); ++j) {
      for (std::size_t y = 0; y < k; ++y) {
        BigInt total = 0;
        for (std::size_t next = 0; next < k; ++next) {
          if (!pnfa.chain_.feasible_step(y, next)) continue;
          const unsigned j_next = next == w[i] ? j : j + 1;
          if (!pnfa.state_exists(i + 1, j_next)) continue;
          total += pnfa.completion_count(i + 1, j_next, next);
        }
        pnfa.count_slot(i, j, y) = total;
      }
    }
  }
  pnfa.ready_ = true;
  return pnfa;
}

// Decodes the feasible word with the given index in [0, V(start)); branches
// ordered by chain-state index.
inline Word word_at_index(const ProductNfa& pnfa, BigInt index) {
  if (!pnfa.policy_ready()) throw DomainError("policy not synthesized");
  if (pnfa.start_count().is_zero())
    throw EmptyClassError("no feasible word at the requested distance");
  if (index < 0 || index >= pnfa.start_count())
    throw DomainError("word index out of range");
  const Word& w = pnfa.sensitive();
  const MarkovChain& chain = pnfa.chain();
  const unsigned n = pnfa.length();
  const std::size_t k = chain.size();
  std::vector<std::uint32_t> out;
  out.reserve(n);
  unsigned j = 0;
  std::size_t y = chain.initial();
  for (unsigned i = 0; i < n; ++i) {
    for (std::size_t sym = 0; sym < k; ++sym) {
      if (!chain.feasible_step(y, sym)) continue;
      const unsigned j_next = sym == w[i] ? j : j + 1;
      if (!pnfa.state_exists(i + 1, j_next)) continue;
      const BigInt& v = pnfa.completion_count(i + 1, j_next, sym);
      if (v.is_zero()) continue;
      if (index < v) {
        out.push_back(static_cast<std::uint32_t>(sym));
        j = j_next;
        y = sym;
        break;
      }
      index -= v;
    }
  }
  return Word(w.alphabet(), std::move(out));
}

// Uniform sample over the feasible words at distance exactly ell; every
// output is a feasible trajectory by construction.
inline Word sample_feasible_word(const ProductNfa& pnfa, Rng& rng) {
  if (!pnfa.policy_ready()) throw DomainError("policy not synthesized");
  if (pnfa.start_count().is_zero())
    throw EmptyClassError("no feasible word at the requested distance");
  return word_at_index(pnfa, rng.next_below(pnfa.start_count()));
}

// Counts of feasible words per distance class, all classes in one backward
// dynamic program over (position, errors still needed, chain state) rather
// than n+1 separate product builds.
inline DistanceSpectrum feasible_spectrum(const MarkovChain& chain,
                                          const Word& w) {
  detail::require_chain_word(chain, w);
  if (const auto step = first_infeasible_step(chain, w))
    throw FeasibilityError(detail::infeasible_message(chain, *step));
  const unsigned n = static_cast<unsigned>(w.length());
  const std::size_t k = chain.size();
  // suffix[e * k + y]: feasible completions from position i at chain state y
  // containing exactly e further mismatches.
  std::vector<BigInt> suffix((n + 1) * k, BigInt(0));
  for (std::size_t y = 0; y < k; ++y) suffix[y] = 1;
  for (unsigned i = n; i-- > 0;) {
    std::vector<BigInt> prev((n + 1) * k, BigInt(0));
    const unsigned max_err = n - i;
    for (unsigned e = 0; e <= max_err; ++e) {
      for (std::size_t y = 0; y < k; ++y) {
        BigInt total = 0;
        for (std::size_t next = 0; next < k; ++next) {
          if (!chain.feasible_step(y, next)) continue;
          if (next == w[i]) {
            total += suffix[e * k + next];
          } else if (e > 0) {
            total += suffix[(e - 1) * k + next];
          }
        }
        prev[e * k + y] = total;
      }
    }
    suffix = std::move(prev);
  }
  DistanceSpectrum spectrum{n, static_cast<unsigned>(k), {}};
  spectrum.counts.reserve(n + 1);
  for (unsigned ell = 0; ell <= n; ++ell)
    spectrum.counts.push_back(suffix[ell * k + chain.initial()]);
  return spectrum;
}

// Walks the transition probabilities from y0 for n steps; the standard way
// to produce sensitive test trajectories.
inline Word random_trajectory(const MarkovChain& chain, unsigned n, Rng& rng) {
  if (n < 1) throw DomainError("trajectory length must be >= 1");
  std::vector<std::uint32_t> out;
  out.reserve(n);
  std::size_t y = chain.initial();
  for (unsigned i = 0; i < n; ++i) {
    const double u = rng.next_double();
    double acc = 0.0;
    std::size_t chosen = chain.size() - 1;
    for (std::size_t next = 0; next < chain.size(); ++next) {
      acc += chain.transition(y, next);
      if (u < acc) {
        chosen = next;
        break;
      }
    }
    out.push_back(static_cast<std::uint32_t>(chosen));
    y = chosen;
  }
  return Word(chain.states(), std::move(out));
}

// Random row-stochastic chain: every row keeps each edge with the given
// density (at least one edge survives per row), and surviving edges get
// normalized random weights. Deterministic in the seed.
inline MarkovChain random_chain(unsigned num_states, double density,
                                std::uint64_t seed) {
  if (num_states < 2) throw DomainError("chain needs at least 2 states");
  if (!(density > 0.0) || density > 1.0)
    throw DomainError("density must lie in (0, 1]");
  Rng rng(seed);
  std::vector<std::string> labels;
  labels.reserve(num_states);
  for (unsigned i = 0; i < num_states; ++i)
    labels.push_back("y" + std::to_string(i));
  std::vector<std::vector<double>> rows(num_states,
                                        std::vector<double>(num_states, 0.0));
  for (unsigned from = 0; from < num_states; ++from) {
    std::vector<std::size_t> targets;
    for (unsigned to = 0; to < num_states; ++to)
      if (density >= 1.0 || rng.next_double() < density) targets.push_back(to);
    if (targets.empty())
      targets.push_back(rng.next_below(std::uint64_t{num_states}));
    double sum = 0.0;
    std::vector<double> weights(targets.size());
    for (std::size_t t = 0; t < targets.size(); ++t) {
      weights[t] = 0.05 + rng.next_double();  // bounded away from zero
      sum += weights[t];
    }
    for (std::size_t t = 0; t < targets.size(); ++t)
      rows[from][targets[t]] = weights[t] / sum;
  }
  return MarkovChain(make_alphabet(std::move(labels)), std::move(rows), 0);
}

// Number of states reachable from the initial state within max_steps moves
// (the initial state counts as reachable in zero moves).
inline unsigned reachable_states(const MarkovChain& chain,
                                 unsigned max_steps) {
  std::vector<unsigned> dist(chain.size(), ~0u);
  std::vector<std::size_t> frontier{chain.initial()};
  dist[chain.initial()] = 0;
  unsigned reached = 1;
  for (unsigned step = 1; step <= max_steps && !frontier.empty(); ++step) {
    std::vector<std::size_t> next_frontier;
    for (std::size_t y : frontier) {
      for (std::size_t next = 0; next < chain.size(); ++next) {
        if (!chain.feasible_step(y, next) || dist[next] != ~0u) continue;
        dist[next] = step;
        next_frontier.push_back(next);
        ++reached;
      }
    }
    frontier = std::move(next_frontier);
  }
  return reached;
}

// Line-oriented dump of the product automaton restricted to states that are
// forward-reachable and still able to accept; mirrors the Hamming acceptor
// export.
inline std::string export_graph(const ProductNfa& pnfa) {
  if (!pnfa.policy_ready()) throw DomainError("policy not synthesized");
  const Word& w = pnfa.sensitive();
  const MarkovChain& chain = pnfa.chain();
  const unsigned n = pnfa.length();
  const std::size_t k = chain.size();
  std::vector<std::vector<char>> reach(n + 1);
  for (unsigned i = 0; i <= n; ++i)
    reach[i].assign((pnfa.j_max(i) - pnfa.j_min(i) + 1) * k, 0);
  const auto mark = [&](unsigned i, unsigned j, std::size_t y) -> char& {
    return reach[i][(j - pnfa.j_min(i)) * k + y];
  };
  if (!pnfa.start_count().is_zero()) mark(0, 0, chain.initial()) = 1;
  for (unsigned i = 0; i < n; ++i) {
    for (unsigned j = pnfa.j_min(i); j <= pnfa.j_max(i); ++j) {
      for (std::size_t y = 0; y < k; ++y) {
        if (!mark(i, j, y)) continue;
        for (std::size_t next = 0; next < k; ++next) {
          if (!chain.feasible_step(y, next)) continue;
          const unsigned j_next = next == w[i] ? j : j + 1;
          if (!pnfa.state_exists(i + 1, j_next)) continue;
          if (pnfa.completion_count(i + 1, j_next, next).is_zero()) continue;
          mark(i + 1, j_next, next) = 1;
        }
      }
    }
  }
  std::ostringstream out;
  out << "pmnfa word=" << w.text() << " n=" << n << " states=" << k
      << " initial=" << chain.states()->symbol(chain.initial())
      << " ell=" << pnfa.target_distance() << '\n';
  for (unsigned i = 0; i <= n; ++i)
    for (unsigned j = pnfa.j_min(i); j <= pnfa.j_max(i); ++j)
      for (std::size_t y = 0; y < k; ++y)
        if (mark(i, j, y))
          out << "state i=" << i << " j=" << j
              << " y=" << chain.states()->symbol(y)
              << " V=" << pnfa.completion_count(i, j, y) << '\n';
  for (unsigned i = 0; i < n; ++i) {
    for (unsigned j = pnfa.j_min(i); j <= pnfa.j_max(i); ++j) {
      for (std::size_t y = 0; y < k; ++y) {
        if (!mark(i, j, y)) continue;
        const BigInt& v_here = pnfa.completion_count(i, j, y);
        for (std::size_t next = 0; next < k; ++next) {
          if (!chain.feasible_step(y, next)) continue;
          const unsigned j_next = next == w[i] ? j : j + 1;
          if (!pnfa.state_exists(i + 1, j_next)) continue;
          const BigInt& v_next = pnfa.completion_count(i + 1, j_next, next);
          if (v_next.is_zero()) continue;
          out << "edge i=" << i << " j=" << j
              << " y=" << chain.states()->symbol(y) << " -> i=" << i + 1
              << " j=" << j_next << " y=" << chain.states()->symbol(next)
              << " sym=" << chain.states()->symbol(next)
              << " mu=" << detail::ratio_text(v_next, v_here) << '\n';
        }
      }
    }
  }
  return out.str();
}

}  // namespace pfword
