#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "pfword/bigint.hpp"
#include "pfword/errors.hpp"
#include "pfword/random.hpp"
#include "pfword/word.hpp"

namespace pfword {

// Layered acceptor for the words of length n at Hamming distance exactly
// ell from a sensitive word. A state (i, j) means i symbols emitted, j of
// them differing from the sensitive word so far. Emitting the sensitive
// word's next symbol moves to (i+1, j); any of the other m-1 symbols moves
// to (i+1, j+1). States that cannot reach the accepting state (n, ell) are
// pruned, which keeps the DAG at O(n * ell) states.
//
// After policy synthesis, V(i, j) holds the exact number of accepting
// completions from (i, j); branch probabilities V(q')/V(q) make one run of
// the automaton a uniform sample of its accepted language.
class HammingNfa {
 public:
  HammingNfa(Word word, unsigned ell)
      : word_(std::move(word)), ell_(ell) {
    const unsigned n = static_cast<unsigned>(word_.length());
    if (ell_ > n)
      throw DomainError("target distance exceeds word length");
    counts_.resize(n + 1);
    for (unsigned i = 0; i <= n; ++i)
      counts_[i].assign(j_max(i) - j_min(i) + 1, BigInt(0));
  }

  const Word& sensitive() const noexcept { return word_; }
  unsigned target_distance() const noexcept { return ell_; }
  unsigned length() const noexcept {
    return static_cast<unsigned>(word_.length());
  }
  unsigned alphabet_size() const noexcept {
    return static_cast<unsigned>(word_.alphabet()->size());
  }
  bool policy_ready() const noexcept { return ready_; }

  // Error budget still reachable from layer i: j must not overshoot ell and
  // must leave enough remaining positions to land exactly on ell.
  unsigned j_min(unsigned i) const {
    const unsigned remaining = length() - i;
    return ell_ > remaining ? ell_ - remaining : 0u;
  }
  unsigned j_max(unsigned i) const { return i < ell_ ? i : ell_; }

  bool state_exists(unsigned i, unsigned j) const {
    return i <= length() && j >= j_min(i) && j <= j_max(i);
  }

  const BigInt& completion_count(unsigned i, unsigned j) const {
    if (!state_exists(i, j)) throw DomainError("no such automaton state");
    return counts_[i][j - j_min(i)];
  }

  const BigInt& start_count() const { return completion_count(0, 0); }

 private:
  friend HammingNfa& synthesize_policy(HammingNfa& nfa);

  BigInt& count_slot(unsigned i, unsigned j) {
    return counts_[i][j - j_min(i)];
  }

  Word word_;
  unsigned ell_;
  std::vector<std::vector<BigInt>> counts_;
  bool ready_ = false;
};

inline HammingNfa build_mnfa(const Word& word, unsigned ell) {
  return HammingNfa(word, ell);
}

// Backward pass from the accepting state: V(n, ell) = 1 and every state
// sums the counts of its successors, counting each mismatch symbol once.
inline HammingNfa& synthesize_policy(HammingNfa& nfa) {
  const unsigned n = nfa.length();
  const unsigned m = nfa.alphabet_size();
  nfa.count_slot(n, nfa.target_distance()) = 1;
  for (unsigned i = n; i-- > 0;) {
    for (unsigned j = nfa.j_min(i); j <= nfa.j_max(i); ++j) {
      BigInt total = 0;
      if (nfa.state_exists(i + 1, j)) total += nfa.completion_count(i + 1, j);
      if (nfa.state_exists(i + 1, j + 1))
        total += BigInt(m - 1) * nfa.completion_count(i + 1, j + 1);
      nfa.count_slot(i, j) = total;
    }
  }
  nfa.ready_ = true;
  return nfa;
}

// Decodes the accepted word with the given index in [0, V(0,0)). Branches
// at each state are ordered by symbol index, so indices enumerate the
// accepted language bijectively.
inline Word word_at_index(const HammingNfa& nfa, BigInt index) {
  if (!nfa.policy_ready())
    throw DomainError("policy not synthesized");
  if (index < 0 || index >= nfa.start_count())
    throw DomainError("word index out of range");
  const Word& w = nfa.sensitive();
  const unsigned n = nfa.length();
  const unsigned m = nfa.alphabet_size();
  static const BigInt kZero = 0;
  std::vector<std::uint32_t> out;
  out.reserve(n);
  unsigned j = 0;
  for (unsigned i = 0; i < n; ++i) {
    const std::uint32_t match = w[i];
    const BigInt& v_match =
        nfa.state_exists(i + 1, j) ? nfa.completion_count(i + 1, j) : kZero;
    const BigInt& v_miss = nfa.state_exists(i + 1, j + 1)
                               ? nfa.completion_count(i + 1, j + 1)
                               : kZero;
    for (std::uint32_t sym = 0; sym < m; ++sym) {
      const BigInt& v = sym == match ? v_match : v_miss;
      if (v.is_zero()) continue;
      if (index < v) {
        out.push_back(sym);
        if (sym != match) ++j;
        break;
      }
      index -= v;
    }
  }
  return Word(w.alphabet(), std::move(out));
}

// Uniform sample over the accepted language: one exact integer draw in
// [0, V(0,0)), then a deterministic descent. No floating-point bias.
inline Word sample_word(const HammingNfa& nfa, Rng& rng) {
  if (!nfa.policy_ready())
    throw DomainError("policy not synthesized");
  return word_at_index(nfa, rng.next_below(nfa.start_count()));
}

namespace detail {
inline std::string ratio_text(const BigInt& num, const BigInt& den) {
  const BigInt g = boost::multiprecision::gcd(num, den);
  const BigInt rn = num / g;
  const BigInt rd = den / g;
  std::ostringstream out;
  out << rn;
  if (rd != 1) out << '/' << rd;
  return out.str();
}
}  // namespace detail

// Line-oriented dump of states, completion counts and branch ratios, used
// for golden-file comparisons. Edges are ordered by (i, j, symbol index).
inline std::string export_graph(const HammingNfa& nfa) {
  if (!nfa.policy_ready())
    throw DomainError("policy not synthesized");
  const Word& w = nfa.sensitive();
  const unsigned n = nfa.length();
  const unsigned m = nfa.alphabet_size();
  std::ostringstream out;
  out << "mnfa word=" << w.text() << " n=" << n << " m=" << m
      << " ell=" << nfa.target_distance() << '\n';
  for (unsigned i = 0; i <= n; ++i)
    for (unsigned j = nfa.j_min(i); j <= nfa.j_max(i); ++j)
      out << "state i=" << i << " j=" << j
          << " V=" << nfa.completion_count(i, j) << '\n';
  for (unsigned i = 0; i < n; ++i) {
    for (unsigned j = nfa.j_min(i); j <= nfa.j_max(i); ++j) {
      const BigInt& v_here = nfa.completion_count(i, j);
      if (v_here.is_zero()) continue;
      for (std::uint32_t sym = 0; sym < m; ++sym) {
        const unsigned j_next = sym == w[i] ? j : j + 1;
        if (!nfa.state_exists(i + 1, j_next)) continue;
        const BigInt& v_next = nfa.completion_count(i + 1, j_next);
        if (v_next.is_zero()) continue;
        out << "edge i=" << i << " j=" << j << " -> i=" << i + 1
            << " j=" << j_next << " sym=" << w.alphabet()->symbol(sym)
            << " mu=" << detail::ratio_text(v_next, v_here) << '\n';
      }
    }
  }
  return out.str();
}

}  // namespace pfword
