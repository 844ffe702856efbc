#pragma once

// Shared test fixtures: small alphabets and the four-state chain used by
// the product-automaton worked example (y0 -> {y1,y2,y3}, y1 -> {y2,y3},
// y2 -> {y0,y3}, y3 -> {y0,y2}, initial y0).

#include <cstdint>
#include <map>
#include <vector>

#include "pfword/markov.hpp"
#include "pfword/word.hpp"

namespace test_fixtures {

inline pfword::AlphabetPtr abc_alphabet() {
  return pfword::make_alphabet({"a", "b", "c"});
}

inline pfword::AlphabetPtr ab_alphabet() {
  return pfword::make_alphabet({"a", "b"});
}

inline pfword::MarkovChain four_state_chain() {
  const auto states = pfword::make_alphabet({"y0", "y1", "y2", "y3"});
  const double h = 0.5;
  const double t = 1.0 / 3.0;
  std::vector<std::vector<double>> rows = {
      {0.0, t, t, 1.0 - 2.0 * t},  // y0 -> y1, y2, y3
      {0.0, 0.0, h, h},            // y1 -> y2, y3
      {h, 0.0, 0.0, h},            // y2 -> y0, y3
      {h, 0.0, h, 0.0},            // y3 -> y0, y2
  };
  return pfword::MarkovChain(states, std::move(rows), 0);
}

// Index lookup for aligning sampled words with an enumerated candidate list.
inline std::map<std::vector<std::uint32_t>, std::size_t> index_words(
    const std::vector<pfword::Word>& words) {
  std::map<std::vector<std::uint32_t>, std::size_t> index;
  for (std::size_t i = 0; i < words.size(); ++i)
    index.emplace(words[i].symbols(), i);
  return index;
}

}  // namespace test_fixtures
