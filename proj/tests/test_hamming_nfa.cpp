#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <set>
#include <sstream>

#include "pfword/hamming_nfa.hpp"
#include "pfword/oracle.hpp"
#include "pfword/spectrum.hpp"
#include "support/fixtures.hpp"
#include "support/stats.hpp"

using namespace pfword;

namespace {
HammingNfa ready_nfa(const Word& w, unsigned ell) {
  HammingNfa nfa = build_mnfa(w, ell);
  synthesize_policy(nfa);
  return nfa;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}
}  // namespace

TEST_CASE("worked-example automaton: counts and branch ratios") {
  const auto abc = test_fixtures::abc_alphabet();
  const HammingNfa nfa = ready_nfa(parse_word(abc, "a,b,c"), 2);
  CHECK(nfa.start_count() == 12);
  CHECK(nfa.completion_count(1, 0) == 4);  // start branches 4/12 = 1/3 each
  CHECK(nfa.completion_count(1, 1) == 4);
  CHECK(nfa.completion_count(2, 1) == 2);  // 2/4 = 1/2 from (1,1) via match
  CHECK(nfa.completion_count(2, 2) == 1);  // 1/4 from (1,1) via mismatch
  CHECK(nfa.completion_count(3, 2) == 1);
}

TEST_CASE("worked-example automaton matches the golden export") {
  const auto abc = test_fixtures::abc_alphabet();
  const HammingNfa nfa = ready_nfa(parse_word(abc, "a,b,c"), 2);
  const std::string golden =
      read_file(std::string(PFWORD_TEST_DATA_DIR) + "/golden/mnfa_abc_ell2.txt");
  CHECK(export_graph(nfa) == golden);
}

TEST_CASE("degenerate distances") {
  const auto abc = test_fixtures::abc_alphabet();
  const Word w = parse_word(abc, "c,a,b");
  SECTION("ell = 0 is the single path emitting the word itself") {
    const HammingNfa nfa = ready_nfa(w, 0);
    CHECK(nfa.start_count() == 1);
    Rng rng(3);
    CHECK(sample_word(nfa, rng) == w);
  }
  SECTION("ell = n over a binary alphabet is the complement word") {
    const auto ab = test_fixtures::ab_alphabet();
    const Word v = parse_word(ab, "a,b,a");
    const HammingNfa nfa = ready_nfa(v, 3);
    CHECK(nfa.start_count() == 1);
    Rng rng(3);
    CHECK(sample_word(nfa, rng) == parse_word(ab, "b,a,b"));
  }
  SECTION("ell beyond n is rejected") {
    CHECK_THROWS_AS(build_mnfa(w, 4), DomainError);
  }
}

TEST_CASE("completion counts match the closed form") {
  const std::vector<unsigned> alphabet_sizes = {2, 3, 7, 43};
  for (const unsigned m : alphabet_sizes) {
    std::vector<std::string> symbols;
    for (unsigned i = 0; i < m; ++i) symbols.push_back("s" + std::to_string(i));
    const auto alphabet = make_alphabet(symbols);
    for (unsigned n : {1u, 5u, 20u}) {
      const Word w(alphabet, std::vector<std::uint32_t>(n, 0));
      for (unsigned ell : {0u, 1u, n / 2, n}) {
        const HammingNfa nfa = ready_nfa(w, ell);
        for (unsigned i = 0; i <= n; ++i) {
          for (unsigned j = nfa.j_min(i); j <= nfa.j_max(i); ++j) {
            const BigInt expected =
                binomial(n - i, ell - j) *
                boost::multiprecision::pow(BigInt(m - 1), ell - j);
            CHECK(nfa.completion_count(i, j) == expected);
          }
        }
        CHECK(nfa.start_count() == class_count(n, m, ell));
      }
    }
  }
}

TEST_CASE("successor counts partition each state exactly") {
  const auto abc = test_fixtures::abc_alphabet();
  const Word w = parse_word(abc, "a,c,b,b,a");
  for (unsigned ell = 0; ell <= 5; ++ell) {
    const HammingNfa nfa = ready_nfa(w, ell);
    const unsigned m = nfa.alphabet_size();
    for (unsigned i = 0; i < 5; ++i) {
      for (unsigned j = nfa.j_min(i); j <= nfa.j_max(i); ++j) {
        BigInt sum = 0;
        if (nfa.state_exists(i + 1, j)) sum += nfa.completion_count(i + 1, j);
        if (nfa.state_exists(i + 1, j + 1))
          sum += BigInt(m - 1) * nfa.completion_count(i + 1, j + 1);
        CHECK(nfa.completion_count(i, j) == sum);  // ratios sum to 1 exactly
      }
    }
  }
}

TEST_CASE("indices enumerate exactly the accepted language") {
  const auto abc = test_fixtures::abc_alphabet();
  for (unsigned n = 1; n <= 5; ++n) {
    std::vector<std::uint32_t> symbols;
    for (unsigned i = 0; i < n; ++i) symbols.push_back(i % 3);
    const Word w(abc, symbols);
    for (unsigned ell = 0; ell <= n; ++ell) {
      const HammingNfa nfa = ready_nfa(w, ell);
      std::set<std::vector<std::uint32_t>> decoded;
      for (BigInt r = 0; r < nfa.start_count(); ++r) {
        const Word v = word_at_index(nfa, r);
        CHECK(hamming_distance(w, v) == ell);
        decoded.insert(v.symbols());
      }
      std::set<std::vector<std::uint32_t>> brute;
      for (const Word& v : oracle::enumerate_words(abc, n))
        if (hamming_distance(w, v) == ell) brute.insert(v.symbols());
      CHECK(decoded == brute);
    }
  }
}

TEST_CASE("sampled words are uniform over the class") {
  const auto abc = test_fixtures::abc_alphabet();
  const Word w = parse_word(abc, "a,b,c");
  const HammingNfa nfa = ready_nfa(w, 2);
  REQUIRE(nfa.start_count() == 12);

  std::vector<Word> accepted;
  for (const Word& v : oracle::enumerate_words(abc, 3))
    if (hamming_distance(w, v) == 2) accepted.push_back(v);
  const auto index = test_fixtures::index_words(accepted);

  Rng rng(424242);
  const std::size_t trials = 120000;
  std::vector<std::size_t> counts(accepted.size(), 0);
  for (std::size_t t = 0; t < trials; ++t) {
    const Word v = sample_word(nfa, rng);
    REQUIRE(hamming_distance(w, v) == 2);
    ++counts[index.at(v.symbols())];
  }
  const double p = 1.0 / 12.0;
  const double se = std::sqrt(p * (1 - p) * static_cast<double>(trials));
  for (std::size_t c : counts)
    CHECK(std::abs(static_cast<double>(c) - p * trials) <= 3.0 * se);

  const std::vector<double> uniform(accepted.size(), p);
  const double stat = test_stats::chi_square_statistic(counts, uniform, trials);
  CHECK(test_stats::chi_square_p_value(
            stat, static_cast<double>(accepted.size() - 1)) >= 1e-3);
}

TEST_CASE("every draw lands at the target distance") {
  const auto alphabet = make_alphabet({"a", "b", "c", "d", "e"});
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::uint32_t> symbols(7);
    for (auto& s : symbols)
      s = static_cast<std::uint32_t>(rng.next_below(std::uint64_t{5}));
    const Word w(alphabet, symbols);
    const unsigned ell = static_cast<unsigned>(rng.next_below(std::uint64_t{8}));
    const HammingNfa nfa = ready_nfa(w, ell);
    CHECK(hamming_distance(w, sample_word(nfa, rng)) == ell);
  }
}
