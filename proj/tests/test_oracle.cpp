#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pfword/oracle.hpp"
#include "support/fixtures.hpp"
#include "support/stats.hpp"

using namespace pfword;
using oracle::ExactPmf;

TEST_CASE("literal subset sum basics") {
  const PrivacyParams params(2.0, 1);
  SECTION("single candidate: only the empty subset") {
    CHECK(oracle::psi_literal({0}, 0, params) == 1.0);
  }
  SECTION("equal utilities collapse to 1/N") {
    for (std::size_t n = 2; n <= 12; ++n) {
      const std::vector<std::int64_t> utilities(n, 0);
      CHECK(oracle::psi_literal(utilities, 0, params) ==
            Catch::Approx(1.0 / static_cast<double>(n)).epsilon(1e-12));
    }
  }
  SECTION("capacity cap") {
    CHECK_THROWS_AS(
        oracle::psi_literal(std::vector<std::int64_t>(25, 0), 0, params),
        CapacityError);
    CHECK_THROWS_AS(oracle::psi_literal({0, -1}, 2, params), DomainError);
  }
}

TEST_CASE("exact pmf examples") {
  const auto ab = test_fixtures::ab_alphabet();
  SECTION("epsilon 0 is uniform") {
    const auto words = oracle::enumerate_words(ab, 2);
    const ExactPmf pmf =
        oracle::exact_pf_pmf(words[0], words, PrivacyParams(0.0, 1));
    for (double p : pmf.probs) CHECK(p == Catch::Approx(0.25).epsilon(1e-12));
  }
  SECTION("two-candidate closed form") {
    const auto words = oracle::enumerate_words(ab, 1);
    const ExactPmf pmf =
        oracle::exact_pf_pmf(words[0], words, PrivacyParams(2.0, 1));
    CHECK(pmf.probs[0] ==
          Catch::Approx(1.0 - std::exp(-1.0) / 2.0).epsilon(1e-12));
    CHECK(pmf.probs[1] == Catch::Approx(std::exp(-1.0) / 2.0).epsilon(1e-12));
  }
  SECTION("sums to 1 and is constant within each distance class") {
    const auto words = oracle::enumerate_words(ab, 3);
    const Word w = words[5];
    const ExactPmf pmf = oracle::exact_pf_pmf(w, words, PrivacyParams(1.3, 1));
    double sum = 0.0;
    std::vector<double> class_prob(4, -1.0);
    for (std::size_t i = 0; i < words.size(); ++i) {
      sum += pmf.probs[i];
      const auto d = hamming_distance(w, words[i]);
      if (class_prob[d] < 0.0)
        class_prob[d] = pmf.probs[i];
      else
        CHECK(pmf.probs[i] == Catch::Approx(class_prob[d]).epsilon(1e-12));
    }
    CHECK(sum == Catch::Approx(1.0).margin(1e-9));
  }
}

TEST_CASE("shuffle-then-accept simulation agrees with the exact pmf") {
  const auto ab = test_fixtures::ab_alphabet();
  const auto words = oracle::enumerate_words(ab, 3);
  const Word w = words[0];
  SECTION("epsilon 0 is uniform within sampling error") {
    Rng rng(555);
    const auto freq =
        oracle::simulate_pf(w, words, PrivacyParams(0.0, 1), 100000, rng);
    for (double f : freq) CHECK(f == Catch::Approx(0.125).margin(0.005));
  }
  SECTION("total variation against the exact pmf") {
    const PrivacyParams params(1.0, 1);
    const ExactPmf exact = oracle::exact_pf_pmf(w, words, params);
    Rng rng(777);
    const auto freq = oracle::simulate_pf(w, words, params, 1000000, rng);
    CHECK(test_stats::tv_distance(exact.probs, freq) <= 0.01);
  }
}

TEST_CASE("privacy ratio verification") {
  const PrivacyParams params(1.0, 1);
  const auto ab = test_fixtures::ab_alphabet();
  const auto words = oracle::enumerate_words(ab, 2);

  SECTION("identical pmfs have ratio 0") {
    std::vector<std::pair<Word, ExactPmf>> family;
    const ExactPmf uniform{words, std::vector<double>(words.size(), 0.25)};
    for (const Word& w : words) family.emplace_back(w, uniform);
    const auto check = oracle::verify_dp(family, 1, 1.0);
    CHECK(check.max_log_ratio == 0.0);
    CHECK(check.holds);
    CHECK(check.pairs_checked > 0);
  }
  SECTION("zero-probability asymmetry is a violation") {
    std::vector<std::pair<Word, ExactPmf>> family;
    family.emplace_back(words[0],
                        ExactPmf{words, {0.5, 0.5, 0.0, 0.0}});
    family.emplace_back(words[1],
                        ExactPmf{words, {0.25, 0.25, 0.25, 0.25}});
    const auto check = oracle::verify_dp(family, 2, 10.0);
    CHECK(check.zero_probability_asymmetry);
    CHECK_FALSE(check.holds);
    CHECK(std::isinf(check.max_log_ratio));
  }
  SECTION("the exact pf pmf family satisfies the ratio bound") {
    for (const double eps : {0.5, 1.0, 5.0}) {
      const PrivacyParams p(eps, 1);
      const auto all = oracle::enumerate_words(ab, 3);
      std::vector<std::pair<Word, ExactPmf>> family;
      for (const Word& w : all)
        family.emplace_back(w, oracle::exact_pf_pmf(w, all, p));
      const auto check = oracle::verify_dp(family, 1, eps);
      CHECK(check.holds);
      CHECK(check.max_log_ratio <= eps + 1e-9);
    }
  }
  SECTION("the chain-restricted family satisfies the ratio bound") {
    const MarkovChain chain = test_fixtures::four_state_chain();
    const auto feasible = oracle::enumerate_feasible_words(chain, 3);
    std::vector<std::pair<Word, ExactPmf>> family;
    for (const Word& w : feasible)
      family.emplace_back(w, oracle::exact_pf_pmf(w, feasible, params));
    const auto check = oracle::verify_dp(family, 1, 1.0);
    CHECK(check.holds);
    CHECK(check.max_log_ratio <= 1.0 + 1e-9);
  }
}

TEST_CASE("word enumeration") {
  const auto ab = test_fixtures::ab_alphabet();
  CHECK(oracle::enumerate_words(ab, 3).size() == 8);
  const MarkovChain chain = test_fixtures::four_state_chain();
  CHECK(oracle::enumerate_feasible_words(chain, 3).size() == 14);
  for (const Word& w : oracle::enumerate_feasible_words(chain, 4))
    CHECK(is_feasible(chain, w));
}
