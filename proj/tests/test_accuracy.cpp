#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pfword/accuracy.hpp"
#include "pfword/class_distribution.hpp"
#include "support/fixtures.hpp"

using namespace pfword;

TEST_CASE("upper bound") {
  CHECK(upper_bound(5, 2, PrivacyParams(0.1, 1)) ==
        Catch::Approx(2.437513).margin(1e-5));
  CHECK(upper_bound(5, 2, PrivacyParams(1000.0, 1)) ==
        Catch::Approx(0.0).margin(1e-12));
  CHECK(upper_bound(6, 4, PrivacyParams(0.0, 1)) ==
        Catch::Approx(6.0 * 3.0 / 4.0).epsilon(1e-12));
  // figure cross-checks at eps = 5, b = 1
  CHECK(upper_bound(5, 2, PrivacyParams(5.0, 1)) ==
        Catch::Approx(0.379290900106218).margin(1e-9));
  CHECK(upper_bound(5, 3, PrivacyParams(5.0, 1)) ==
        Catch::Approx(0.705094606612051).margin(1e-9));
}

TEST_CASE("upper bound equals the baseline expected error") {
  for (unsigned n : {2u, 7u, 15u}) {
    for (unsigned m : {2u, 6u}) {
      for (const double eps : {0.1, 1.0, 5.0}) {
        for (const unsigned b : {1u, 2u}) {
          const PrivacyParams params(eps, b);
          const double em = expected_error(
              em_class_distribution(full_spectrum(n, m), params));
          CHECK(upper_bound(n, m, params) == Catch::Approx(em).margin(1e-12));
        }
      }
    }
  }
}

TEST_CASE("lower bound") {
  SECTION("value and ordering at n=5, m=2, b=1, eps=0.1") {
    const DistanceSpectrum spectrum = full_spectrum(5, 2);
    const double lb01 = lower_bound(spectrum, PrivacyParams(0.1, 1));
    CHECK(lb01 >= 2.35);
    CHECK(lb01 <= 2.44);
    const double exact01 =
        expected_error(pf_class_distribution(spectrum, PrivacyParams(0.1, 1)));
    CHECK(lb01 <= exact01);
  }
  SECTION("epsilon 0 collapses the covariance correction") {
    const DistanceSpectrum spectrum = full_spectrum(4, 3);
    const PrivacyParams params(0.0, 1);
    CHECK(lower_bound(spectrum, params) ==
          Catch::Approx(upper_bound(4, 3, params)).margin(1e-9));
  }
  SECTION("large epsilon gives a negative but valid bound") {
    const DistanceSpectrum spectrum = full_spectrum(5, 2);
    const PrivacyParams params(10.0, 1);
    const double lb = lower_bound(spectrum, params);
    CHECK(lb < 0.0);
    CHECK(lb <= expected_error(pf_class_distribution(spectrum, params)));
  }
}

TEST_CASE("baseline-weighted phi mean reproduces reference values") {
  // e_em_phi = sum_l P_em(l) Phi(l); frozen reference points exercise the
  // quadrature and the baseline weights together at machine precision.
  struct Reference {
    double eps;
    unsigned n, m;
    double value;  // n C/(1+C) - n/4 * e_em_phi at that configuration
  };
  const std::vector<Reference> refs = {
      {0.1, 5, 2, 2.3933185068274},
      {5.0, 5, 2, -0.463273550750353},
      {5.0, 20, 2, 0.485014404212767},
      {5.0, 5, 10, 2.0457445020015},
  };
  for (const Reference& ref : refs) {
    const PrivacyParams params(ref.eps, 1);
    const BoundReport report =
        bound_report(full_spectrum(ref.n, ref.m), params);
    CHECK(report.upper - ref.n * report.e_em_phi / 4.0 ==
          Catch::Approx(ref.value).margin(1e-9));
  }
}

TEST_CASE("bound report fields") {
  const DistanceSpectrum spectrum = full_spectrum(5, 2);
  const PrivacyParams params(1.0, 1);
  const BoundReport report = bound_report(spectrum, params);
  CHECK(report.c == Catch::Approx(std::exp(-0.5)).epsilon(1e-12));
  CHECK(report.lower <= report.upper);
  CHECK(report.phi0 >= report.phin);
  CHECK(report.e_em_phi > 0.0);
  CHECK_FALSE(report.tail_substituted);
  CHECK(report.tail_class == 5);
}

TEST_CASE("chain-restricted spectra substitute the extreme class") {
  // deterministic cycle: only class 0 is populated
  const auto states = make_alphabet({"y0", "y1"});
  const MarkovChain cycle(states, {{0.0, 1.0}, {1.0, 0.0}}, 0);
  const Word w = parse_word(states, "y1,y0,y1");
  const DistanceSpectrum spectrum = feasible_spectrum(cycle, w);
  const BoundReport report = bound_report(spectrum, PrivacyParams(1.0, 1));
  CHECK(report.tail_substituted);
  CHECK(report.tail_class == 0);
  CHECK(report.phi0 == report.phin);
}

TEST_CASE("sandwich holds on a spot grid") {
  for (unsigned n : {2u, 5u, 11u, 20u}) {
    for (unsigned m : {2u, 5u, 10u}) {
      for (const double eps : {0.1, 1.0, 10.0}) {
        for (const unsigned b : {1u, 3u}) {
          const PrivacyParams params(eps, b);
          const DistanceSpectrum spectrum = full_spectrum(n, m);
          const double exact =
              expected_error(pf_class_distribution(spectrum, params));
          CHECK(lower_bound(spectrum, params) <= exact + 1e-9);
          CHECK(exact <= upper_bound(n, m, params) + 1e-9);
        }
      }
    }
  }
}

TEST_CASE("hoeffding tail") {
  CHECK(hoeffding_tail(5, 5.0) == Catch::Approx(2.0 * std::exp(-2.0)));
  CHECK(hoeffding_tail(5, 1e-12) == Catch::Approx(2.0).margin(1e-9));
  CHECK_THROWS_AS(hoeffding_tail(5, 0.0), DomainError);
  CHECK_THROWS_AS(hoeffding_tail(5, -1.0), DomainError);
}

TEST_CASE("hoeffding bound dominates the empirical tail") {
  const PrivacyParams params(1.0, 1);
  const ClassDistribution dist =
      pf_class_distribution(full_spectrum(5, 2), params);
  const double mean = expected_error(dist);
  Rng rng(8080);
  const std::size_t trials = 100000;
  std::vector<std::size_t> exceed(4, 0);
  for (std::size_t t = 0; t < trials; ++t) {
    const double ell = static_cast<double>(sample_class(dist, rng));
    for (unsigned ti = 1; ti <= 3; ++ti)
      if (std::abs(ell - mean) >= static_cast<double>(ti)) ++exceed[ti];
  }
  for (unsigned ti = 1; ti <= 3; ++ti) {
    const double empirical =
        static_cast<double>(exceed[ti]) / static_cast<double>(trials);
    CHECK(empirical <= hoeffding_tail(5, static_cast<double>(ti)));
  }
}
