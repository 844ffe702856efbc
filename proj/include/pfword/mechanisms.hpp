#pragma once

#include <chrono>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "pfword/class_distribution.hpp"
#include "pfword/errors.hpp"
#include "pfword/hamming_nfa.hpp"
#include "pfword/markov.hpp"
#include "pfword/random.hpp"
#include "pfword/spectrum.hpp"
#include "pfword/word.hpp"

namespace pfword {

enum class MechanismId { pf_word, pf_markov, em_word, em_markov };

inline std::string_view to_string(MechanismId id) {
  switch (id) {
    case MechanismId::pf_word: return "pf-word";
    case MechanismId::pf_markov: return "pf-markov";
    case MechanismId::em_word: return "em-word";
    case MechanismId::em_markov: return "em-markov";
  }
  return "unknown";
}

inline std::optional<MechanismId> mechanism_from_string(std::string_view s) {
  if (s == "pf-word") return MechanismId::pf_word;
  if (s == "pf-markov") return MechanismId::pf_markov;
  if (s == "em-word") return MechanismId::em_word;
  if (s == "em-markov") return MechanismId::em_markov;
  return std::nullopt;
}

struct MechanismReport {
  MechanismId mechanism;
  PrivacyParams params;
  Word input;
  Word output;
  unsigned ell;
  std::uint64_t seed;
  double wall_time_us = 0.0;
};

// One privatization instance with everything that does not depend on the
// random stream built up front: the class distribution plus one sampling
// automaton per nonempty class. Immutable after construction, so repeated
// and concurrent draws (each with its own stream) are cheap. Every run
// consumes exactly one class draw followed by one word draw.
class Privatizer {
 public:
  // Unconstrained variant over the word's full alphabet.
  Privatizer(Word word, const PrivacyParams& params, bool exponential_baseline)
      : word_(std::move(word)),
        params_(params),
        id_(exponential_baseline ? MechanismId::em_word
                                 : MechanismId::pf_word),
        dist_(make_distribution(
            full_spectrum(static_cast<unsigned>(word_.length()),
                          static_cast<unsigned>(word_.alphabet()->size())),
            params, exponential_baseline)) {
    const unsigned n = static_cast<unsigned>(word_.length());
    nfas_.reserve(n + 1);
    for (unsigned ell = 0; ell <= n; ++ell) {
      nfas_.emplace_back(build_mnfa(word_, ell));
      synthesize_policy(nfas_.back());
    }
  }

  // Chain-restricted variant; outputs are always feasible trajectories.
  Privatizer(MarkovChain chain, Word word, const PrivacyParams& params,
             bool exponential_baseline)
      : word_(std::move(word)),
        params_(params),
        id_(exponential_baseline ? MechanismId::em_markov
                                 : MechanismId::pf_markov),
        chain_(std::move(chain)),
        dist_(make_distribution(feasible_spectrum(*chain_, word_), params,
                                exponential_baseline)) {
    const unsigned n = static_cast<unsigned>(word_.length());
    products_.reserve(n + 1);
    for (unsigned ell = 0; ell <= n; ++ell) {
      products_.emplace_back(build_product(*chain_, word_, ell));
      synthesize_product_policy(products_.back());
    }
  }

  MechanismId id() const noexcept { return id_; }
  const Word& input() const noexcept { return word_; }
  const PrivacyParams& params() const noexcept { return params_; }
  const ClassDistribution& distribution() const noexcept { return dist_; }

  MechanismReport run(Rng& rng) const {
    const auto start = std::chrono::steady_clock::now();
    const unsigned ell = sample_class(dist_, rng);
    Word output = chain_ ? sample_feasible_word(products_[ell], rng)
                         : sample_word(nfas_[ell], rng);
    const auto stop = std::chrono::steady_clock::now();
    const double micros =
        std::chrono::duration<double, std::micro>(stop - start).count();
    return MechanismReport{id_,  params_,    word_, std::move(output),
                           ell,  rng.seed(), micros};
  }

  MechanismReport run_seeded(std::uint64_t seed) const {
    Rng rng(seed);
    return run(rng);
  }

 private:
  static ClassDistribution make_distribution(DistanceSpectrum spectrum,
                                             const PrivacyParams& params,
                                             bool exponential_baseline) {
    return exponential_baseline
               ? em_class_distribution(std::move(spectrum), params)
               : pf_class_distribution(std::move(spectrum), params);
  }

  Word word_;
  PrivacyParams params_;
  MechanismId id_;
  std::optional<MarkovChain> chain_;
  ClassDistribution dist_;
  std::vector<HammingNfa> nfas_;
  std::vector<ProductNfa> products_;
};

// Permute-and-flip privatization of an unconstrained word: draw a distance
// class from the permute-and-flip class pmf, then a uniform word within it.
inline MechanismReport mechanism1(const Word& w, const PrivacyParams& params,
                                  Rng& rng) {
  return Privatizer(w, params, false).run(rng);
}

// Chain-restricted permute-and-flip: the class pmf runs over feasible
// counts and the word is drawn from the product automaton, so the output
// is always a feasible trajectory.
inline MechanismReport mechanism2(const MarkovChain& chain, const Word& w,
                                  const PrivacyParams& params, Rng& rng) {
  return Privatizer(chain, w, params, false).run(rng);
}

// Exponential-mechanism baseline, same within-class sampling.
inline MechanismReport em_mechanism(const Word& w, const PrivacyParams& params,
                                    Rng& rng) {
  return Privatizer(w, params, true).run(rng);
}

inline MechanismReport em_mechanism(const MarkovChain& chain, const Word& w,
                                    const PrivacyParams& params, Rng& rng) {
  return Privatizer(chain, w, params, true).run(rng);
}

}  // namespace pfword
