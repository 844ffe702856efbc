#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "pfword/accuracy.hpp"
#include "pfword/io.hpp"
#include "pfword/mechanisms.hpp"
#include "pfword/random.hpp"

namespace pfword {

// Error-versus-epsilon experiment: repeated privatization of one sensitive
// word across an epsilon grid, for the permute-and-flip mechanism and/or
// the exponential-mechanism baseline.
struct SweepConfig {
  std::vector<double> epsilons;
  unsigned adjacency = 1;
  std::size_t trials = 1;
  bool run_pf = true;
  bool run_em = true;
  std::uint64_t master_seed = 0;
  std::optional<MarkovChain> chain;  // restrict outputs to feasible words
  std::optional<Word> word;          // sensitive input
};

struct SweepRow {
  MechanismId mechanism;
  double epsilon;
  unsigned b;
  unsigned n;
  unsigned m;
  std::size_t trial;
  unsigned ell;
  std::uint64_t seed;
};

struct SweepSummaryEntry {
  double epsilon = 0.0;
  double pf_mean = 0.0;
  double em_mean = 0.0;
  double reduction_percent = 0.0;  // (em - pf) / em, in percent
  double upper = 0.0;
  double lower = 0.0;
  bool has_pf = false;
  bool has_em = false;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<SweepSummaryEntry> summary;
};

// Deterministic under the master seed: trial seeds are derived from
// (master, mechanism, epsilon index, trial index), so rows are reproducible
// and safe to compute in parallel; they are emitted in trial order.
inline SweepResult run_sweep(const SweepConfig& config) {
  if (config.epsilons.empty()) throw DomainError("sweep: empty epsilon grid");
  if (config.trials < 1) throw DomainError("sweep: trials must be >= 1");
  if (!config.run_pf && !config.run_em)
    throw DomainError("sweep: no mechanism selected");
  if (!config.word) throw DomainError("sweep: missing sensitive word");
  const Word& word = *config.word;
  if (config.chain) detail::require_chain_word(*config.chain, word);

  SweepResult result;
  result.rows.reserve(config.epsilons.size() * config.trials *
                      (config.run_pf + config.run_em));
  const unsigned n = static_cast<unsigned>(word.length());
  const unsigned m = static_cast<unsigned>(
      config.chain ? config.chain->size() : word.alphabet()->size());

  for (std::size_t e = 0; e < config.epsilons.size(); ++e) {
    const PrivacyParams params(config.epsilons[e], config.adjacency);
    SweepSummaryEntry entry;
    entry.epsilon = params.epsilon;
    // reference bounds for the unconstrained mechanism at the same (n, m);
    // they are not valid bounds for chain-restricted spectra
    const BoundReport bounds = bound_report(full_spectrum(n, m), params);
    entry.upper = bounds.upper;
    entry.lower = bounds.lower;
    for (const bool baseline : {false, true}) {
      if (baseline ? !config.run_em : !config.run_pf) continue;
      const Privatizer privatizer =
          config.chain ? Privatizer(*config.chain, word, params, baseline)
                       : Privatizer(word, params, baseline);
      double sum_ell = 0.0;
      for (std::size_t trial = 0; trial < config.trials; ++trial) {
        const std::uint64_t seed = derive_seed(
            config.master_seed, static_cast<std::uint64_t>(privatizer.id()),
            e, trial);
        const MechanismReport report = privatizer.run_seeded(seed);
        sum_ell += static_cast<double>(report.ell);
        result.rows.push_back(SweepRow{privatizer.id(), params.epsilon,
                                       params.adjacency, n, m, trial,
                                       report.ell, seed});
      }
      const double mean = sum_ell / static_cast<double>(config.trials);
      if (baseline) {
        entry.em_mean = mean;
        entry.has_em = true;
      } else {
        entry.pf_mean = mean;
        entry.has_pf = true;
      }
    }
    if (entry.has_pf && entry.has_em && entry.em_mean > 0.0)
      entry.reduction_percent =
          100.0 * (entry.em_mean - entry.pf_mean) / entry.em_mean;
    result.summary.push_back(entry);
  }
  return result;
}

inline constexpr std::string_view kSweepCsvHeader =
    "mechanism,epsilon,b,n,m,trial,ell,seed";

inline void write_sweep_csv(std::ostream& out,
                            const std::vector<SweepRow>& rows) {
  out << kSweepCsvHeader << '\n';
  for (const SweepRow& row : rows) {
    out << to_string(row.mechanism) << ',' << format_double(row.epsilon)
        << ',' << row.b << ',' << row.n << ',' << row.m << ',' << row.trial
        << ',' << row.ell << ',' << row.seed << '\n';
  }
}

inline nlohmann::json sweep_rows_to_json(const std::vector<SweepRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const SweepRow& row : rows) {
    nlohmann::json j;
    j["mechanism"] = std::string(to_string(row.mechanism));
    j["epsilon"] = row.epsilon;
    j["b"] = row.b;
    j["n"] = row.n;
    j["m"] = row.m;
    j["trial"] = row.trial;
    j["ell"] = row.ell;
    j["seed"] = row.seed;
    arr.push_back(std::move(j));
  }
  return arr;
}

inline nlohmann::json sweep_summary_to_json(const SweepResult& result) {
  nlohmann::json arr = nlohmann::json::array();
  for (const SweepSummaryEntry& entry : result.summary) {
    nlohmann::json j;
    j["epsilon"] = entry.epsilon;
    if (entry.has_pf) j["pf_mean_ell"] = entry.pf_mean;
    if (entry.has_em) j["em_mean_ell"] = entry.em_mean;
    if (entry.has_pf && entry.has_em)
      j["reduction_percent"] = entry.reduction_percent;
    j["upper_bound"] = entry.upper;
    j["lower_bound"] = entry.lower;
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace pfword
