#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "pfword/accuracy.hpp"
#include "pfword/class_distribution.hpp"
#include "pfword/errors.hpp"
#include "pfword/markov.hpp"
#include "pfword/mechanisms.hpp"

namespace pfword {

// Shortest round-trip decimal form; locale-independent.
inline std::string format_double(double value) {
  char buffer[32];
  const auto [ptr, ec] =
      std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc{}) throw NumericError("cannot format double", value, 0);
  return std::string(buffer, ptr);
}

inline nlohmann::json chain_to_json(const MarkovChain& chain) {
  nlohmann::json j;
  j["states"] = chain.states()->symbols();
  j["initial"] = chain.states()->symbol(chain.initial());
  j["transitions"] = chain.transitions();
  return j;
}

inline MarkovChain chain_from_json(const nlohmann::json& j) {
  try {
    std::vector<std::string> labels =
        j.at("states").get<std::vector<std::string>>();
    const std::string initial = j.at("initial").get<std::string>();
    std::vector<std::vector<double>> transitions =
        j.at("transitions").get<std::vector<std::vector<double>>>();
    AlphabetPtr states = make_alphabet(std::move(labels));
    const auto initial_index = states->index_of(initial);
    if (!initial_index)
      throw ParseError("chain initial state '" + initial +
                       "' is not a member of the state list");
    return MarkovChain(std::move(states), std::move(transitions),
                       *initial_index);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed chain JSON: ") + e.what());
  }
}

inline MarkovChain load_chain(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open chain file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("cannot parse chain file: ") + e.what());
  }
  return chain_from_json(j);
}

inline void save_chain(const MarkovChain& chain,
                       const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write chain file: " + path.string());
  out << chain_to_json(chain).dump(2) << '\n';
  if (!out) throw IoError("failed writing chain file: " + path.string());
}

// Timing is excluded by default so identical inputs and seed produce
// byte-identical JSON.
inline nlohmann::json report_to_json(const MechanismReport& report,
                                     bool include_timing = false) {
  nlohmann::json j;
  j["mechanism"] = std::string(to_string(report.mechanism));
  j["epsilon"] = report.params.epsilon;
  j["adjacency"] = report.params.adjacency;
  j["n"] = report.input.length();
  j["m"] = report.input.alphabet()->size();
  j["alphabet"] = report.input.alphabet()->symbols();
  j["input"] = report.input.text();
  j["output"] = report.output.text();
  j["ell"] = report.ell;
  j["seed"] = report.seed;
  if (include_timing) j["wall_time_us"] = report.wall_time_us;
  return j;
}

inline MechanismReport report_from_json(const nlohmann::json& j) {
  try {
    const auto id = mechanism_from_string(j.at("mechanism").get<std::string>());
    if (!id) throw ParseError("unknown mechanism id in report");
    AlphabetPtr alphabet =
        make_alphabet(j.at("alphabet").get<std::vector<std::string>>());
    PrivacyParams params(j.at("epsilon").get<double>(),
                         j.at("adjacency").get<unsigned>());
    MechanismReport report{
        *id,
        params,
        parse_word(alphabet, j.at("input").get<std::string>()),
        parse_word(alphabet, j.at("output").get<std::string>()),
        j.at("ell").get<unsigned>(),
        j.at("seed").get<std::uint64_t>(),
        j.contains("wall_time_us") ? j.at("wall_time_us").get<double>() : 0.0};
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed report JSON: ") + e.what());
  }
}

inline bool report_equal(const MechanismReport& a, const MechanismReport& b) {
  return a.mechanism == b.mechanism &&
         a.params.epsilon == b.params.epsilon &&
         a.params.adjacency == b.params.adjacency && a.input == b.input &&
         a.output == b.output && a.ell == b.ell && a.seed == b.seed;
}

inline nlohmann::json distribution_to_json(const ClassDistribution& dist,
                                           std::string_view kind) {
  nlohmann::json j;
  j["kind"] = std::string(kind);
  j["n"] = dist.spectrum.n;
  j["m"] = dist.spectrum.m;
  j["epsilon"] = dist.params.epsilon;
  j["adjacency"] = dist.params.adjacency;
  j["prenorm_sum"] = dist.prenorm_sum;
  j["expected_error"] = expected_error(dist);
  nlohmann::json classes = nlohmann::json::array();
  for (unsigned ell = 0; ell < dist.probs.size(); ++ell) {
    nlohmann::json c;
    c["ell"] = ell;
    c["count"] = dist.spectrum.counts[ell].str();
    c["prob"] = dist.probs[ell];
    if (std::isfinite(dist.log_weights[ell]))
      c["log_weight"] = dist.log_weights[ell];
    classes.push_back(std::move(c));
  }
  j["classes"] = std::move(classes);
  return j;
}

inline nlohmann::json bound_report_to_json(const BoundReport& report,
                                           unsigned n, unsigned m,
                                           const PrivacyParams& params) {
  nlohmann::json j;
  j["n"] = n;
  j["m"] = m;
  j["epsilon"] = params.epsilon;
  j["adjacency"] = params.adjacency;
  j["C"] = report.c;
  j["upper"] = report.upper;
  j["lower"] = report.lower;
  j["e_em_phi"] = report.e_em_phi;
  j["phi0"] = report.phi0;
  j["phin"] = report.phin;
  j["tail_class"] = report.tail_class;
  j["tail_substituted"] = report.tail_substituted;
  return j;
}

}  // namespace pfword
