// Command-line surface for word privatization: privatize single words and
// chain trajectories, inspect class pmfs and accuracy bounds, run
// error-vs-epsilon sweeps, generate synthetic chains, and run the
// brute-force verification oracles.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <locale>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pfword/pfword.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailedCheck = 1;
constexpr int kExitValidation = 2;
constexpr int kExitCapacity = 3;
constexpr int kExitNumeric = 4;
constexpr int kExitIo = 5;

double parse_number(const std::string& text) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw pfword::ParseError("not a number: '" + text + "'");
  return value;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::size_t end = comma == std::string::npos ? text.size() : comma;
    values.push_back(parse_number(text.substr(start, end - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (values.empty()) throw pfword::ParseError("empty number list");
  return values;
}

// Synthesizes single-letter labels for small sizes, s0..s{m-1} otherwise.
pfword::AlphabetPtr synthetic_alphabet(unsigned m) {
  std::vector<std::string> symbols;
  symbols.reserve(m);
  for (unsigned i = 0; i < m; ++i) {
    if (m <= 26)
      symbols.emplace_back(1, static_cast<char>('a' + i));
    else
      symbols.push_back("s" + std::to_string(i));
  }
  return pfword::make_alphabet(std::move(symbols));
}

void emit(const nlohmann::json& j) { std::cout << j.dump(2) << '\n'; }

struct PrivatizeWordOptions {
  std::string word;
  std::string alphabet;
  double epsilon = 1.0;
  unsigned adjacency = 1;
  std::uint64_t seed = 0;
  std::string mechanism = "pf";
  bool timing = false;
};

int run_privatize_word(const PrivatizeWordOptions& opt) {
  const pfword::AlphabetPtr alphabet = pfword::parse_alphabet(opt.alphabet);
  const pfword::Word word = pfword::parse_word(alphabet, opt.word);
  const pfword::PrivacyParams params(opt.epsilon, opt.adjacency);
  pfword::Rng rng(opt.seed);
  const pfword::MechanismReport report =
      opt.mechanism == "em" ? pfword::em_mechanism(word, params, rng)
                            : pfword::mechanism1(word, params, rng);
  emit(pfword::report_to_json(report, opt.timing));
  return kExitOk;
}

struct PrivatizeTrajectoryOptions {
  std::string chain_path;
  std::string word;
  double epsilon = 1.0;
  unsigned adjacency = 1;
  std::uint64_t seed = 0;
  std::string mechanism = "pf";
  bool timing = false;
};

int run_privatize_trajectory(const PrivatizeTrajectoryOptions& opt) {
  const pfword::MarkovChain chain = pfword::load_chain(opt.chain_path);
  const pfword::Word word = pfword::parse_word(chain.states(), opt.word);
  const pfword::PrivacyParams params(opt.epsilon, opt.adjacency);
  pfword::Rng rng(opt.seed);
  const pfword::MechanismReport report =
      opt.mechanism == "em" ? pfword::em_mechanism(chain, word, params, rng)
                            : pfword::mechanism2(chain, word, params, rng);
  emit(pfword::report_to_json(report, opt.timing));
  return kExitOk;
}

struct PmfOptions {
  double epsilon = 1.0;
  unsigned adjacency = 1;
  unsigned n = 0;
  unsigned m = 0;
  std::string alphabet;
  std::string chain_path;
  std::string word;
  std::string mechanism = "pf";
};

int run_pmf(const PmfOptions& opt) {
  const pfword::PrivacyParams params(opt.epsilon, opt.adjacency);
  pfword::DistanceSpectrum spectrum;
  if (!opt.chain_path.empty()) {
    if (opt.word.empty())
      throw pfword::DomainError("pmf over a chain needs --word");
    const pfword::MarkovChain chain = pfword::load_chain(opt.chain_path);
    spectrum = pfword::feasible_spectrum(
        chain, pfword::parse_word(chain.states(), opt.word));
  } else {
    if (opt.n == 0) throw pfword::DomainError("pmf needs --n");
    unsigned m = opt.m;
    if (!opt.alphabet.empty())
      m = static_cast<unsigned>(pfword::parse_alphabet(opt.alphabet)->size());
    if (m == 0) throw pfword::DomainError("pmf needs --m or --alphabet");
    spectrum = pfword::full_spectrum(opt.n, m);
  }
  const pfword::ClassDistribution dist =
      opt.mechanism == "em"
          ? pfword::em_class_distribution(std::move(spectrum), params)
          : pfword::pf_class_distribution(std::move(spectrum), params);
  emit(pfword::distribution_to_json(dist, opt.mechanism));
  return kExitOk;
}

struct BoundsOptions {
  unsigned n = 0;
  unsigned m = 0;
  double epsilon = 1.0;
  unsigned adjacency = 1;
  std::string t_values;
};

int run_bounds(const BoundsOptions& opt) {
  const pfword::PrivacyParams params(opt.epsilon, opt.adjacency);
  const pfword::DistanceSpectrum spectrum = pfword::full_spectrum(opt.n, opt.m);
  const pfword::BoundReport report = pfword::bound_report(spectrum, params);
  nlohmann::json j = pfword::bound_report_to_json(report, opt.n, opt.m, params);
  if (!opt.t_values.empty()) {
    nlohmann::json tails = nlohmann::json::array();
    for (double t : parse_number_list(opt.t_values)) {
      nlohmann::json entry;
      entry["t"] = t;
      entry["bound"] = pfword::hoeffding_tail(opt.n, t);
      tails.push_back(std::move(entry));
    }
    j["hoeffding"] = std::move(tails);
  }
  emit(j);
  return kExitOk;
}

struct SweepOptions {
  std::string epsilons;
  unsigned adjacency = 1;
  std::size_t trials = 2000;
  std::string mechanisms = "pf,em";
  std::uint64_t seed = 0;
  std::string chain_path;
  std::string word;
  std::string alphabet;
  unsigned n = 0;
  unsigned m = 0;
  std::string out;
  std::string format = "csv";
};

int run_sweep_cmd(const SweepOptions& opt) {
  pfword::SweepConfig config;
  config.epsilons = parse_number_list(opt.epsilons);
  config.adjacency = opt.adjacency;
  config.trials = opt.trials;
  config.master_seed = opt.seed;
  config.run_pf = opt.mechanisms.find("pf") != std::string::npos;
  config.run_em = opt.mechanisms.find("em") != std::string::npos;

  if (!opt.chain_path.empty()) {
    config.chain = pfword::load_chain(opt.chain_path);
    if (!opt.word.empty()) {
      config.word = pfword::parse_word(config.chain->states(), opt.word);
    } else {
      if (opt.n == 0)
        throw pfword::DomainError("sweep over a chain needs --word or --n");
      pfword::Rng rng(pfword::derive_seed(opt.seed, 0x7472616au));  // word salt
      config.word = pfword::random_trajectory(*config.chain, opt.n, rng);
    }
  } else {
    pfword::AlphabetPtr alphabet;
    if (!opt.alphabet.empty())
      alphabet = pfword::parse_alphabet(opt.alphabet);
    else if (opt.m >= 2)
      alphabet = synthetic_alphabet(opt.m);
    else
      throw pfword::DomainError("sweep needs --chain, --alphabet, or --m");
    if (!opt.word.empty()) {
      config.word = pfword::parse_word(alphabet, opt.word);
    } else {
      if (opt.n == 0) throw pfword::DomainError("sweep needs --word or --n");
      config.word = pfword::Word(
          alphabet, std::vector<std::uint32_t>(opt.n, 0));
    }
  }

  const pfword::SweepResult result = pfword::run_sweep(config);

  if (!opt.out.empty()) {
    std::ofstream file(opt.out);
    if (!file) throw pfword::IoError("cannot write " + opt.out);
    if (opt.format == "json")
      file << pfword::sweep_rows_to_json(result.rows).dump(2) << '\n';
    else
      pfword::write_sweep_csv(file, result.rows);
    if (!file) throw pfword::IoError("failed writing " + opt.out);
  }

  nlohmann::json summary;
  summary["word"] = config.word->text();
  summary["trials"] = config.trials;
  summary["adjacency"] = config.adjacency;
  summary["master_seed"] = config.master_seed;
  if (!opt.out.empty()) summary["rows_file"] = opt.out;
  summary["per_epsilon"] = pfword::sweep_summary_to_json(result);
  emit(summary);
  return kExitOk;
}

struct GenChainOptions {
  unsigned states = 2;
  double density = 1.0;
  std::uint64_t seed = 0;
  std::string out;
  unsigned max_steps = 0;
};

int run_gen_chain(const GenChainOptions& opt) {
  const pfword::MarkovChain chain =
      pfword::random_chain(opt.states, opt.density, opt.seed);
  pfword::save_chain(chain, opt.out);
  const unsigned max_steps = opt.max_steps == 0 ? opt.states : opt.max_steps;
  nlohmann::json j;
  j["out"] = opt.out;
  j["states"] = opt.states;
  j["density"] = opt.density;
  j["seed"] = opt.seed;
  j["initial"] = chain.states()->symbol(chain.initial());
  j["max_steps"] = max_steps;
  j["reachable_states"] = pfword::reachable_states(chain, max_steps);
  emit(j);
  return kExitOk;
}

struct VerifyDpOptions {
  std::string mode = "word";
  unsigned n = 0;
  unsigned m = 0;
  std::string alphabet;
  std::string chain_path;
  double epsilon = 1.0;
  unsigned adjacency = 1;
};

int run_verify_dp(const VerifyDpOptions& opt) {
  const pfword::PrivacyParams params(opt.epsilon, opt.adjacency);
  std::vector<pfword::Word> candidates;
  if (opt.mode == "markov" || !opt.chain_path.empty()) {
    if (opt.chain_path.empty())
      throw pfword::DomainError("verify-dp markov mode needs --chain");
    if (opt.n == 0) throw pfword::DomainError("verify-dp needs --n");
    const pfword::MarkovChain chain = pfword::load_chain(opt.chain_path);
    candidates = pfword::oracle::enumerate_feasible_words(chain, opt.n);
  } else {
    if (opt.n == 0) throw pfword::DomainError("verify-dp needs --n");
    pfword::AlphabetPtr alphabet;
    if (!opt.alphabet.empty())
      alphabet = pfword::parse_alphabet(opt.alphabet);
    else if (opt.m >= 2)
      alphabet = synthetic_alphabet(opt.m);
    else
      throw pfword::DomainError("verify-dp needs --alphabet or --m");
    candidates = pfword::oracle::enumerate_words(alphabet, opt.n);
  }
  if (candidates.size() > pfword::oracle::kMaxCandidates)
    throw pfword::CapacityError(
        "verify-dp: instance has " + std::to_string(candidates.size()) +
        " candidate outputs; the oracle caps at " +
        std::to_string(pfword::oracle::kMaxCandidates));

  std::vector<std::pair<pfword::Word, pfword::oracle::ExactPmf>> family;
  family.reserve(candidates.size());
  for (const pfword::Word& w : candidates)
    family.emplace_back(w, pfword::oracle::exact_pf_pmf(w, candidates, params));
  const pfword::oracle::DpCheck check =
      pfword::oracle::verify_dp(family, params.adjacency, params.epsilon);

  nlohmann::json j;
  j["epsilon"] = params.epsilon;
  j["adjacency"] = params.adjacency;
  j["outputs"] = candidates.size();
  j["pairs_checked"] = check.pairs_checked;
  j["max_log_ratio"] = check.max_log_ratio;
  j["zero_probability_asymmetry"] = check.zero_probability_asymmetry;
  j["holds"] = check.holds;
  emit(j);
  return check.holds ? kExitOk : kExitFailedCheck;
}

struct OracleCompareOptions {
  unsigned n = 0;
  unsigned m = 0;
  std::string alphabet;
  double epsilon = 1.0;
  unsigned adjacency = 1;
  std::size_t trials = 200000;
  std::uint64_t seed = 0;
};

int run_oracle_compare(const OracleCompareOptions& opt) {
  if (opt.n == 0) throw pfword::DomainError("oracle-compare needs --n");
  pfword::AlphabetPtr alphabet;
  if (!opt.alphabet.empty())
    alphabet = pfword::parse_alphabet(opt.alphabet);
  else if (opt.m >= 2)
    alphabet = synthetic_alphabet(opt.m);
  else
    throw pfword::DomainError("oracle-compare needs --alphabet or --m");
  const pfword::PrivacyParams params(opt.epsilon, opt.adjacency);
  const unsigned m = static_cast<unsigned>(alphabet->size());

  const std::vector<pfword::Word> words =
      pfword::oracle::enumerate_words(alphabet, opt.n);
  if (words.size() > pfword::oracle::kMaxCandidates)
    throw pfword::CapacityError("oracle-compare: m^n exceeds the oracle cap");
  const pfword::Word sensitive = words.front();

  // quadrature Phi against the literal subset sum, class by class
  const pfword::DistanceSpectrum spectrum = pfword::full_spectrum(opt.n, m);
  std::vector<std::int64_t> utilities;
  utilities.reserve(words.size());
  for (const pfword::Word& w : words)
    utilities.push_back(pfword::utility(sensitive, w));
  double max_rel_err = 0.0;
  for (unsigned ell = 0; ell <= opt.n; ++ell) {
    const double quad = std::exp(pfword::log_phi(spectrum, params, ell));
    std::size_t representative = 0;
    while (representative < words.size() &&
           pfword::hamming_distance(sensitive, words[representative]) != ell)
      ++representative;
    const double literal =
        pfword::oracle::psi_literal(utilities, representative, params);
    max_rel_err = std::max(max_rel_err, std::abs(quad - literal) /
                                            std::max(literal, 1e-300));
  }

  // exact pmf against the shuffle-then-accept simulation
  const pfword::oracle::ExactPmf exact =
      pfword::oracle::exact_pf_pmf(sensitive, words, params);
  pfword::Rng rng(opt.seed);
  const std::vector<double> simulated = pfword::oracle::simulate_pf(
      sensitive, words, params, opt.trials, rng);
  double tv = 0.0;
  for (std::size_t i = 0; i < words.size(); ++i)
    tv += std::abs(exact.probs[i] - simulated[i]);
  tv *= 0.5;

  nlohmann::json j;
  j["n"] = opt.n;
  j["m"] = m;
  j["epsilon"] = params.epsilon;
  j["adjacency"] = params.adjacency;
  j["phi_max_relative_error"] = max_rel_err;
  j["trials"] = opt.trials;
  j["tv_exact_vs_simulated"] = tv;
  emit(j);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  std::locale::global(std::locale::classic());
  CLI::App app{"Word-level differential privacy for symbolic trajectories"};
  app.require_subcommand(1);

  PrivatizeWordOptions pw;
  CLI::App* privatize_word =
      app.add_subcommand("privatize-word", "Privatize a word over an alphabet");
  privatize_word->add_option("--word", pw.word, "Sensitive word, e.g. a,b,c")
      ->required();
  privatize_word
      ->add_option("--alphabet", pw.alphabet, "Alphabet symbols, e.g. a,b,c")
      ->required();
  privatize_word->add_option("--epsilon", pw.epsilon, "Privacy parameter")
      ->required();
  privatize_word->add_option("--adjacency", pw.adjacency, "Adjacency radius b");
  privatize_word->add_option("--seed", pw.seed, "Random seed");
  privatize_word->add_option("--mechanism", pw.mechanism, "pf or em")
      ->check(CLI::IsMember({"pf", "em"}));
  privatize_word->add_flag("--timing", pw.timing, "Include wall time in JSON");

  PrivatizeTrajectoryOptions pt;
  CLI::App* privatize_trajectory = app.add_subcommand(
      "privatize-trajectory", "Privatize a Markov chain trajectory");
  privatize_trajectory->add_option("--chain", pt.chain_path, "Chain JSON file")
      ->required();
  privatize_trajectory
      ->add_option("--word", pt.word, "Sensitive trajectory, e.g. y1,y2,y3")
      ->required();
  privatize_trajectory->add_option("--epsilon", pt.epsilon, "Privacy parameter")
      ->required();
  privatize_trajectory->add_option("--adjacency", pt.adjacency,
                                   "Adjacency radius b");
  privatize_trajectory->add_option("--seed", pt.seed, "Random seed");
  privatize_trajectory->add_option("--mechanism", pt.mechanism, "pf or em")
      ->check(CLI::IsMember({"pf", "em"}));
  privatize_trajectory->add_flag("--timing", pt.timing,
                                 "Include wall time in JSON");

  PmfOptions pm;
  CLI::App* pmf =
      app.add_subcommand("pmf", "Distance-class pmf for a configuration");
  pmf->add_option("--epsilon", pm.epsilon, "Privacy parameter")->required();
  pmf->add_option("--adjacency", pm.adjacency, "Adjacency radius b");
  pmf->add_option("--n", pm.n, "Word length");
  pmf->add_option("--m", pm.m, "Alphabet size");
  pmf->add_option("--alphabet", pm.alphabet, "Alphabet symbols");
  pmf->add_option("--chain", pm.chain_path, "Chain JSON file");
  pmf->add_option("--word", pm.word, "Sensitive word (chain mode)");
  pmf->add_option("--mechanism", pm.mechanism, "pf or em")
      ->check(CLI::IsMember({"pf", "em"}));

  BoundsOptions bo;
  CLI::App* bounds =
      app.add_subcommand("bounds", "Expected-error bounds and tail bounds");
  bounds->add_option("--n", bo.n, "Word length")->required();
  bounds->add_option("--m", bo.m, "Alphabet size")->required();
  bounds->add_option("--epsilon", bo.epsilon, "Privacy parameter")->required();
  bounds->add_option("--adjacency", bo.adjacency, "Adjacency radius b");
  bounds->add_option("--t", bo.t_values, "Tail offsets, e.g. 1,2,3");

  SweepOptions sw;
  CLI::App* sweep =
      app.add_subcommand("sweep", "Error-vs-epsilon sweep with CSV/JSON rows");
  sweep->add_option("--epsilons", sw.epsilons, "Epsilon grid, e.g. 0.1,1,5")
      ->required();
  sweep->add_option("--adjacency", sw.adjacency, "Adjacency radius b");
  sweep->add_option("--trials", sw.trials, "Trials per epsilon per mechanism");
  sweep->add_option("--mechanisms", sw.mechanisms, "pf, em, or pf,em");
  sweep->add_option("--seed", sw.seed, "Master seed");
  sweep->add_option("--chain", sw.chain_path, "Chain JSON file");
  sweep->add_option("--word", sw.word, "Sensitive word");
  sweep->add_option("--alphabet", sw.alphabet, "Alphabet symbols");
  sweep->add_option("--n", sw.n, "Word length (when --word is omitted)");
  sweep->add_option("--m", sw.m, "Alphabet size");
  sweep->add_option("--out", sw.out, "Rows output file");
  sweep->add_option("--format", sw.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  GenChainOptions gc;
  CLI::App* gen_chain =
      app.add_subcommand("gen-chain", "Generate a synthetic Markov chain");
  gen_chain->add_option("--states", gc.states, "Number of states")->required();
  gen_chain->add_option("--density", gc.density, "Edge density in (0,1]");
  gen_chain->add_option("--seed", gc.seed, "Random seed");
  gen_chain->add_option("--out", gc.out, "Chain JSON output file")->required();
  gen_chain->add_option("--max-steps", gc.max_steps,
                        "Reachability horizon (default: number of states)");

  VerifyDpOptions vd;
  CLI::App* verify_dp = app.add_subcommand(
      "verify-dp", "Exhaustively verify the privacy ratio bound");
  verify_dp->add_option("--mode", vd.mode, "word or markov")
      ->check(CLI::IsMember({"word", "markov"}));
  verify_dp->add_option("--n", vd.n, "Word length")->required();
  verify_dp->add_option("--m", vd.m, "Alphabet size");
  verify_dp->add_option("--alphabet", vd.alphabet, "Alphabet symbols");
  verify_dp->add_option("--chain", vd.chain_path, "Chain JSON file");
  verify_dp->add_option("--epsilon", vd.epsilon, "Privacy parameter")
      ->required();
  verify_dp->add_option("--adjacency", vd.adjacency, "Adjacency radius b");

  OracleCompareOptions oc;
  CLI::App* oracle_compare = app.add_subcommand(
      "oracle-compare", "Cross-check quadrature and sampling oracles");
  oracle_compare->add_option("--n", oc.n, "Word length")->required();
  oracle_compare->add_option("--m", oc.m, "Alphabet size");
  oracle_compare->add_option("--alphabet", oc.alphabet, "Alphabet symbols");
  oracle_compare->add_option("--epsilon", oc.epsilon, "Privacy parameter")
      ->required();
  oracle_compare->add_option("--adjacency", oc.adjacency, "Adjacency radius b");
  oracle_compare->add_option("--trials", oc.trials, "Simulation trials");
  oracle_compare->add_option("--seed", oc.seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (privatize_word->parsed()) return run_privatize_word(pw);
    if (privatize_trajectory->parsed()) return run_privatize_trajectory(pt);
    if (pmf->parsed()) return run_pmf(pm);
    if (bounds->parsed()) return run_bounds(bo);
    if (sweep->parsed()) return run_sweep_cmd(sw);
    if (gen_chain->parsed()) return run_gen_chain(gc);
    if (verify_dp->parsed()) return run_verify_dp(vd);
    if (oracle_compare->parsed()) return run_oracle_compare(oc);
  } catch (const pfword::CapacityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const pfword::NumericError& e) {
    std::cerr << "error: " << e.what() << " (estimate " << e.estimate()
              << ", bound " << e.error_bound() << ")\n";
    return kExitNumeric;
  } catch (const pfword::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const pfword::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitOk;
}
