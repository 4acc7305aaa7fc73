#pragma once

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fairalloc/io.hpp"
#include "fairalloc/search.hpp"
#include "fairalloc/theorem_check.hpp"

namespace fairalloc::cli {

enum class Command { solve, verify, oracle };

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsage = 2 };

struct RunConfig {
  Command command = Command::solve;
  std::string input;
  std::string result;  // verify: bundle to check; oracle: optional --check
  SearchMode mode = SearchMode::arrangement;
  EpsilonMode epsilon = EpsilonMode::lex;
  std::optional<std::string> alpha;
  std::int64_t max_cycles = kDefaultMaxCycles;
  int grid_depth = 6;
  int threads = 1;
  std::string output;  // empty: stdout
  int verbosity = 0;
  std::int64_t enumeration_limit = kDefaultEnumerationLimit;
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_output(const RunConfig& config, const std::string& text, std::ostream& out) {
  if (config.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(config.output, std::ios::binary);
  if (!file) throw ParseError("cannot write " + config.output);
  file << text;
}

inline std::string t_summary(const WeightPoint& w) {
  std::string s = "(";
  for (std::size_t i = 0; i < w.t.size(); ++i) {
    if (i) s += ", ";
    s += to_string(w.t[i].base());
    if (!w.t[i].is_rational()) s += (w.t[i] - LexCost(w.t[i].base())).sign() > 0 ? "+eps" : "-eps";
  }
  return s + ")";
}

inline int run_solve(const RunConfig& config, const NormalizedInstance& inst, std::ostream& out, std::ostream& err) {
  SearchOptions options;
  options.epsilon = config.epsilon;
  if (config.alpha) options.alpha = parse_rational(*config.alpha);
  options.max_cycles = config.max_cycles;
  options.grid_depth = config.grid_depth;
  options.threads = config.threads;
  options.enumeration_limit = config.enumeration_limit;

  std::optional<ResultBundle> bundle;
  switch (config.mode) {
    case SearchMode::arrangement: bundle = find_witness(inst, options); break;
    case SearchMode::sweep2: bundle = two_agent_sweep(inst, options); break;
    case SearchMode::grid: bundle = grid_refinement_search(inst, config.grid_depth, options); break;
  }
  if (!bundle) {
    err << "grid search found no witness within depth " << config.grid_depth << "\n";
    return kCheckFailed;
  }
  write_output(config, dump(bundle_to_json(inst, *bundle)), out);

  err << "t* = " << t_summary(bundle->t_star) << "  |R| = " << bundle->realloc.size() << " (bound "
      << bundle->certificates.realloc_bound << ")\n";
  for (int i = 0; i < inst.num_agents(); ++i) {
    err << "agent " << i + 1 << ": "
        << (bundle->certificates.envy_free_for_owner[i] ? "envy-free" : "ENVIOUS") << " in its allocation\n";
  }
  if (bundle->heuristic) err << "note: grid mode is a heuristic\n";
  if (config.verbosity > 0) {
    err << "hyperplanes " << bundle->stats.hyperplanes << ", points scanned " << bundle->stats.vertices_scanned
        << " of " << bundle->stats.vertices_total << ", max free items " << bundle->stats.max_free_items << "\n";
  }
  if (!bundle->certificates.all_pass()) {
    err << "certificate check failed\n";
    return kCheckFailed;
  }
  return kOk;
}

inline int run_verify(const RunConfig& config, const NormalizedInstance& inst, std::ostream& out, std::ostream& err) {
  const ResultBundle bundle = bundle_from_json(inst, fairalloc::detail::parse_json(read_file(config.result)));
  const Certificates cert = certify_bundle(inst, bundle, config.enumeration_limit);
  std::vector<ClauseVerdict> checks = certificate_verdicts(cert);
  if (count_feasible(inst.padded) <= config.enumeration_limit) {
    // attach dominating witnesses from the exhaustive check
    const OracleReport truth = check_theorem1(inst, bundle, config.enumeration_limit);
    for (const auto& v : truth.verdicts) {
      if (v.clause != "pareto_optimal" || !v.witness) continue;
      for (auto& c : checks)
        if (c.clause == v.clause && c.agent == v.agent) c.witness = v.witness;
    }
  }
  Json doc;
  doc["format"] = kFormatVersion;
  Json list = Json::array();
  bool pass = true;
  for (const auto& c : checks) {
    list.push_back(verdict_json(inst, c));
    pass = pass && c.pass;
  }
  doc["checks"] = list;
  doc["pass"] = pass;
  write_output(config, dump(doc), out);
  for (const auto& c : checks) {
    if (c.pass) continue;
    err << "FAILED " << c.clause;
    if (c.agent >= 0) err << " (agent " << c.agent + 1 << ")";
    if (!c.detail.empty()) err << ": " << c.detail;
    err << "\n";
  }
  return pass ? kOk : kCheckFailed;
}

inline int run_oracle(const RunConfig& config, const NormalizedInstance& inst, std::ostream& out, std::ostream& err) {
  OracleReport report = oracle_report(inst, config.enumeration_limit);
  if (!config.result.empty()) {
    const ResultBundle bundle = bundle_from_json(inst, fairalloc::detail::parse_json(read_file(config.result)));
    auto checked = check_theorem1(inst, bundle, config.enumeration_limit);
    for (auto& v : checked.verdicts) report.verdicts.push_back(std::move(v));
  }
  write_output(config, dump(oracle_report_json(inst, report)), out);
  for (const auto* v : report.failures()) {
    err << "FAILED " << v->clause;
    if (v->agent >= 0) err << " (agent " << v->agent + 1 << ")";
    if (!v->detail.empty()) err << ": " << v->detail;
    err << "\n";
  }
  if (config.verbosity > 0) {
    err << report.feasible_count << " feasible allocations, " << report.pareto_set.size() << " Pareto-optimal\n";
  }
  return report.all_pass() ? kOk : kCheckFailed;
}

}  // namespace detail

/// Exit codes: 0 success, 1 a check failed (or no witness), 2 usage, parse
/// or instance error.
inline int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const NormalizedInstance inst = normalize(load_instance(detail::read_file(config.input)));
    switch (config.command) {
      case Command::solve: return detail::run_solve(config, inst, out, err);
      case Command::verify: return detail::run_verify(config, inst, out, err);
      case Command::oracle: return detail::run_oracle(config, inst, out, err);
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const InstanceError& e) {
    err << "error: invalid instance: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const LimitExceeded& e) {
    err << "error: limit exceeded: " << e.what() << "\n";
    return kCheckFailed;
  } catch (const InvariantViolation& e) {
    err << "internal error: " << e.what() << "\n";
    return kCheckFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kCheckFailed;
  }
  return kUsage;
}

/// Parses argv into a RunConfig and runs it.
inline int main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Fair allocation under category constraints: per-agent envy-free Pareto optima"};
  app.require_subcommand(1);
  RunConfig config;
  try {
    config.enumeration_limit = enumeration_limit_from_env();
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-i,--input", config.input, "instance JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--output", config.output, "write JSON here instead of stdout");
    sub->add_option("--enum-limit", config.enumeration_limit, "feasible-allocation enumeration limit")
        ->check(CLI::PositiveNumber);
    sub->add_flag("-v,--verbose", config.verbosity, "more diagnostics on stderr");
  };

  const std::map<std::string, SearchMode> modes{
      {"arrangement", SearchMode::arrangement}, {"sweep2", SearchMode::sweep2}, {"grid", SearchMode::grid}};
  const std::map<std::string, EpsilonMode> eps_modes{{"lex", EpsilonMode::lex},
                                                     {"explicit", EpsilonMode::explicit_}};
  std::string alpha;

  auto* solve = app.add_subcommand("solve", "find a witness weight point and per-agent allocations");
  add_common(solve);
  solve->add_option("--mode", config.mode, "arrangement | sweep2 | grid")
      ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
  solve->add_option("--epsilon", config.epsilon, "lex | explicit")
      ->transform(CLI::CheckedTransformer(eps_modes, CLI::ignore_case));
  auto* alpha_opt = solve->add_option("--alpha", alpha, "explicit-mode alpha as p/q");
  solve->add_option("--max-cycles", config.max_cycles, "cap on enumerated cycles")->check(CLI::PositiveNumber);
  solve->add_option("--grid-depth", config.grid_depth, "grid refinement depth")->check(CLI::NonNegativeNumber);
  solve->add_option("--threads", config.threads, "worker threads for vertex scanning")->check(CLI::PositiveNumber);

  auto* verify = app.add_subcommand("verify", "recheck a result bundle against an instance");
  add_common(verify);
  verify->add_option("-r,--result", config.result, "result JSON")->required()->check(CLI::ExistingFile);

  auto* oracle = app.add_subcommand("oracle", "exhaustive ground truth for small instances");
  add_common(oracle);
  oracle->add_option("--check", config.result, "result JSON to check")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  if (solve->parsed()) {
    config.command = Command::solve;
    if (alpha_opt->count() > 0) {
      if (config.epsilon != EpsilonMode::explicit_) {
        err << "error: --alpha requires --epsilon explicit\n";
        return kUsage;
      }
      config.alpha = alpha;
    }
  } else if (verify->parsed()) {
    config.command = Command::verify;
  } else {
    config.command = Command::oracle;
  }
  return run(config, out, err);
}

}  // namespace fairalloc::cli
