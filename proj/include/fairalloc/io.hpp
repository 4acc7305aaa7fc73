#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "fairalloc/bundle.hpp"
#include "fairalloc/errors.hpp"
#include "fairalloc/instance.hpp"
#include "fairalloc/perturbation.hpp"
#include "fairalloc/theorem_check.hpp"

// JSON schemas. Items and agents are 1-based on the wire; dummy items are
// kept apart under "dummies" keys. Every rational is a "p/q" string.

namespace fairalloc {

using Json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

/// Malformed or schema-violating input.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

inline const Json& require(const Json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  return obj.at(key);
}

inline std::int64_t require_int(const Json& v, const std::string& what) {
  if (!v.is_number_integer()) throw ParseError(what + " must be an integer");
  return v.get<std::int64_t>();
}

inline int parse_id(const std::string& key, int upper, const std::string& what) {
  std::size_t used = 0;
  long value = 0;
  try {
    value = std::stol(key, &used);
  } catch (const std::exception&) {
    throw ParseError(what + " id \"" + key + "\" is not an integer");
  }
  if (used != key.size() || value < 1 || value > upper) throw ParseError(what + " id \"" + key + "\" out of range");
  return static_cast<int>(value - 1);
}

inline Json rational_json(const Rational& r) { return to_string(r); }

inline Rational json_rational(const Json& v, const std::string& what) {
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  if (!v.is_string()) throw ParseError(what + " must be a \"p/q\" string");
  try {
    return parse_rational(v.get<std::string>());
  } catch (const std::exception&) {
    throw ParseError(what + " is not a rational: " + v.get<std::string>());
  }
}

}  // namespace detail

// ---- instances ----------------------------------------------------------

inline Instance instance_from_json(const Json& doc) {
  const int n = static_cast<int>(detail::require_int(detail::require(doc, "agents"), "\"agents\""));
  if (n < 1) throw InstanceError("instance needs at least one agent");
  const Json& rows = detail::require(doc, "utilities");
  if (!rows.is_array()) throw ParseError("\"utilities\" must be an array of rows");
  std::vector<std::vector<std::int64_t>> utilities;
  for (const auto& row : rows) {
    if (!row.is_array()) throw ParseError("utility rows must be arrays");
    auto& out = utilities.emplace_back();
    for (const auto& v : row) {
      if (!v.is_number_integer()) throw InstanceError("utilities must be integers");
      out.push_back(v.get<std::int64_t>());
    }
  }
  if (static_cast<int>(utilities.size()) != n) throw InstanceError("utility matrix must have one row per agent");
  const int m = utilities.empty() ? 0 : static_cast<int>(utilities.front().size());

  const Json& cats = detail::require(doc, "categories");
  if (!cats.is_array()) throw ParseError("\"categories\" must be an array");
  std::vector<Category> categories;
  for (const auto& c : cats) {
    Category cat;
    const Json& items = detail::require(c, "items");
    if (!items.is_array()) throw ParseError("category \"items\" must be an array");
    for (const auto& j : items) {
      const auto id = detail::require_int(j, "item id");
      if (id < 1 || id > m) throw InstanceError("category references unknown item " + std::to_string(id));
      cat.items.push_back(static_cast<int>(id - 1));
    }
    cat.capacity = static_cast<int>(detail::require_int(detail::require(c, "capacity"), "\"capacity\""));
    categories.push_back(std::move(cat));
  }
  return Instance(n, std::move(utilities), std::move(categories));
}

inline Instance load_instance(std::string_view text) { return instance_from_json(detail::parse_json(text)); }

inline Json instance_to_json(const Instance& inst) {
  Json doc;
  doc["agents"] = inst.num_agents();
  doc["utilities"] = inst.utilities();
  Json cats = Json::array();
  for (const auto& c : inst.categories()) {
    Json items = Json::array();
    for (int j : c.items) items.push_back(j + 1);
    cats.push_back({{"items", items}, {"capacity", c.capacity}});
  }
  doc["categories"] = cats;
  return doc;
}

// ---- allocations --------------------------------------------------------

/// {"assignment": {item: agent}, "dummies": {item: agent}}; entries with
/// owner -1 are omitted (used for partial assignments).
inline Json allocation_to_json(const NormalizedInstance& inst, const Allocation& a) {
  Json real = Json::object();
  Json dummy = Json::object();
  for (int j = 0; j < a.num_items(); ++j) {
    if (a.owner(j) < 0) continue;
    (inst.is_dummy(j) ? dummy : real)[std::to_string(j + 1)] = a.owner(j) + 1;
  }
  Json out;
  out["assignment"] = real;
  if (inst.num_items() > inst.num_base_items()) out["dummies"] = dummy;
  return out;
}

/// Items without an entry get owner -1, which every feasibility check rejects.
inline Allocation allocation_from_json(const NormalizedInstance& inst, const Json& doc) {
  const int m = inst.num_items();
  const int n = inst.num_agents();
  std::vector<int> owner(static_cast<std::size_t>(m), -1);
  auto read = [&](const Json& map, bool dummies) {
    if (!map.is_object()) throw ParseError("allocation maps must be objects");
    for (const auto& [key, value] : map.items()) {
      const int j = detail::parse_id(key, m, "item");
      if (inst.is_dummy(j) != dummies) {
        throw ParseError("item " + key + (dummies ? " is not a dummy" : " is a dummy; list it under \"dummies\""));
      }
      const auto agent = detail::require_int(value, "agent id");
      if (agent < 1 || agent > n) throw ParseError("agent id " + std::to_string(agent) + " out of range");
      owner[j] = static_cast<int>(agent - 1);
    }
  };
  read(detail::require(doc, "assignment"), false);
  if (doc.contains("dummies")) read(doc.at("dummies"), true);
  return Allocation(std::move(owner));
}

// ---- weight points ------------------------------------------------------

namespace detail {

inline Json lex_base_json(const std::vector<LexCost>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_string(x.base()));
  return out;
}

inline Json lex_pert_json(const std::vector<LexCost>& v) {
  Json out = Json::array();
  for (const auto& x : v) {
    Json terms = Json::array();
    for (const auto& [rank, coef] : x.pert()) terms.push_back(Json::array({rank, to_string(coef)}));
    out.push_back(std::move(terms));
  }
  return out;
}

}  // namespace detail

// ---- result bundles -----------------------------------------------------

inline Json cost_model_json(const CostModel& model) {
  Json out;
  out["mode"] = to_string(model.mode);
  if (model.mode == EpsilonMode::explicit_) out["alpha"] = to_string(model.eps->alpha);
  return out;
}

inline CostModel cost_model_from_json(const NormalizedInstance& inst, const Json& doc) {
  const Json& mode = detail::require(doc, "mode");
  if (!mode.is_string()) throw ParseError("epsilon mode must be a string");
  const auto name = mode.get<std::string>();
  if (name == "lex") return CostModel::lex();
  if (name == "none") return CostModel::unperturbed();
  if (name == "explicit") {
    const Rational alpha = detail::json_rational(detail::require(doc, "alpha"), "\"alpha\"");
    try {
      return CostModel::explicit_with(epsilon_explicit(inst, alpha));
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what());
    }
  }
  throw ParseError("unknown epsilon mode \"" + name + "\"");
}

inline Json certificates_json(const Certificates& cert) {
  auto flags = [](const std::vector<bool>& v) {
    Json out = Json::array();
    for (bool b : v) out.push_back(b);
    return out;
  };
  Json out;
  out["feasible"] = flags(cert.feasible);
  out["envy_free_for_owner"] = flags(cert.envy_free_for_owner);
  out["optimal_at_t_star"] = flags(cert.optimal_at_t_star);
  out["pareto_optimal"] = flags(cert.pareto_optimal);
  out["pareto_method"] = cert.pareto_method;
  out["agree_outside_realloc"] = cert.agree_outside_realloc;
  out["realloc_size"] = cert.realloc_size;
  out["realloc_bound"] = cert.realloc_bound;
  out["realloc_within_bound"] = cert.realloc_within_bound;
  out["all_pass"] = cert.all_pass();
  return out;
}

inline Json bundle_to_json(const NormalizedInstance& inst, const ResultBundle& bundle) {
  Json out;
  out["format"] = kFormatVersion;
  out["mode"] = to_string(bundle.mode);
  out["heuristic"] = bundle.heuristic;
  out["epsilon"] = cost_model_json(bundle.model);
  out["t_star"] = detail::lex_base_json(bundle.t_star.t);
  out["t_star_perturbation"] = detail::lex_pert_json(bundle.t_star.t);
  out["t_prime"] = detail::lex_base_json(bundle.t_star.t_prime);
  Json allocations = Json::object();
  for (std::size_t i = 0; i < bundle.per_agent.size(); ++i)
    allocations[std::to_string(i + 1)] = allocation_to_json(inst, bundle.per_agent[i]);
  out["allocations"] = allocations;
  out["common"] = allocation_to_json(inst, Allocation(bundle.common));
  Json real = Json::array();
  Json dummy_moves = Json::array();
  for (int j : bundle.realloc) (inst.is_dummy(j) ? dummy_moves : real).push_back(j + 1);
  out["reallocation_set"] = real;
  Json dummies;
  Json ids = Json::array();
  for (int j = inst.num_base_items(); j < inst.num_items(); ++j) ids.push_back(j + 1);
  dummies["items"] = ids;
  dummies["reallocation_set"] = dummy_moves;
  out["dummies"] = dummies;
  out["certificates"] = certificates_json(bundle.certificates);
  out["stats"] = {{"hyperplanes", bundle.stats.hyperplanes},
                  {"vertices_total", bundle.stats.vertices_total},
                  {"vertices_scanned", bundle.stats.vertices_scanned},
                  {"max_free_items", bundle.stats.max_free_items}};
  return out;
}

/// Reads back a bundle written by bundle_to_json. Certificates are not read;
/// callers recompute them.
inline ResultBundle bundle_from_json(const NormalizedInstance& inst, const Json& doc) {
  const Json& format = detail::require(doc, "format");
  if (!format.is_number_integer() || format.get<int>() != kFormatVersion) {
    throw ParseError("unsupported result format");
  }
  const int n = inst.num_agents();
  ResultBundle bundle;
  const auto mode = detail::require(doc, "mode").get<std::string>();
  if (mode == "arrangement") bundle.mode = SearchMode::arrangement;
  else if (mode == "sweep2") bundle.mode = SearchMode::sweep2;
  else if (mode == "grid") bundle.mode = SearchMode::grid;
  else throw ParseError("unknown mode \"" + mode + "\"");
  if (doc.contains("heuristic")) bundle.heuristic = doc.at("heuristic").get<bool>();
  bundle.model = cost_model_from_json(inst, detail::require(doc, "epsilon"));

  const Json& t_base = detail::require(doc, "t_star");
  if (!t_base.is_array() || static_cast<int>(t_base.size()) != n) throw ParseError("\"t_star\" needs one entry per agent");
  std::vector<LexCost> t;
  for (int i = 0; i < n; ++i) {
    std::vector<std::pair<std::int32_t, Rational>> terms;
    if (doc.contains("t_star_perturbation")) {
      const Json& pert = doc.at("t_star_perturbation");
      if (!pert.is_array() || static_cast<int>(pert.size()) != n) throw ParseError("\"t_star_perturbation\" shape");
      for (const auto& term : pert[i]) {
        if (!term.is_array() || term.size() != 2) throw ParseError("perturbation terms are [rank, \"p/q\"] pairs");
        terms.emplace_back(static_cast<std::int32_t>(detail::require_int(term[0], "rank")),
                           detail::json_rational(term[1], "perturbation coefficient"));
      }
    }
    try {
      t.emplace_back(detail::json_rational(t_base[i], "t_star entry"), std::move(terms));
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what());
    }
  }
  try {
    bundle.t_star = shrink_weights(std::move(t), compute_K(inst), n);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("t_star: ") + e.what());
  }

  const Json& allocations = detail::require(doc, "allocations");
  if (!allocations.is_object()) throw ParseError("\"allocations\" must be an object");
  for (int i = 0; i < n; ++i) {
    const auto key = std::to_string(i + 1);
    if (!allocations.contains(key)) throw ParseError("missing allocation for agent " + key);
    bundle.per_agent.push_back(allocation_from_json(inst, allocations.at(key)));
  }
  std::vector<int> realloc;
  for (const auto& j : detail::require(doc, "reallocation_set")) {
    realloc.push_back(detail::parse_id(std::to_string(detail::require_int(j, "item id")), inst.num_items(), "item"));
  }
  if (doc.contains("dummies") && doc.at("dummies").contains("reallocation_set")) {
    for (const auto& j : doc.at("dummies").at("reallocation_set"))
      realloc.push_back(detail::parse_id(std::to_string(detail::require_int(j, "item id")), inst.num_items(), "item"));
  }
  std::sort(realloc.begin(), realloc.end());
  realloc.erase(std::unique(realloc.begin(), realloc.end()), realloc.end());
  bundle.realloc = std::move(realloc);
  bundle.common = common_assignment(bundle.per_agent, bundle.realloc, inst.num_items());
  if (doc.contains("stats")) {
    const Json& s = doc.at("stats");
    bundle.stats.hyperplanes = s.value("hyperplanes", std::size_t{0});
    bundle.stats.vertices_total = s.value("vertices_total", std::size_t{0});
    bundle.stats.vertices_scanned = s.value("vertices_scanned", std::size_t{0});
    bundle.stats.max_free_items = s.value("max_free_items", std::size_t{0});
  }
  return bundle;
}

// ---- reports ------------------------------------------------------------

inline Json verdict_json(const NormalizedInstance& inst, const ClauseVerdict& v) {
  Json out;
  out["check"] = v.clause;
  if (v.agent >= 0) out["agent"] = v.agent + 1;
  out["pass"] = v.pass;
  if (!v.detail.empty()) out["detail"] = v.detail;
  if (v.witness) out["witness"] = allocation_to_json(inst, *v.witness);
  return out;
}

inline Json oracle_report_json(const NormalizedInstance& inst, const OracleReport& report) {
  Json out;
  out["format"] = kFormatVersion;
  out["feasible_count"] = report.feasible_count.str();
  Json pareto = Json::array();
  for (const auto& a : report.pareto_set) pareto.push_back(allocation_to_json(inst, a));
  out["pareto_set"] = pareto;
  Json witnesses = Json::array();
  for (const auto& w : report.witnesses) {
    Json entry;
    entry["t"] = w.description;
    Json per_agent = Json::object();
    for (std::size_t i = 0; i < w.per_agent.size(); ++i)
      per_agent[std::to_string(i + 1)] = allocation_to_json(inst, w.per_agent[i]);
    entry["allocations"] = per_agent;
    Json realloc = Json::array();
    for (int j : w.realloc) realloc.push_back(j + 1);
    entry["reallocation_set"] = realloc;
    witnesses.push_back(std::move(entry));
  }
  out["theorem1_witnesses"] = witnesses;
  out["witness_search_complete"] = report.witness_search_complete;
  Json verdicts = Json::array();
  for (const auto& v : report.verdicts) verdicts.push_back(verdict_json(inst, v));
  out["verdicts"] = verdicts;
  out["pass"] = report.all_pass();
  return out;
}

/// Solver-side certificates as a flat list of named checks.
inline std::vector<ClauseVerdict> certificate_verdicts(const Certificates& cert) {
  std::vector<ClauseVerdict> out;
  auto per_agent = [&](const char* name, const std::vector<bool>& flags) {
    for (std::size_t i = 0; i < flags.size(); ++i) {
      ClauseVerdict v;
      v.clause = name;
      v.agent = static_cast<int>(i);
      v.pass = flags[i];
      out.push_back(std::move(v));
    }
  };
  per_agent("feasible", cert.feasible);
  per_agent("envy_free_for_owner", cert.envy_free_for_owner);
  per_agent("optimal_at_t_star", cert.optimal_at_t_star);
  per_agent("pareto_optimal", cert.pareto_optimal);
  for (auto& v : out)
    if (v.clause == "pareto_optimal") v.detail = cert.pareto_method;
  ClauseVerdict agree;
  agree.clause = "common_outside_realloc";
  agree.pass = cert.agree_outside_realloc;
  out.push_back(std::move(agree));
  ClauseVerdict bound;
  bound.clause = "realloc_bound";
  bound.pass = cert.realloc_within_bound;
  bound.detail = "|R| = " + std::to_string(cert.realloc_size) + ", bound " + std::to_string(cert.realloc_bound);
  out.push_back(std::move(bound));
  return out;
}

inline std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

}  // namespace fairalloc
