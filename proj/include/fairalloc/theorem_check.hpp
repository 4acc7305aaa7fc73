#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fairalloc/bundle.hpp"
#include "fairalloc/fairness.hpp"
#include "fairalloc/instance.hpp"
#include "fairalloc/oracle.hpp"

namespace fairalloc {

struct ClauseVerdict {
  std::string clause;
  int agent = -1;  // -1 when the clause is not per agent
  bool pass = false;
  std::string detail;
  std::optional<Allocation> witness;  // dominating allocation, when one exists
};

/// Per-agent allocations found by exhaustive search over the Pareto set,
/// with no weight point attached.
struct ExhaustiveWitness {
  std::string description;
  std::vector<Allocation> per_agent;
  std::vector<int> realloc;
};

struct OracleReport {
  BigInt feasible_count = 0;
  std::vector<Allocation> pareto_set;
  std::vector<ExhaustiveWitness> witnesses;
  bool witness_search_complete = true;
  std::vector<ClauseVerdict> verdicts;

  bool all_pass() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const ClauseVerdict& v) { return v.pass; });
  }
  std::vector<const ClauseVerdict*> failures() const {
    std::vector<const ClauseVerdict*> out;
    for (const auto& v : verdicts)
      if (!v.pass) out.push_back(&v);
    return out;
  }
};

inline constexpr std::int64_t kDefaultWitnessSearchNodes = 5'000'000;

/// Depth-first search for one Pareto-optimal allocation per agent, envy-free
/// for that agent, with at most n(n-1) items moving between them. Agents
/// are filled in order; a branch is cut once the moving set exceeds the bound.
inline std::optional<ExhaustiveWitness> search_exhaustive_witness(const Instance& inst,
                                                                  const std::vector<Allocation>& pareto_set,
                                                                  std::int64_t node_limit, bool& complete) {
  const int n = inst.num_agents();
  const int m = inst.num_items();
  const std::size_t bound = static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1);
  complete = true;
  std::vector<std::vector<const Allocation*>> candidates(static_cast<std::size_t>(n));
  for (const auto& a : pareto_set) {
    const EnvyGraph envy(inst, a);
    for (int i = 0; i < n; ++i)
      if (envy.out_degree(i) == 0) candidates[i].push_back(&a);
  }
  for (const auto& c : candidates)
    if (c.empty()) return std::nullopt;

  std::vector<const Allocation*> chosen(static_cast<std::size_t>(n), nullptr);
  std::int64_t nodes = 0;
  // moved[j]: item j differs from chosen[0] in some allocation chosen so far
  auto rec = [&](auto&& self, int agent, const std::vector<bool>& moved) -> bool {
    if (agent == n) return true;
    for (const Allocation* a : candidates[agent]) {
      if (++nodes > node_limit) {
        complete = false;
        return false;
      }
      std::vector<bool> next = moved;
      std::size_t count = 0;
      for (int j = 0; j < m; ++j) {
        if (agent > 0 && chosen[0]->owner(j) != a->owner(j)) next[j] = true;
        count += next[j] ? 1 : 0;
      }
      if (count > bound) continue;
      chosen[agent] = a;
      if (self(self, agent + 1, next)) return true;
      if (!complete) return false;
    }
    return false;
  };
  if (!rec(rec, 0, std::vector<bool>(static_cast<std::size_t>(m), false))) return std::nullopt;

  ExhaustiveWitness w;
  w.description = "exhaustive search over the Pareto set";
  for (const Allocation* a : chosen) w.per_agent.push_back(*a);
  w.realloc = reallocation_set(w.per_agent);
  return w;
}

/// Ground truth for a (normalized) instance: feasible count, Pareto set and
/// an exhaustive witness for the per-agent reallocation property.
inline OracleReport oracle_report(const NormalizedInstance& inst, std::int64_t limit = kDefaultEnumerationLimit,
                                  std::int64_t node_limit = kDefaultWitnessSearchNodes) {
  const Instance& p = inst.padded;
  OracleReport report;
  report.feasible_count = count_feasible(p);
  const ParetoOracle oracle(p, limit);
  report.pareto_set = oracle.frontier();

  ClauseVerdict nonempty;
  nonempty.clause = "pareto_set_nonempty";
  nonempty.pass = report.feasible_count == 0 || !report.pareto_set.empty();
  nonempty.detail = std::to_string(report.pareto_set.size()) + " Pareto-optimal allocations";
  report.verdicts.push_back(std::move(nonempty));

  bool complete = true;
  auto witness = search_exhaustive_witness(p, report.pareto_set, node_limit, complete);
  report.witness_search_complete = complete;
  ClauseVerdict exists;
  exists.clause = "reallocation_witness_exists";
  exists.pass = witness.has_value() || !complete;
  exists.detail = witness ? "found, |R| = " + std::to_string(witness->realloc.size())
                          : (complete ? "no witness exists" : "search budget exhausted");
  report.verdicts.push_back(std::move(exists));
  if (witness) report.witnesses.push_back(std::move(*witness));
  return report;
}

/// Checks a bundle clause by clause against exhaustive ground truth. Every
/// per-agent allocation must be feasible, in the Pareto set and envy-free for
/// its agent; all must agree outside the declared reallocation set, whose
/// size must not exceed n(n-1).
inline OracleReport check_theorem1(const NormalizedInstance& inst, const ResultBundle& bundle,
                                   std::int64_t limit = kDefaultEnumerationLimit) {
  const Instance& p = inst.padded;
  const int n = p.num_agents();
  const int m = p.num_items();
  OracleReport report;
  report.feasible_count = count_feasible(p);
  const ParetoOracle oracle(p, limit);
  report.pareto_set = oracle.frontier();

  ClauseVerdict count;
  count.clause = "one_allocation_per_agent";
  count.pass = static_cast<int>(bundle.per_agent.size()) == n;
  count.detail = std::to_string(bundle.per_agent.size()) + " allocations for " + std::to_string(n) + " agents";
  report.verdicts.push_back(count);
  if (!count.pass) return report;

  std::vector<bool> feasible_of(static_cast<std::size_t>(n), false);
  for (int i = 0; i < n; ++i) {
    const Allocation& a = bundle.per_agent[i];
    ClauseVerdict feasible;
    feasible.clause = "feasible";
    feasible.agent = i;
    try {
      feasible.pass = is_feasible(p, a);
    } catch (const InstanceError& e) {
      feasible.detail = e.what();
    }
    if (!feasible.pass && feasible.detail.empty()) feasible.detail = "category capacity violated";
    feasible_of[i] = feasible.pass;
    report.verdicts.push_back(std::move(feasible));
  }

  for (int i = 0; i < n; ++i) {
    const Allocation& a = bundle.per_agent[i];
    const bool usable = feasible_of[i];

    ClauseVerdict po;
    po.clause = "pareto_optimal";
    po.agent = i;
    if (usable) {
      po.witness = oracle.dominating(a);
      po.pass = !po.witness.has_value();
      if (po.witness) po.detail = "dominated";
    } else {
      po.detail = "allocation is not feasible";
    }
    report.verdicts.push_back(std::move(po));

    ClauseVerdict ef;
    ef.clause = "envy_free_for_owner";
    ef.agent = i;
    if (usable) {
      const EnvyGraph envy(p, a);
      ef.pass = envy.out_degree(i) == 0;
      for (int other = 0; other < n && !ef.pass; ++other) {
        if (envy.envies(i, other)) {
          ef.detail = "agent " + std::to_string(i + 1) + " envies agent " + std::to_string(other + 1);
          break;
        }
      }
    } else {
      ef.detail = "allocation is not feasible";
    }
    report.verdicts.push_back(std::move(ef));
  }

  const bool all_feasible = std::all_of(feasible_of.begin(), feasible_of.end(), [](bool b) { return b; });
  ClauseVerdict agree;
  agree.clause = "common_outside_realloc";
  if (all_feasible) {
    agree.pass = true;
    std::vector<bool> declared(static_cast<std::size_t>(m), false);
    for (int j : bundle.realloc)
      if (j >= 0 && j < m) declared[j] = true;
    for (int j : reallocation_set(bundle.per_agent)) {
      if (!declared[j]) {
        agree.pass = false;
        agree.detail = "item " + std::to_string(j + 1) + " moves but is outside the reallocation set";
        break;
      }
    }
  } else {
    agree.detail = "some allocation is not feasible";
  }
  report.verdicts.push_back(std::move(agree));

  ClauseVerdict bound;
  bound.clause = "realloc_bound";
  const std::size_t limit_size = static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1);
  bound.pass = bundle.realloc.size() <= limit_size;
  bound.detail = "|R| = " + std::to_string(bundle.realloc.size()) + ", bound " + std::to_string(limit_size);
  report.verdicts.push_back(std::move(bound));
  return report;
}

}  // namespace fairalloc
