#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "fairalloc/assignment.hpp"
#include "fairalloc/fairness.hpp"
#include "fairalloc/instance.hpp"
#include "fairalloc/oracle.hpp"
#include "fairalloc/perturbation.hpp"

namespace fairalloc {

enum class SearchMode { arrangement, sweep2, grid };

inline std::string to_string(SearchMode mode) {
  switch (mode) {
    case SearchMode::arrangement: return "arrangement";
    case SearchMode::sweep2: return "sweep2";
    case SearchMode::grid: return "grid";
  }
  return "?";
}

struct SearchStats {
  std::size_t hyperplanes = 0;
  std::size_t vertices_total = 0;
  std::size_t vertices_scanned = 0;
  std::size_t max_free_items = 0;
};

struct Certificates {
  std::vector<bool> feasible;
  std::vector<bool> envy_free_for_owner;
  std::vector<bool> optimal_at_t_star;
  std::vector<bool> pareto_optimal;
  std::string pareto_method;  // "bruteforce" or "weighted-optimum"
  bool agree_outside_realloc = false;
  std::size_t realloc_size = 0;
  std::size_t realloc_bound = 0;
  bool realloc_within_bound = false;

  bool all_pass() const {
    auto all = [](const std::vector<bool>& v) {
      return std::all_of(v.begin(), v.end(), [](bool b) { return b; });
    };
    return all(feasible) && all(envy_free_for_owner) && all(optimal_at_t_star) && all(pareto_optimal) &&
           agree_outside_realloc && realloc_within_bound;
  }
};

/// Witness weight point with one optimal allocation per agent, each
/// envy-free for that agent, all agreeing outside `realloc`.
struct ResultBundle {
  SearchMode mode = SearchMode::arrangement;
  CostModel model;
  bool heuristic = false;
  WeightPoint t_star;
  std::vector<Allocation> per_agent;  // per_agent[i] is envy-free for agent i
  std::vector<int> realloc;           // sorted item ids, dummies included
  std::vector<int> common;            // owner per item, -1 for items in realloc
  Certificates certificates;
  SearchStats stats;
};

inline std::vector<int> common_assignment(const std::vector<Allocation>& allocs, const std::vector<int>& realloc,
                                          int num_items) {
  std::vector<int> common(static_cast<std::size_t>(num_items), -1);
  std::vector<bool> moving(static_cast<std::size_t>(num_items), false);
  for (int j : realloc) moving[j] = true;
  for (int j = 0; j < num_items; ++j)
    if (!moving[j] && !allocs.empty()) common[j] = allocs.front().owner(j);
  return common;
}

/// Recomputes every guarantee of a bundle from scratch.
inline Certificates certify_bundle(const NormalizedInstance& inst, const ResultBundle& bundle,
                                   std::int64_t enumeration_limit = kDefaultEnumerationLimit) {
  const Instance& p = inst.padded;
  const int n = p.num_agents();
  Certificates cert;
  cert.feasible.assign(static_cast<std::size_t>(n), false);
  cert.envy_free_for_owner.assign(static_cast<std::size_t>(n), false);
  cert.optimal_at_t_star.assign(static_cast<std::size_t>(n), false);
  cert.pareto_optimal.assign(static_cast<std::size_t>(n), false);
  if (static_cast<int>(bundle.per_agent.size()) != n) return cert;

  const SlotGraph g = build_slot_graph(inst);
  std::vector<LexCost> costs;
  try {
    costs = edge_costs(inst, g, bundle.t_star, bundle.model);
  } catch (const std::exception&) {
    costs.clear();
  }
  for (int i = 0; i < n; ++i) {
    const Allocation& a = bundle.per_agent[i];
    try {
      cert.feasible[i] = is_feasible(p, a);
    } catch (const InstanceError&) {
      cert.feasible[i] = false;
    }
    if (!cert.feasible[i]) continue;
    cert.envy_free_for_owner[i] = is_envy_free_for(p, a, i);
    if (!costs.empty()) cert.optimal_at_t_star[i] = verify_optimality<LexCost>(g, costs, a);
  }

  if (count_feasible(p) <= enumeration_limit) {
    cert.pareto_method = "bruteforce";
    const ParetoOracle oracle(p, enumeration_limit);
    for (int i = 0; i < n; ++i) cert.pareto_optimal[i] = cert.feasible[i] && oracle.is_pareto_optimal(bundle.per_agent[i]);
  } else {
    // an optimum of a positively weighted utilitarian objective is Pareto-optimal
    cert.pareto_method = "weighted-optimum";
    cert.pareto_optimal = cert.optimal_at_t_star;
  }

  const bool all_feasible = std::all_of(cert.feasible.begin(), cert.feasible.end(), [](bool b) { return b; });
  if (all_feasible) {
    const auto moving = reallocation_set(bundle.per_agent);
    cert.agree_outside_realloc = std::includes(bundle.realloc.begin(), bundle.realloc.end(), moving.begin(), moving.end());
  }
  cert.realloc_size = bundle.realloc.size();
  cert.realloc_bound = static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1);
  cert.realloc_within_bound = cert.realloc_size <= cert.realloc_bound;
  return cert;
}

}  // namespace fairalloc
