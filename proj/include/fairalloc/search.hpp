#pragma once

#include <algorithm>
#include <exception>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "fairalloc/arrangement.hpp"
#include "fairalloc/assignment.hpp"
#include "fairalloc/bundle.hpp"
#include "fairalloc/cycles.hpp"
#include "fairalloc/fairness.hpp"
#include "fairalloc/packed_lex.hpp"
#include "fairalloc/perturbation.hpp"

namespace fairalloc {

struct SearchOptions {
  EpsilonMode epsilon = EpsilonMode::lex;
  std::optional<Rational> alpha;  // explicit mode only; defaults to 1/(K n^2 m + 1)
  std::int64_t max_cycles = kDefaultMaxCycles;
  int grid_depth = 6;
  int threads = 1;
  std::int64_t enumeration_limit = kDefaultEnumerationLimit;
};

inline CostModel make_cost_model(const NormalizedInstance& inst, const SearchOptions& options) {
  switch (options.epsilon) {
    case EpsilonMode::lex: return CostModel::lex();
    case EpsilonMode::none: return CostModel::unperturbed();
    case EpsilonMode::explicit_:
      return CostModel::explicit_with(epsilon_explicit(inst, options.alpha.value_or(default_alpha(inst))));
  }
  return CostModel::lex();
}

/// Optimal face of P(t) at one weight point and which agents it serves.
struct PointEvaluation {
  WeightPoint point;
  std::vector<Allocation> optima;
  std::size_t free_items = 0;
  std::vector<int> envy_free_choice;  // per agent: index into optima, or -1

  bool covers_all() const {
    return std::none_of(envy_free_choice.begin(), envy_free_choice.end(), [](int k) { return k < 0; });
  }
};

namespace detail {

template <class Cost>
void fill_face(const SlotGraph& g, std::span<const Cost> costs, PointEvaluation& out) {
  const auto report = probe_face<Cost>(g, costs);
  out.free_items = report.free_items.size();
  out.optima = enumerate_optima<Cost>(g, costs, report);
}

}  // namespace detail

inline PointEvaluation evaluate_point(const NormalizedInstance& inst, const SlotGraph& g, const WeightPoint& w,
                                      const CostModel& model) {
  PointEvaluation out;
  out.point = w;
  const auto costs = edge_costs(inst, g, w, model);
  if (auto packed = pack_costs(costs)) {
    detail::fill_face<PackedLex>(g, *packed, out);
  } else {
    detail::fill_face<LexCost>(g, costs, out);
  }
  const int n = inst.num_agents();
  out.envy_free_choice.assign(static_cast<std::size_t>(n), -1);
  for (std::size_t k = 0; k < out.optima.size(); ++k) {
    const EnvyGraph envy(inst.padded, out.optima[k]);
    for (int i = 0; i < n; ++i)
      if (out.envy_free_choice[i] < 0 && envy.out_degree(i) == 0) out.envy_free_choice[i] = static_cast<int>(k);
  }
  return out;
}

inline ResultBundle make_bundle(const NormalizedInstance& inst, const PointEvaluation& eval, const CostModel& model,
                                SearchMode mode, const SearchStats& stats, std::int64_t enumeration_limit) {
  ResultBundle bundle;
  bundle.mode = mode;
  bundle.model = model;
  bundle.heuristic = mode == SearchMode::grid;
  bundle.t_star = eval.point;
  for (int k : eval.envy_free_choice) bundle.per_agent.push_back(eval.optima[k]);
  bundle.realloc = reallocation_set(bundle.per_agent);
  bundle.common = common_assignment(bundle.per_agent, bundle.realloc, inst.num_items());
  bundle.stats = stats;
  bundle.certificates = certify_bundle(inst, bundle, enumeration_limit);
  return bundle;
}

/// Scans `points` in order and returns the first that covers every agent.
/// With threads > 1 blocks of points are evaluated concurrently; the winner
/// is still the first covering point in scan order.
inline std::optional<ResultBundle> scan_points(const NormalizedInstance& inst, const std::vector<WeightPoint>& points,
                                               const CostModel& model, SearchMode mode, SearchStats& stats,
                                               const SearchOptions& options) {
  const SlotGraph g = build_slot_graph(inst);
  const std::size_t workers = static_cast<std::size_t>(std::max(1, options.threads));
  const std::size_t block = workers == 1 ? 1 : workers * 4;
  stats.vertices_total = points.size();
  for (std::size_t begin = 0; begin < points.size(); begin += block) {
    const std::size_t end = std::min(points.size(), begin + block);
    std::vector<std::optional<PointEvaluation>> evals(end - begin);
    std::vector<std::exception_ptr> errors(end - begin);
    auto work = [&](std::size_t offset) {
      for (std::size_t k = begin + offset; k < end; k += workers) {
        try {
          evals[k - begin] = evaluate_point(inst, g, points[k], model);
        } catch (...) {
          errors[k - begin] = std::current_exception();
        }
      }
    };
    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }
    for (std::size_t k = begin; k < end; ++k) {
      if (errors[k - begin]) std::rethrow_exception(errors[k - begin]);
      const auto& eval = *evals[k - begin];
      stats.vertices_scanned = k + 1;
      stats.max_free_items = std::max(stats.max_free_items, eval.free_items);
      if (eval.covers_all()) return make_bundle(inst, eval, model, mode, stats, options.enumeration_limit);
    }
  }
  return std::nullopt;
}

namespace detail {

[[noreturn]] inline void no_witness(const SearchStats& stats) {
  throw InvariantViolation("no witness found after scanning " + std::to_string(stats.vertices_scanned) + " of " +
                           std::to_string(stats.vertices_total) + " vertices (" + std::to_string(stats.hyperplanes) +
                           " cycle hyperplanes, max free items " + std::to_string(stats.max_free_items) + ")");
}

}  // namespace detail

/// Vertex enumeration of the cycle-hyperplane arrangement on the weight
/// simplex, then face probing and brute force over the free items at each
/// vertex until one vertex serves every agent.
inline ResultBundle find_witness(const NormalizedInstance& inst, const SearchOptions& options = {}) {
  const CostModel model = make_cost_model(inst, options);
  const BigInt K = compute_K(inst);
  const SlotGraph g = build_slot_graph(inst);
  SearchStats stats;
  const auto hps = enumerate_cycle_hyperplanes(g, options.max_cycles);
  stats.hyperplanes = hps.size();
  const auto vertices = arrangement_vertices(hps, inst, K, model);
  if (auto bundle = scan_points(inst, vertices, model, SearchMode::arrangement, stats, options)) return *bundle;
  detail::no_witness(stats);
}

/// n = 2: breakpoints along t_1 in increasing order.
inline ResultBundle two_agent_sweep(const NormalizedInstance& inst, const SearchOptions& options = {}) {
  if (inst.num_agents() != 2) throw std::invalid_argument("sweep2 mode requires exactly two agents");
  const CostModel model = make_cost_model(inst, options);
  const BigInt K = compute_K(inst);
  const SlotGraph g = build_slot_graph(inst);
  SearchStats stats;
  const auto hps = enumerate_cycle_hyperplanes(g, options.max_cycles);
  stats.hyperplanes = hps.size();
  const auto points = two_agent_breakpoints(hps, inst, K, model);
  if (auto bundle = scan_points(inst, points, model, SearchMode::sweep2, stats, options)) return *bundle;
  detail::no_witness(stats);
}

/// Two-agent EF[1,1] extraction from a bundle: A^(1), A^(2) differ by one
/// swap j <-> j' over common parts I_1, I_2. If u_1(I_1) >= u_1(I_2) the
/// allocation making agent 2 envy-free is returned, otherwise the one making
/// agent 1 envy-free.
inline Allocation derive_ef11(const NormalizedInstance& inst, const ResultBundle& bundle) {
  if (inst.num_agents() != 2 || bundle.per_agent.size() != 2) {
    throw std::invalid_argument("EF[1,1] extraction needs a two-agent bundle");
  }
  const Allocation& first = bundle.per_agent[0];
  const Allocation& second = bundle.per_agent[1];
  if (first == second) return first;
  const auto moving = reallocation_set(bundle.per_agent);
  if (moving.size() > 2) throw std::invalid_argument("two-agent bundle reallocates more than two items");
  std::int64_t own = 0;
  std::int64_t other = 0;
  for (int j = 0; j < inst.num_items(); ++j) {
    if (first.owner(j) != second.owner(j)) continue;
    if (first.owner(j) == 0) own += inst.padded.utility(0, j);
    else other += inst.padded.utility(0, j);
  }
  return own >= other ? second : first;
}

/// Heuristic: evaluates the unperturbed objective on dyadic barycentric
/// grids, refining only around grid points whose neighbourhood labels cover
/// every agent. Not complete.
inline std::optional<ResultBundle> grid_refinement_search(const NormalizedInstance& inst, int depth,
                                                          const SearchOptions& options = {}) {
  const int n = inst.num_agents();
  const BigInt K = compute_K(inst);
  const CostModel model = CostModel::unperturbed();
  const SlotGraph g = build_slot_graph(inst);
  SearchStats stats;
  std::map<std::vector<Rational>, std::vector<bool>> labels;  // by exact t

  auto compositions = [&](int total) {
    std::vector<std::vector<int>> out;
    std::vector<int> c(static_cast<std::size_t>(n), 0);
    auto rec = [&](auto&& self, int idx, int left) -> void {
      if (idx == n - 1) {
        c[idx] = left;
        out.push_back(c);
        return;
      }
      for (int v = left; v >= 0; --v) {
        c[idx] = v;
        self(self, idx + 1, left - v);
      }
    };
    rec(rec, 0, total);
    return out;
  };
  auto to_point = [&](const std::vector<int>& c, int total) {
    std::vector<Rational> t;
    for (int v : c) t.push_back(make_rational(v, total));
    return t;
  };

  std::vector<std::vector<int>> centers;  // covering grid points of the previous level
  for (int level = 0; level <= depth; ++level) {
    const int N = 1 << level;
    std::vector<std::vector<int>> candidates;
    for (auto& c : compositions(N)) {
      bool near = level == 0;
      for (const auto& p : centers) {
        bool inside = true;
        for (int l = 0; l < n && inside; ++l) inside = std::abs(c[l] - 2 * p[l]) <= 2;
        if (inside) {
          near = true;
          break;
        }
      }
      if (near) candidates.push_back(std::move(c));
    }
    std::vector<std::vector<Rational>> points;
    for (const auto& c : candidates) points.push_back(to_point(c, N));
    std::sort(points.begin(), points.end());

    for (const auto& t : points) {
      if (labels.count(t)) continue;
      std::vector<bool> covered(static_cast<std::size_t>(n), false);
      ++stats.vertices_total;
      ++stats.vertices_scanned;
      try {
        const auto eval = evaluate_point(inst, g, shrink_weights(t, K, n), model);
        stats.max_free_items = std::max(stats.max_free_items, eval.free_items);
        for (int i = 0; i < n; ++i) covered[i] = eval.envy_free_choice[i] >= 0;
        if (eval.covers_all()) return make_bundle(inst, eval, model, SearchMode::grid, stats, options.enumeration_limit);
      } catch (const InvariantViolation&) {
        // optimal face too large without perturbation: no label from this point
      }
      labels.emplace(t, std::move(covered));
    }

    centers.clear();
    for (const auto& c : candidates) {
      std::vector<bool> seen(static_cast<std::size_t>(n), false);
      for (const auto& [t, lab] : labels) {
        bool adjacent = true;
        for (int l = 0; l < n && adjacent; ++l) {
          const Rational diff = t[l] * N - c[l];
          adjacent = diff <= 1 && diff >= -1;
        }
        if (!adjacent) continue;
        for (int i = 0; i < n; ++i) seen[i] = seen[i] || lab[i];
      }
      if (std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) centers.push_back(c);
    }
    if (centers.empty()) break;
  }
  return std::nullopt;
}

}  // namespace fairalloc
