#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairalloc/errors.hpp"
#include "fairalloc/instance.hpp"

// Exact maximization of sum_e c_e x_e over the transportation polytope of a
// SlotGraph: every item covered once, every slot (i,h) filled with s_h items.
// All routines are templates over an ordered abelian group `Cost`
// (LexCost, PackedLex, ...). A value-initialized Cost is the zero.

namespace fairalloc {

template <class Cost>
struct SolveResult {
  Allocation allocation;
  Cost objective{};
  /// Dual certificate: slot_potential[s] + item_potential[j] >= c_e for every
  /// admissible edge e = (s, j), with equality on chosen edges.
  std::vector<Cost> slot_potential;
  std::vector<Cost> item_potential;
};

template <class Cost>
struct FaceReport {
  Allocation optimum;  // one integral optimum
  Cost optimum_value{};
  std::vector<int> fixed_one;   // edges with x_e = 1 on the whole optimal face
  std::vector<int> fixed_zero;  // edges with x_e = 0 on the whole optimal face
  std::vector<int> free_items;  // items not covered by fixed_one
};

template <class Cost>
Cost allocation_value(const SlotGraph& g, std::span<const Cost> cost, const Allocation& a) {
  Cost total{};
  for (int j = 0; j < g.num_items(); ++j) total += cost[g.edge_index(a.owner(j), j)];
  return total;
}

namespace detail {

/// Edge states under forced / forbidden constraints.
enum class EdgeLock : unsigned char { open, forced, blocked };

inline std::vector<EdgeLock> edge_locks(const SlotGraph& g, std::span<const int> forced,
                                        std::span<const int> forbidden) {
  std::vector<EdgeLock> lock(static_cast<std::size_t>(g.num_edges()), EdgeLock::open);
  for (int e : forbidden) lock.at(static_cast<std::size_t>(e)) = EdgeLock::blocked;
  for (int e : forced) {
    if (lock.at(static_cast<std::size_t>(e)) == EdgeLock::blocked) {
      throw std::invalid_argument("edge " + std::to_string(e + 1) + " is both forced and forbidden");
    }
  }
  std::vector<int> forced_edge_of_item(static_cast<std::size_t>(g.num_items()), -1);
  for (int e : forced) {
    const int j = g.edge(e).item;
    if (forced_edge_of_item[j] != -1 && forced_edge_of_item[j] != e) {
      throw InfeasibleError("item " + std::to_string(j + 1) + " forced to two agents");
    }
    forced_edge_of_item[j] = e;
  }
  for (int j = 0; j < g.num_items(); ++j) {
    if (forced_edge_of_item[j] == -1) continue;
    for (int i = 0; i < g.num_agents(); ++i) {
      const int e = g.edge_index(i, j);
      lock[e] = e == forced_edge_of_item[j] ? EdgeLock::forced : EdgeLock::blocked;
    }
  }
  return lock;
}

/// Residual digraph D_x over slots [0, S) and items [S, S+M): an arc
/// slot -> item with cost -c_e when x_e = 1 and item -> slot with cost c_e
/// when x_e = 0. Locked edges contribute no arc.
template <class Cost>
struct ResidualArc {
  int from;
  int to;
  int edge;
  Cost cost;
};

template <class Cost>
std::vector<ResidualArc<Cost>> residual_arcs(const SlotGraph& g, std::span<const Cost> cost,
                                             const Allocation& a,
                                             const std::vector<EdgeLock>* lock = nullptr) {
  std::vector<ResidualArc<Cost>> arcs;
  arcs.reserve(static_cast<std::size_t>(g.num_edges()));
  const int S = g.num_slots();
  for (int e = 0; e < g.num_edges(); ++e) {
    if (lock && (*lock)[e] != EdgeLock::open) continue;
    const Edge& ed = g.edge(e);
    const int s = g.slot(ed.agent, ed.category);
    const int j = S + ed.item;
    if (a.owner(ed.item) == ed.agent) {
      arcs.push_back({s, j, e, -cost[e]});
    } else {
      arcs.push_back({j, s, e, cost[e]});
    }
  }
  return arcs;
}

/// Longest-path potentials from a virtual root (Bellman-Ford). Returns the
/// potentials, or the edges of a positive-cost cycle in traversal order.
template <class Cost>
struct LongestPathOutcome {
  std::vector<Cost> potential;
  std::vector<int> positive_cycle;  // empty when none
};

template <class Cost>
LongestPathOutcome<Cost> residual_longest_paths(int num_vertices,
                                                const std::vector<ResidualArc<Cost>>& arcs) {
  LongestPathOutcome<Cost> out;
  out.potential.assign(static_cast<std::size_t>(num_vertices), Cost{});
  std::vector<int> pred(static_cast<std::size_t>(num_vertices), -1);
  int last = -1;
  for (int round = 0; round <= num_vertices; ++round) {
    last = -1;
    for (std::size_t k = 0; k < arcs.size(); ++k) {
      const auto& arc = arcs[k];
      Cost cand = out.potential[arc.from] + arc.cost;
      if (cand > out.potential[arc.to]) {
        out.potential[arc.to] = std::move(cand);
        pred[arc.to] = static_cast<int>(k);
        last = arc.to;
      }
    }
    if (last == -1) return out;
  }
  // still relaxing after |V| rounds: walk back onto the cycle
  int v = last;
  for (int k = 0; k < num_vertices; ++k) v = arcs[pred[v]].from;
  const int start = v;
  std::vector<int> cycle;
  do {
    const auto& arc = arcs[pred[v]];
    cycle.push_back(arc.edge);
    v = arc.from;
  } while (v != start);
  std::reverse(cycle.begin(), cycle.end());
  out.positive_cycle = std::move(cycle);
  return out;
}

}  // namespace detail

/// Integral maximizer of sum c_e x_e with x = 1 on `forced`, x = 0 on
/// `forbidden`. Successive shortest paths with Johnson potentials on the
/// negated costs; Dijkstra breaks ties towards the lowest vertex index.
template <class Cost>
SolveResult<Cost> solve(const SlotGraph& g, std::span<const Cost> cost,
                        std::span<const int> forced = {}, std::span<const int> forbidden = {}) {
  if (static_cast<int>(cost.size()) != g.num_edges()) {
    throw std::invalid_argument("cost vector size does not match the edge count");
  }
  const auto lock = detail::edge_locks(g, forced, forbidden);
  const int S = g.num_slots();
  const int M = g.num_items();
  const int source = 0;
  const int sink = S + M + 1;
  const int V = S + M + 2;
  auto slot_node = [](int s) { return 1 + s; };
  auto item_node = [S](int j) { return 1 + S + j; };

  struct Arc {
    int to;
    int cap;
    Cost cost;
    int rev;
    int edge;
  };
  std::vector<std::vector<Arc>> adj(static_cast<std::size_t>(V));
  auto add_arc = [&](int u, int v, int cap, Cost w, int edge) {
    adj[u].push_back({v, cap, w, static_cast<int>(adj[v].size()), edge});
    adj[v].push_back({u, 0, -w, static_cast<int>(adj[u].size()) - 1, -1});
  };

  std::vector<int> owner(static_cast<std::size_t>(M), -1);
  std::vector<int> remaining(static_cast<std::size_t>(S));
  for (int s = 0; s < S; ++s) remaining[s] = g.capacity(s);
  int free_items = 0;
  for (int j = 0; j < M; ++j) {
    bool placed = false;
    for (int i = 0; i < g.num_agents(); ++i) {
      const int e = g.edge_index(i, j);
      if (lock[e] == detail::EdgeLock::forced) {
        owner[j] = i;
        if (--remaining[g.edge_slot(e)] < 0) {
          throw InfeasibleError("forced edges overfill slot of agent " + std::to_string(i + 1));
        }
        placed = true;
      }
    }
    if (!placed) ++free_items;
  }
  int total_capacity = 0;
  for (int s = 0; s < S; ++s) total_capacity += remaining[s];
  if (total_capacity != free_items) {
    throw InfeasibleError("slot capacities do not match the number of unassigned items");
  }

  for (int s = 0; s < S; ++s)
    if (remaining[s] > 0) add_arc(source, slot_node(s), remaining[s], Cost{}, -1);
  for (int e = 0; e < g.num_edges(); ++e) {
    if (lock[e] != detail::EdgeLock::open) continue;
    add_arc(slot_node(g.edge_slot(e)), item_node(g.edge(e).item), 1, -cost[e], e);
  }
  for (int j = 0; j < M; ++j)
    if (owner[j] == -1) add_arc(item_node(j), sink, 1, Cost{}, -1);

  // initial potentials: the network is layered, so take minima layer by layer
  std::vector<Cost> pot(static_cast<std::size_t>(V), Cost{});
  std::vector<bool> has_pot(static_cast<std::size_t>(V), false);
  has_pot[source] = true;
  for (int s = 0; s < S; ++s) has_pot[slot_node(s)] = true;
  for (int s = 0; s < S; ++s) {
    for (const auto& arc : adj[slot_node(s)]) {
      if (arc.cap == 0 || arc.edge < 0) continue;
      if (!has_pot[arc.to] || arc.cost < pot[arc.to]) {
        pot[arc.to] = arc.cost;
        has_pot[arc.to] = true;
      }
    }
  }
  for (int j = 0; j < M; ++j) {
    const int v = item_node(j);
    if (owner[j] != -1) continue;
    if (!has_pot[v]) throw InfeasibleError("item " + std::to_string(j + 1) + " has no admissible agent");
    if (!has_pot[sink] || pot[v] < pot[sink]) {
      pot[sink] = pot[v];
      has_pot[sink] = true;
    }
  }

  std::vector<Cost> dist(static_cast<std::size_t>(V));
  std::vector<bool> reached(static_cast<std::size_t>(V));
  std::vector<bool> done(static_cast<std::size_t>(V));
  std::vector<std::pair<int, int>> parent(static_cast<std::size_t>(V));
  for (int flow = 0; flow < free_items; ++flow) {
    std::fill(reached.begin(), reached.end(), false);
    std::fill(done.begin(), done.end(), false);
    dist[source] = Cost{};
    reached[source] = true;
    for (;;) {
      int u = -1;
      for (int v = 0; v < V; ++v)
        if (reached[v] && !done[v] && (u == -1 || dist[v] < dist[u])) u = v;
      if (u == -1) break;
      done[u] = true;
      for (std::size_t k = 0; k < adj[u].size(); ++k) {
        const Arc& arc = adj[u][k];
        if (arc.cap == 0 || done[arc.to]) continue;
        Cost cand = dist[u] + arc.cost + pot[u] - pot[arc.to];
        if (!reached[arc.to] || cand < dist[arc.to]) {
          dist[arc.to] = std::move(cand);
          reached[arc.to] = true;
          parent[arc.to] = {u, static_cast<int>(k)};
        }
      }
    }
    if (!reached[sink]) throw InfeasibleError("no feasible assignment under the given constraints");
    Cost farthest{};
    bool any = false;
    for (int v = 0; v < V; ++v)
      if (reached[v] && (!any || dist[v] > farthest)) {
        farthest = dist[v];
        any = true;
      }
    for (int v = 0; v < V; ++v) pot[v] += reached[v] ? dist[v] : farthest;
    for (int v = sink; v != source;) {
      auto [u, k] = parent[v];
      Arc& arc = adj[u][k];
      arc.cap -= 1;
      adj[v][arc.rev].cap += 1;
      v = u;
    }
  }

  for (int s = 0; s < S; ++s) {
    for (const auto& arc : adj[slot_node(s)]) {
      if (arc.edge >= 0 && arc.cap == 0) owner[g.edge(arc.edge).item] = g.edge(arc.edge).agent;
    }
  }

  SolveResult<Cost> result;
  result.allocation = Allocation(std::move(owner));
  result.objective = allocation_value(g, cost, result.allocation);

  const auto arcs = detail::residual_arcs(g, cost, result.allocation, &lock);
  auto paths = detail::residual_longest_paths(S + M, arcs);
  if (!paths.positive_cycle.empty()) {
    throw InvariantViolation("assignment solver returned a non-optimal allocation");
  }
  result.slot_potential.assign(paths.potential.begin(), paths.potential.begin() + S);
  result.item_potential.reserve(static_cast<std::size_t>(M));
  // p(j) = p(owner slot) - c_e makes chosen edges tight; it only lowers p(j),
  // so the unchosen arcs j -> s keep p(s) >= p(j) + c_e
  for (int j = 0; j < M; ++j) {
    const int e = g.edge_index(result.allocation.owner(j), j);
    result.item_potential.push_back(cost[e] - result.slot_potential[g.edge_slot(e)]);
  }
  return result;
}

/// True iff the potentials of `r` are a dual certificate for its allocation.
template <class Cost>
bool check_dual_certificate(const SlotGraph& g, std::span<const Cost> cost, const SolveResult<Cost>& r,
                            std::span<const int> forced = {}, std::span<const int> forbidden = {}) {
  const auto lock = detail::edge_locks(g, forced, forbidden);
  for (int e = 0; e < g.num_edges(); ++e) {
    if (lock[e] != detail::EdgeLock::open) continue;
    const Edge& ed = g.edge(e);
    const Cost reduced = r.slot_potential[g.edge_slot(e)] + r.item_potential[ed.item] - cost[e];
    if (reduced < Cost{}) return false;
    if (r.allocation.owner(ed.item) == ed.agent && !(reduced == Cost{})) return false;
  }
  return true;
}

/// Edges of a directed residual cycle of positive total cost, if any.
template <class Cost>
std::optional<std::vector<int>> find_improving_cycle(const SlotGraph& g, std::span<const Cost> cost,
                                                     const Allocation& a) {
  const auto arcs = detail::residual_arcs(g, cost, a);
  auto outcome = detail::residual_longest_paths(g.num_slots() + g.num_items(), arcs);
  if (outcome.positive_cycle.empty()) return std::nullopt;
  return std::move(outcome.positive_cycle);
}

/// Optimal iff the residual digraph has no positive-cost directed cycle.
template <class Cost>
bool verify_optimality(const SlotGraph& g, std::span<const Cost> cost, const Allocation& a) {
  return !find_improving_cycle(g, cost, a).has_value();
}

/// Which edges are constant on the optimal face. Equivalent to re-solving
/// with each edge forbidden / forced, warm-started from one optimum x: the
/// best solution with e forced (forbidden) is x plus the best residual cycle
/// through the arc of e, so all 2|E| re-solves collapse into one all-pairs
/// longest-path table over D_x.
template <class Cost>
FaceReport<Cost> probe_face(const SlotGraph& g, std::span<const Cost> cost) {
  auto sol = solve<Cost>(g, cost);
  const int S = g.num_slots();
  const int V = S + g.num_items();
  const auto arcs = detail::residual_arcs(g, cost, sol.allocation);

  std::vector<std::optional<Cost>> best(static_cast<std::size_t>(V * V));
  auto at = [&](int u, int v) -> std::optional<Cost>& { return best[static_cast<std::size_t>(u * V + v)]; };
  for (const auto& arc : arcs) {
    auto& slot = at(arc.from, arc.to);
    if (!slot || arc.cost > *slot) slot = arc.cost;
  }
  for (int k = 0; k < V; ++k) {
    for (int u = 0; u < V; ++u) {
      const auto& uk = at(u, k);
      if (!uk) continue;
      for (int v = 0; v < V; ++v) {
        const auto& kv = at(k, v);
        if (!kv) continue;
        Cost cand = *uk + *kv;
        auto& uv = at(u, v);
        if (!uv || cand > *uv) uv = std::move(cand);
      }
    }
  }

  FaceReport<Cost> report;
  std::vector<bool> covered(static_cast<std::size_t>(g.num_items()), false);
  for (int e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    const int s = g.slot(ed.agent, ed.category);
    const int j = S + ed.item;
    if (sol.allocation.owner(ed.item) == ed.agent) {
      const auto& back = at(j, s);
      if (!back || !(*back - cost[e] == Cost{})) {
        report.fixed_one.push_back(e);
        covered[ed.item] = true;
      }
    } else {
      const auto& back = at(s, j);
      if (!back || !(*back + cost[e] == Cost{})) report.fixed_zero.push_back(e);
    }
  }
  for (int j = 0; j < g.num_items(); ++j)
    if (!covered[j]) report.free_items.push_back(j);
  report.optimum = std::move(sol.allocation);
  report.optimum_value = std::move(sol.objective);
  return report;
}

/// The literal recipe: 2|E| independent re-solves. Slow; kept as a reference
/// for probe_face.
template <class Cost>
FaceReport<Cost> probe_face_by_resolving(const SlotGraph& g, std::span<const Cost> cost) {
  auto sol = solve<Cost>(g, cost);
  FaceReport<Cost> report;
  std::vector<bool> covered(static_cast<std::size_t>(g.num_items()), false);
  auto strictly_worse = [&](std::span<const int> forced, std::span<const int> forbidden) {
    try {
      return solve<Cost>(g, cost, forced, forbidden).objective < sol.objective;
    } catch (const InfeasibleError&) {
      return true;
    }
  };
  for (int e = 0; e < g.num_edges(); ++e) {
    const int one[] = {e};
    if (strictly_worse({}, one)) {
      report.fixed_one.push_back(e);
      covered[g.edge(e).item] = true;
    }
    if (strictly_worse(one, {})) report.fixed_zero.push_back(e);
  }
  for (int j = 0; j < g.num_items(); ++j)
    if (!covered[j]) report.free_items.push_back(j);
  report.optimum = std::move(sol.allocation);
  report.optimum_value = std::move(sol.objective);
  return report;
}

/// All integral optima: brute force over the free items, keeping the fixed
/// partial assignment. Order: lexicographic in the owners of the free items.
template <class Cost>
std::vector<Allocation> enumerate_optima(const SlotGraph& g, std::span<const Cost> cost,
                                         const FaceReport<Cost>& report) {
  const int n = g.num_agents();
  if (static_cast<long>(report.free_items.size()) > static_cast<long>(n) * (n - 1)) {
    throw InvariantViolation("optimal face leaves " + std::to_string(report.free_items.size()) +
                             " items free, more than n(n-1) = " + std::to_string(n * (n - 1)));
  }
  std::vector<int> owner(static_cast<std::size_t>(g.num_items()), -1);
  std::vector<int> load(static_cast<std::size_t>(g.num_slots()), 0);
  for (int e : report.fixed_one) {
    owner[g.edge(e).item] = g.edge(e).agent;
    ++load[g.edge_slot(e)];
  }
  std::vector<bool> zero(static_cast<std::size_t>(g.num_edges()), false);
  for (int e : report.fixed_zero) zero[e] = true;

  const auto& free = report.free_items;
  std::vector<std::vector<int>> choices(free.size());
  for (std::size_t k = 0; k < free.size(); ++k)
    for (int i = 0; i < n; ++i)
      if (!zero[g.edge_index(i, free[k])]) choices[k].push_back(i);

  std::vector<Allocation> out;
  // depth-first over free items with slot-capacity pruning
  auto recurse = [&](auto&& self, std::size_t k) -> void {
    if (k == free.size()) {
      Allocation a(owner);
      if (allocation_value(g, cost, a) == report.optimum_value) out.push_back(std::move(a));
      return;
    }
    const int j = free[k];
    for (int i : choices[k]) {
      const int s = g.edge_slot(g.edge_index(i, j));
      if (load[s] >= g.capacity(s)) continue;
      ++load[s];
      owner[j] = i;
      self(self, k + 1);
      owner[j] = -1;
      --load[s];
    }
  };
  recurse(recurse, 0);
  if (out.empty()) throw InvariantViolation("no optimum reconstructed from the face report");
  return out;
}

}  // namespace fairalloc
