#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fairalloc/errors.hpp"
#include "fairalloc/instance.hpp"
#include "fairalloc/oracle.hpp"

namespace fairalloc {

/// Arc i -> i' iff u_i(A_i') > u_i(A_i).
class EnvyGraph {
 public:
  EnvyGraph(const Instance& inst, const Allocation& a) : n_(inst.num_agents()) {
    // value[i][i'] = u_i(A_i')
    std::vector<std::int64_t> value(static_cast<std::size_t>(n_ * n_), 0);
    for (int j = 0; j < a.num_items(); ++j)
      for (int i = 0; i < n_; ++i) value[static_cast<std::size_t>(i * n_ + a.owner(j))] += inst.utility(i, j);
    arcs_.assign(static_cast<std::size_t>(n_ * n_), false);
    for (int i = 0; i < n_; ++i)
      for (int other = 0; other < n_; ++other)
        arcs_[static_cast<std::size_t>(i * n_ + other)] =
            value[static_cast<std::size_t>(i * n_ + other)] > value[static_cast<std::size_t>(i * n_ + i)];
  }

  int num_agents() const { return n_; }
  bool envies(int i, int other) const { return arcs_[static_cast<std::size_t>(i * n_ + other)]; }

  int out_degree(int i) const {
    int d = 0;
    for (int other = 0; other < n_; ++other) d += envies(i, other) ? 1 : 0;
    return d;
  }

  std::vector<std::pair<int, int>> arcs() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < n_; ++i)
      for (int other = 0; other < n_; ++other)
        if (envies(i, other)) out.emplace_back(i, other);
    return out;
  }

  bool has_cycle() const {
    std::vector<int> color(static_cast<std::size_t>(n_), 0);
    auto dfs = [&](auto&& self, int v) -> bool {
      color[v] = 1;
      for (int w = 0; w < n_; ++w) {
        if (!envies(v, w)) continue;
        if (color[w] == 1) return true;
        if (color[w] == 0 && self(self, w)) return true;
      }
      color[v] = 2;
      return false;
    };
    for (int v = 0; v < n_; ++v)
      if (color[v] == 0 && dfs(dfs, v)) return true;
    return false;
  }

 private:
  int n_;
  std::vector<bool> arcs_;
};

inline EnvyGraph envy_graph(const Instance& inst, const Allocation& a) { return EnvyGraph(inst, a); }

inline bool is_envy_free_for(const Instance& inst, const Allocation& a, int agent) {
  return envy_graph(inst, a).out_degree(agent) == 0;
}

/// A'_{i_l} = A_{i_{l+1}}, cyclically; other bundles untouched. Every
/// consecutive pair of `path` must be an envy arc.
inline Allocation rotate_along_path(const Instance& inst, const Allocation& a, std::span<const int> path) {
  if (path.empty()) throw std::invalid_argument("empty rotation path");
  const EnvyGraph graph(inst, a);
  for (std::size_t l = 0; l + 1 < path.size(); ++l) {
    if (!graph.envies(path[l], path[l + 1])) {
      throw std::invalid_argument("agent " + std::to_string(path[l] + 1) + " does not envy agent " +
                                  std::to_string(path[l + 1] + 1));
    }
  }
  // bundle held by path[l+1] moves to path[l]
  std::vector<int> receiver(static_cast<std::size_t>(inst.num_agents()));
  for (int i = 0; i < inst.num_agents(); ++i) receiver[i] = i;
  for (std::size_t l = 0; l < path.size(); ++l) {
    const int from = path[(l + 1) % path.size()];
    receiver[from] = path[l];
  }
  Allocation out = a;
  for (int j = 0; j < a.num_items(); ++j) out.assign(j, receiver[a.owner(j)]);
  return out;
}

namespace detail {

inline std::int64_t value_without(const Instance& inst, int agent, const std::vector<int>& bundle, int removed) {
  std::int64_t total = 0;
  for (int j : bundle)
    if (j != removed) total += inst.utility(agent, j);
  return total;
}

}  // namespace detail

/// EF1: for every ordered pair there is S ⊆ A_i ∪ A_i', |S| <= 1, with
/// u_i(A_i \ S) >= u_i(A_i' \ S).
inline bool is_ef1(const Instance& inst, const Allocation& a) {
  const int n = inst.num_agents();
  const auto bundles = a.bundles(n);
  for (int i = 0; i < n; ++i) {
    for (int other = 0; other < n; ++other) {
      if (other == i) continue;
      std::vector<int> candidates{-1};
      candidates.insert(candidates.end(), bundles[i].begin(), bundles[i].end());
      candidates.insert(candidates.end(), bundles[other].begin(), bundles[other].end());
      bool ok = false;
      for (int removed : candidates) {
        if (detail::value_without(inst, i, bundles[i], removed) >=
            detail::value_without(inst, i, bundles[other], removed)) {
          ok = true;
          break;
        }
      }
      if (!ok) return false;
    }
  }
  return true;
}

/// EF[1,1]: for every ordered pair there are S ⊆ A_i, T ⊆ A_i' of size at
/// most one with u_i(A_i \ S) >= u_i(A_i' \ T).
inline bool is_ef11(const Instance& inst, const Allocation& a) {
  const int n = inst.num_agents();
  const auto bundles = a.bundles(n);
  for (int i = 0; i < n; ++i) {
    for (int other = 0; other < n; ++other) {
      if (other == i) continue;
      std::vector<int> own{-1};
      own.insert(own.end(), bundles[i].begin(), bundles[i].end());
      std::vector<int> theirs{-1};
      theirs.insert(theirs.end(), bundles[other].begin(), bundles[other].end());
      bool ok = false;
      for (int s : own) {
        const auto mine = detail::value_without(inst, i, bundles[i], s);
        for (int t : theirs) {
          if (mine >= detail::value_without(inst, i, bundles[other], t)) {
            ok = true;
            break;
          }
        }
        if (ok) break;
      }
      if (!ok) return false;
    }
  }
  return true;
}

inline bool is_pareto_optimal_bruteforce(const Instance& inst, const Allocation& a,
                                         std::int64_t limit = kDefaultEnumerationLimit) {
  return ParetoOracle(inst, limit).is_pareto_optimal(a);
}

/// Items whose owner differs between some pair of the given allocations.
inline std::vector<int> reallocation_set(std::span<const Allocation> allocs) {
  if (allocs.empty()) throw std::invalid_argument("reallocation set of no allocations");
  const int m = allocs.front().num_items();
  std::vector<int> out;
  for (const auto& a : allocs) {
    if (a.num_items() != m) throw std::invalid_argument("allocations are over different instances");
  }
  for (int j = 0; j < m; ++j) {
    for (const auto& a : allocs) {
      if (a.owner(j) != allocs.front().owner(j)) {
        out.push_back(j);
        break;
      }
    }
  }
  return out;
}

}  // namespace fairalloc
