#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fairalloc/errors.hpp"
#include "fairalloc/instance.hpp"

namespace fairalloc {

inline constexpr std::int64_t kDefaultMaxCycles = 1'000'000;

/// Hyperplane { y : y_e1 - y_e2 + y_e3 - ... - y_el = 0 } of an elementary
/// cycle e1..el of the slot graph. Canonical form: the cycle starts at its
/// lowest-rank edge and continues towards the lower-ranked neighbour, so the
/// normal is +1 on the lowest rank.
struct CycleHyperplane {
  std::vector<int> cycle;                    // edge indices in traversal order
  std::vector<std::pair<int, int>> normal;   // (rank, ±1), sorted by rank

  int sign_of(int position) const { return position % 2 == 0 ? 1 : -1; }

  friend bool operator==(const CycleHyperplane& a, const CycleHyperplane& b) { return a.normal == b.normal; }
  friend auto operator<=>(const CycleHyperplane& a, const CycleHyperplane& b) { return a.normal <=> b.normal; }
};

namespace detail {

inline CycleHyperplane canonical_hyperplane(const SlotGraph& g, std::vector<int> cycle) {
  const auto lowest = std::min_element(cycle.begin(), cycle.end());
  std::rotate(cycle.begin(), lowest, cycle.end());
  if (cycle.size() > 2 && cycle.back() < cycle[1]) std::reverse(cycle.begin() + 1, cycle.end());
  CycleHyperplane hp;
  hp.normal.reserve(cycle.size());
  for (std::size_t k = 0; k < cycle.size(); ++k)
    hp.normal.emplace_back(g.edge(cycle[k]).rank, k % 2 == 0 ? 1 : -1);
  std::sort(hp.normal.begin(), hp.normal.end());
  hp.cycle = std::move(cycle);
  return hp;
}

}  // namespace detail

/// Every elementary cycle of the slot graph, one hyperplane each, sorted by
/// canonical normal. Throws LimitExceeded past `max_cycles`.
inline std::vector<CycleHyperplane> enumerate_cycle_hyperplanes(const SlotGraph& g,
                                                                std::int64_t max_cycles = kDefaultMaxCycles) {
  const int S = g.num_slots();
  const int n = g.num_agents();
  // items of each category
  std::vector<std::vector<int>> items_of(static_cast<std::size_t>(g.num_categories()));
  for (int j = 0; j < g.num_items(); ++j) items_of[g.edge(g.edge_index(0, j)).category].push_back(j);

  std::set<CycleHyperplane> found;
  std::vector<int> path_edges;
  std::vector<bool> used_item(static_cast<std::size_t>(g.num_items()), false);
  std::vector<bool> used_slot(static_cast<std::size_t>(S), false);

  // Each cycle is rooted at its smallest slot; the two traversal directions
  // are collapsed by the canonical form.
  for (int root = 0; root < S; ++root) {
    const int h = g.slot_category(root);
    const int root_agent = g.slot_agent(root);
    used_slot[root] = true;
    auto from_item = [&](auto&& self, auto&& from_slot, int j) -> void {
      // close the cycle back to the root
      if (path_edges.size() >= 3) {
        path_edges.push_back(g.edge_index(root_agent, j));
        found.insert(detail::canonical_hyperplane(g, path_edges));
        path_edges.pop_back();
        if (static_cast<std::int64_t>(found.size()) > max_cycles) {
          throw LimitExceeded("more than " + std::to_string(max_cycles) + " elementary cycles");
        }
      }
      for (int agent = 0; agent < n; ++agent) {
        const int s = g.slot(agent, h);
        if (s <= root || used_slot[s]) continue;
        used_slot[s] = true;
        path_edges.push_back(g.edge_index(agent, j));
        from_slot(from_slot, self, s);
        path_edges.pop_back();
        used_slot[s] = false;
      }
    };
    auto from_slot = [&](auto&& self, auto&& item_step, int s) -> void {
      for (int j : items_of[h]) {
        if (used_item[j]) continue;
        used_item[j] = true;
        path_edges.push_back(g.edge_index(g.slot_agent(s), j));
        item_step(item_step, self, j);
        path_edges.pop_back();
        used_item[j] = false;
      }
    };
    from_slot(from_slot, from_item, root);
    used_slot[root] = false;
  }
  return {found.begin(), found.end()};
}

}  // namespace fairalloc
