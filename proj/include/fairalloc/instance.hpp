#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "fairalloc/errors.hpp"

namespace fairalloc {

// Agents and items are 0-based in memory; the JSON layer converts to 1-based.

struct Category {
  std::vector<int> items;
  int capacity = 0;

  friend bool operator==(const Category&, const Category&) = default;
};

/// Agents, items, integer additive utilities and capacity-constrained categories.
class Instance {
 public:
  Instance() = default;

  Instance(int agents, std::vector<std::vector<std::int64_t>> utilities,
           std::vector<Category> categories)
      : agents_(agents), utilities_(std::move(utilities)), categories_(std::move(categories)) {
    validate();
  }

  int num_agents() const { return agents_; }
  int num_items() const { return static_cast<int>(category_of_.size()); }
  int num_categories() const { return static_cast<int>(categories_.size()); }

  std::int64_t utility(int agent, int item) const { return utilities_[agent][item]; }
  const std::vector<std::vector<std::int64_t>>& utilities() const { return utilities_; }

  const Category& category(int h) const { return categories_[h]; }
  const std::vector<Category>& categories() const { return categories_; }
  int category_of(int item) const { return category_of_[item]; }
  int capacity_of_item(int item) const { return categories_[category_of_[item]].capacity; }

  std::int64_t max_abs_utility() const {
    std::int64_t best = 0;
    for (const auto& row : utilities_)
      for (auto u : row) best = std::max(best, u < 0 ? -u : u);
    return best;
  }

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  void validate() {
    if (agents_ < 1) throw InstanceError("instance needs at least one agent");
    if (static_cast<int>(utilities_.size()) != agents_) {
      throw InstanceError("utility matrix must have one row per agent");
    }
    const std::size_t m = utilities_.front().size();
    for (const auto& row : utilities_) {
      if (row.size() != m) throw InstanceError("utility rows have different lengths");
    }
    category_of_.assign(m, -1);
    for (std::size_t h = 0; h < categories_.size(); ++h) {
      const auto& cat = categories_[h];
      if (cat.capacity < 1) {
        throw InstanceError("category " + std::to_string(h + 1) + " has non-positive capacity");
      }
      for (int j : cat.items) {
        if (j < 0 || static_cast<std::size_t>(j) >= m) {
          throw InstanceError("category " + std::to_string(h + 1) + " references unknown item " +
                              std::to_string(j + 1));
        }
        if (category_of_[j] != -1) {
          throw InstanceError("categories overlap on item " + std::to_string(j + 1));
        }
        category_of_[j] = static_cast<int>(h);
      }
      if (static_cast<std::int64_t>(cat.items.size()) >
          static_cast<std::int64_t>(agents_) * cat.capacity) {
        throw InstanceError("category " + std::to_string(h + 1) + " has " +
                            std::to_string(cat.items.size()) + " items > " +
                            std::to_string(agents_) + " * capacity " +
                            std::to_string(cat.capacity));
      }
    }
    for (std::size_t j = 0; j < m; ++j) {
      if (category_of_[j] == -1) {
        throw InstanceError("item " + std::to_string(j + 1) + " belongs to no category");
      }
    }
  }

  int agents_ = 0;
  std::vector<std::vector<std::int64_t>> utilities_;
  std::vector<Category> categories_;
  std::vector<int> category_of_;
};

/// Instance padded with zero-utility dummy items so that every category holds
/// exactly agents * capacity items. Dummies get ids base_items, base_items+1, ...
/// grouped by category in input order.
struct NormalizedInstance {
  Instance base;
  Instance padded;
  std::vector<int> dummies;

  int num_agents() const { return padded.num_agents(); }
  int num_items() const { return padded.num_items(); }
  int num_base_items() const { return base.num_items(); }
  bool is_dummy(int item) const { return item >= base.num_items(); }
};

inline NormalizedInstance normalize(const Instance& inst) {
  const int n = inst.num_agents();
  auto utilities = inst.utilities();
  auto categories = inst.categories();
  std::vector<int> dummies;
  int next = inst.num_items();
  for (auto& cat : categories) {
    const int missing = n * cat.capacity - static_cast<int>(cat.items.size());
    for (int k = 0; k < missing; ++k) {
      cat.items.push_back(next);
      dummies.push_back(next);
      ++next;
    }
  }
  for (auto& row : utilities) row.resize(static_cast<std::size_t>(next), 0);
  return NormalizedInstance{inst, Instance(n, std::move(utilities), std::move(categories)),
                            std::move(dummies)};
}

/// Item -> agent map, total over the items of one instance.
class Allocation {
 public:
  Allocation() = default;
  explicit Allocation(std::vector<int> owner) : owner_(std::move(owner)) {}

  static Allocation from_bundles(int num_items, const std::vector<std::vector<int>>& bundles) {
    std::vector<int> owner(static_cast<std::size_t>(num_items), -1);
    for (std::size_t i = 0; i < bundles.size(); ++i)
      for (int j : bundles[i]) owner.at(static_cast<std::size_t>(j)) = static_cast<int>(i);
    return Allocation(std::move(owner));
  }

  int num_items() const { return static_cast<int>(owner_.size()); }
  int owner(int item) const { return owner_[item]; }
  void assign(int item, int agent) { owner_[item] = agent; }
  std::span<const int> owners() const { return owner_; }

  std::vector<int> bundle(int agent) const {
    std::vector<int> out;
    for (int j = 0; j < num_items(); ++j)
      if (owner_[j] == agent) out.push_back(j);
    return out;
  }

  std::vector<std::vector<int>> bundles(int num_agents) const {
    std::vector<std::vector<int>> out(static_cast<std::size_t>(num_agents));
    for (int j = 0; j < num_items(); ++j) out[owner_[j]].push_back(j);
    return out;
  }

  friend auto operator<=>(const Allocation&, const Allocation&) = default;

 private:
  std::vector<int> owner_;
};

/// Feasible iff every agent holds at most s_h items of each category h. On a
/// normalized instance this is equivalent to holding exactly s_h of each.
inline bool is_feasible(const Instance& inst, const Allocation& a) {
  if (a.num_items() != inst.num_items()) {
    throw InstanceError("allocation covers " + std::to_string(a.num_items()) +
                        " items, instance has " + std::to_string(inst.num_items()));
  }
  const int n = inst.num_agents();
  const int k = inst.num_categories();
  std::vector<int> load(static_cast<std::size_t>(n * k), 0);
  for (int j = 0; j < a.num_items(); ++j) {
    const int i = a.owner(j);
    if (i < 0 || i >= n) throw InstanceError("item " + std::to_string(j + 1) + " has unknown agent");
    ++load[static_cast<std::size_t>(i * k + inst.category_of(j))];
  }
  for (int i = 0; i < n; ++i)
    for (int h = 0; h < k; ++h)
      if (load[static_cast<std::size_t>(i * k + h)] > inst.category(h).capacity) return false;
  return true;
}

inline bool is_feasible(const NormalizedInstance& inst, const Allocation& a) {
  return is_feasible(inst.padded, a);
}

inline std::int64_t bundle_utility(const Instance& inst, int agent, std::span<const int> items) {
  std::int64_t total = 0;
  for (int j : items) total += inst.utility(agent, j);
  return total;
}

/// Utility of agent `agent` for the bundle allocated to `holder`.
inline std::int64_t utility_of_bundle(const Instance& inst, const Allocation& a, int agent,
                                      int holder) {
  std::int64_t total = 0;
  for (int j = 0; j < a.num_items(); ++j)
    if (a.owner(j) == holder) total += inst.utility(agent, j);
  return total;
}

/// Drops dummy items.
inline Allocation strip_dummies(const NormalizedInstance& inst, const Allocation& a) {
  auto owners = a.owners();
  return Allocation(std::vector<int>(owners.begin(), owners.begin() + inst.num_base_items()));
}

// ---------------------------------------------------------------------------
// Slot graph

struct Edge {
  int agent;
  int category;
  int item;
  int rank;  // 1-based, ascending (item, agent)
};

/// Bipartite graph between slots (agent, category) and items; one edge per
/// (agent, item). Edge index = item * n + agent, rank = index + 1.
class SlotGraph {
 public:
  SlotGraph() = default;

  explicit SlotGraph(const Instance& inst)
      : agents_(inst.num_agents()), categories_(inst.num_categories()), items_(inst.num_items()) {
    edges_.reserve(static_cast<std::size_t>(agents_ * items_));
    for (int j = 0; j < items_; ++j)
      for (int i = 0; i < agents_; ++i)
        edges_.push_back(Edge{i, inst.category_of(j), j, j * agents_ + i + 1});
    capacity_.resize(static_cast<std::size_t>(agents_ * categories_));
    for (int i = 0; i < agents_; ++i)
      for (int h = 0; h < categories_; ++h)
        capacity_[static_cast<std::size_t>(slot(i, h))] = inst.category(h).capacity;
  }

  int num_agents() const { return agents_; }
  int num_categories() const { return categories_; }
  int num_items() const { return items_; }
  int num_slots() const { return agents_ * categories_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  int slot(int agent, int category) const { return agent * categories_ + category; }
  int slot_agent(int s) const { return s / categories_; }
  int slot_category(int s) const { return s % categories_; }
  int capacity(int s) const { return capacity_[s]; }

  const Edge& edge(int e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }
  int edge_index(int agent, int item) const { return item * agents_ + agent; }
  int edge_slot(int e) const { return slot(edges_[e].agent, edges_[e].category); }

 private:
  int agents_ = 0;
  int categories_ = 0;
  int items_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> capacity_;
};

inline SlotGraph build_slot_graph(const NormalizedInstance& inst) { return SlotGraph(inst.padded); }

}  // namespace fairalloc
