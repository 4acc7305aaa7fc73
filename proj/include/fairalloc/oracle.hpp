#pragma once

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fairalloc/errors.hpp"
#include "fairalloc/instance.hpp"
#include "fairalloc/rational.hpp"

// Exhaustive ground truth for desk-scale instances. Intentionally naive.

namespace fairalloc {

inline constexpr std::int64_t kDefaultEnumerationLimit = 10'000'000;

/// Enumeration limit, overridable through FAIRALLOC_ENUM_LIMIT.
inline std::int64_t enumeration_limit_from_env(std::int64_t fallback = kDefaultEnumerationLimit) {
  if (const char* raw = std::getenv("FAIRALLOC_ENUM_LIMIT")) {
    try {
      return std::stoll(raw);
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string("FAIRALLOC_ENUM_LIMIT is not an integer: ") + raw);
    }
  }
  return fallback;
}

/// Number of allocations with |A_i ∩ S_h| <= s_h, by counting per category:
/// ways to distribute |S_h| labelled items among n agents with at most s_h each.
inline BigInt count_feasible(const Instance& inst) {
  const int n = inst.num_agents();
  BigInt total = 1;
  for (const auto& cat : inst.categories()) {
    const int size = static_cast<int>(cat.items.size());
    // ways[c] = distributions of c items among the agents seen so far
    std::vector<BigInt> ways(static_cast<std::size_t>(size) + 1, 0);
    ways[0] = 1;
    for (int agent = 0; agent < n; ++agent) {
      std::vector<BigInt> next(ways.size(), 0);
      for (int c = 0; c <= size; ++c) {
        if (ways[c] == 0) continue;
        for (int take = 0; take <= cat.capacity && c + take <= size; ++take) {
          // choose which `take` of the remaining items go to this agent
          BigInt binom = 1;
          for (int r = 0; r < take; ++r) binom = binom * (size - c - r) / (r + 1);
          next[c + take] += ways[c] * binom;
        }
      }
      ways = std::move(next);
    }
    total *= ways[size];
  }
  return total;
}

/// Calls `visit` on every feasible allocation exactly once, items assigned in
/// id order and agents tried in ascending order.
inline void for_each_feasible(const Instance& inst, const std::function<void(const Allocation&)>& visit,
                              std::int64_t limit = kDefaultEnumerationLimit) {
  if (count_feasible(inst) > limit) {
    throw LimitExceeded("feasible allocation count " + count_feasible(inst).str() +
                        " exceeds enumeration limit " + std::to_string(limit));
  }
  const int n = inst.num_agents();
  const int k = inst.num_categories();
  const int m = inst.num_items();
  std::vector<int> load(static_cast<std::size_t>(n * k), 0);
  Allocation current(std::vector<int>(static_cast<std::size_t>(m), 0));
  auto recurse = [&](auto&& self, int j) -> void {
    if (j == m) {
      visit(current);
      return;
    }
    const int h = inst.category_of(j);
    for (int i = 0; i < n; ++i) {
      int& l = load[static_cast<std::size_t>(i * k + h)];
      if (l >= inst.category(h).capacity) continue;
      ++l;
      current.assign(j, i);
      self(self, j + 1);
      --l;
    }
  };
  recurse(recurse, 0);
}

inline std::vector<Allocation> enumerate_feasible(const Instance& inst,
                                                  std::int64_t limit = kDefaultEnumerationLimit) {
  std::vector<Allocation> out;
  for_each_feasible(inst, [&](const Allocation& a) { out.push_back(a); }, limit);
  return out;
}

inline std::vector<Allocation> enumerate_feasible(const NormalizedInstance& inst,
                                                  std::int64_t limit = kDefaultEnumerationLimit) {
  return enumerate_feasible(inst.padded, limit);
}

using UtilityVector = std::vector<std::int64_t>;

inline UtilityVector utility_vector(const Instance& inst, const Allocation& a) {
  UtilityVector out(static_cast<std::size_t>(inst.num_agents()), 0);
  for (int j = 0; j < a.num_items(); ++j) out[a.owner(j)] += inst.utility(a.owner(j), j);
  return out;
}

/// a weakly better for everyone and strictly better for someone.
inline bool dominates(const UtilityVector& a, const UtilityVector& b) {
  bool strict = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return false;
    if (a[i] > b[i]) strict = true;
  }
  return strict;
}

/// All feasible allocations with their utility vectors, enumerated once.
class ParetoOracle {
 public:
  explicit ParetoOracle(const Instance& inst, std::int64_t limit = kDefaultEnumerationLimit)
      : inst_(&inst) {
    for_each_feasible(
        inst,
        [&](const Allocation& a) {
          allocations_.push_back(a);
          utilities_.push_back(utility_vector(inst, a));
        },
        limit);
  }

  std::size_t feasible_count() const { return allocations_.size(); }
  const std::vector<Allocation>& allocations() const { return allocations_; }
  const std::vector<UtilityVector>& utilities() const { return utilities_; }

  /// A feasible allocation dominating `a`, if one exists.
  std::optional<Allocation> dominating(const Allocation& a) const {
    const auto target = utility_vector(*inst_, a);
    for (std::size_t k = 0; k < allocations_.size(); ++k)
      if (dominates(utilities_[k], target)) return allocations_[k];
    return std::nullopt;
  }

  bool is_pareto_optimal(const Allocation& a) const { return !dominating(a).has_value(); }

  std::vector<Allocation> frontier() const {
    std::vector<Allocation> out;
    for (std::size_t k = 0; k < allocations_.size(); ++k) {
      bool dominated = false;
      for (std::size_t l = 0; l < allocations_.size() && !dominated; ++l)
        dominated = dominates(utilities_[l], utilities_[k]);
      if (!dominated) out.push_back(allocations_[k]);
    }
    return out;
  }

 private:
  const Instance* inst_;
  std::vector<Allocation> allocations_;
  std::vector<UtilityVector> utilities_;
};

inline std::vector<Allocation> pareto_frontier(const Instance& inst,
                                               std::int64_t limit = kDefaultEnumerationLimit) {
  return ParetoOracle(inst, limit).frontier();
}

inline std::vector<Allocation> pareto_frontier(const NormalizedInstance& inst,
                                               std::int64_t limit = kDefaultEnumerationLimit) {
  return pareto_frontier(inst.padded, limit);
}

}  // namespace fairalloc
