#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "fairalloc.hpp"

namespace fairalloc::test_support {

struct GeneratorParams {
  std::vector<int> agents{2, 3};
  int max_categories = 2;
  int min_items = 1;
  int max_items = 6;
  std::int64_t min_utility = -5;
  std::int64_t max_utility = 5;
  // capacities may exceed ceil(|S_h|/n) while the padded instance stays this small
  int max_padded_items = 8;
};

/// Random instance: items split into nonempty categories, capacity
/// ceil(|S_h|/n) or one more, utilities uniform in [min, max].
inline Instance random_instance(std::mt19937_64& rng, const GeneratorParams& p = {}) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const int n = p.agents[static_cast<std::size_t>(pick(0, static_cast<int>(p.agents.size()) - 1))];
  const int m = pick(p.min_items, p.max_items);
  const int k = m == 0 ? 0 : pick(1, std::min(p.max_categories, m));
  std::vector<int> order(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) order[j] = j;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Category> cats(static_cast<std::size_t>(k));
  for (int h = 0; h < k; ++h) cats[h].items.push_back(order[h]);
  for (int j = k; j < m; ++j) cats[static_cast<std::size_t>(pick(0, k - 1))].items.push_back(order[j]);
  int padded = 0;
  for (auto& c : cats) {
    std::sort(c.items.begin(), c.items.end());
    const int size = static_cast<int>(c.items.size());
    c.capacity = (size + n - 1) / n;
    padded += n * c.capacity;
  }
  for (auto& c : cats) {
    if (pick(0, 3) == 0 && padded + n <= p.max_padded_items) {
      ++c.capacity;
      padded += n;
    }
  }
  std::uniform_int_distribution<std::int64_t> util(p.min_utility, p.max_utility);
  std::vector<std::vector<std::int64_t>> u(static_cast<std::size_t>(n), std::vector<std::int64_t>(m));
  for (auto& row : u)
    for (auto& x : row) x = util(rng);
  return Instance(n, std::move(u), std::move(cats));
}

/// Uniform random simplex point with denominator `den`.
inline std::vector<Rational> random_simplex_point(std::mt19937_64& rng, int n, int den = 60) {
  std::vector<int> cuts{0, den};
  for (int l = 0; l + 1 < n; ++l) cuts.push_back(std::uniform_int_distribution<int>(0, den)(rng));
  std::sort(cuts.begin(), cuts.end());
  std::vector<Rational> t;
  for (int l = 0; l < n; ++l) t.push_back(make_rational(cuts[l + 1] - cuts[l], den));
  return t;
}

/// Brute-force maximum and argmax set of the objective.
struct BruteOptimum {
  LexCost value;
  std::vector<Allocation> argmax;
};

inline BruteOptimum brute_optimum(const NormalizedInstance& inst, const SlotGraph& g,
                                  const std::vector<LexCost>& costs) {
  BruteOptimum out;
  bool first = true;
  for_each_feasible(inst.padded, [&](const Allocation& a) {
    const LexCost v = allocation_value<LexCost>(g, costs, a);
    if (first || out.value < v) {
      out.value = v;
      out.argmax.clear();
      first = false;
    }
    if (v == out.value) out.argmax.push_back(a);
  });
  std::sort(out.argmax.begin(), out.argmax.end());
  return out;
}

inline std::vector<Allocation> sorted(std::vector<Allocation> v) {
  std::sort(v.begin(), v.end());
  return v;
}

/// Optima at a simplex point via face probing and enumeration.
inline std::vector<Allocation> optima_at(const NormalizedInstance& inst, const std::vector<Rational>& t,
                                         const CostModel& model = CostModel::lex()) {
  const SlotGraph g = build_slot_graph(inst);
  const auto w = shrink_weights(t, compute_K(inst), inst.num_agents());
  const auto costs = edge_costs(inst, g, w, model);
  const auto report = probe_face<LexCost>(g, costs);
  return enumerate_optima<LexCost>(g, costs, report);
}

}  // namespace fairalloc::test_support
