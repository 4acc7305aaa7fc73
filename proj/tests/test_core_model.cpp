#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace fairalloc;

namespace {

Instance one_category(int n, std::vector<std::vector<std::int64_t>> u, int capacity) {
  std::vector<int> items;
  for (std::size_t j = 0; j < u.front().size(); ++j) items.push_back(static_cast<int>(j));
  return Instance(n, std::move(u), {Category{items, capacity}});
}

}  // namespace

TEST(Instance, MinimalInstanceIsValid) {
  const Instance inst(1, {{5}}, {Category{{0}, 1}});
  EXPECT_EQ(inst.num_agents(), 1);
  EXPECT_EQ(inst.num_items(), 1);
  EXPECT_EQ(inst.utility(0, 0), 5);
}

TEST(Instance, RejectsOverlappingCategories) {
  try {
    Instance(2, {{1, 1}, {1, 1}}, {Category{{0}, 1}, Category{{0, 1}, 1}});
    FAIL() << "expected InstanceError";
  } catch (const InstanceError& e) {
    EXPECT_NE(std::string(e.what()).find("categories overlap"), std::string::npos);
  }
}

TEST(Instance, RejectsCategoryLargerThanTotalCapacity) {
  EXPECT_THROW(one_category(2, {{1, 2, 3}, {1, 2, 3}}, 1), InstanceError);
}

TEST(Instance, RejectsIncompletePartitionAndBadCapacity) {
  EXPECT_THROW(Instance(2, {{1, 2}, {1, 2}}, {Category{{0}, 1}}), InstanceError);
  EXPECT_THROW(Instance(2, {{1, 2}, {1, 2}}, {Category{{0, 1}, 0}}), InstanceError);
  EXPECT_THROW(Instance(2, {{1, 2}, {1, 2}}, {Category{{0, 5}, 1}}), InstanceError);
  EXPECT_THROW(Instance(0, {}, {}), InstanceError);
}

TEST(Normalize, PadsShortCategory) {
  const auto norm = normalize(Instance(2, {{4}, {7}}, {Category{{0}, 1}}));
  EXPECT_EQ(norm.num_items(), 2);
  EXPECT_EQ(norm.padded.category(0).items.size(), 2u);
  EXPECT_TRUE(norm.is_dummy(1));
  EXPECT_EQ(norm.padded.utility(0, 1), 0);
  EXPECT_EQ(norm.padded.utility(1, 1), 0);
}

TEST(Normalize, FullCategoriesAreUnchanged) {
  const Instance inst = one_category(2, {{1, 2}, {3, 4}}, 1);
  const auto norm = normalize(inst);
  EXPECT_EQ(norm.padded, inst);
  EXPECT_EQ(norm.num_items(), norm.num_base_items());
}

TEST(Normalize, DummiesFollowCategoryOrder) {
  const Instance inst(3, {{1, 2, 3, 4, 5}, {1, 2, 3, 4, 5}, {1, 2, 3, 4, 5}},
                      {Category{{0, 1}, 1}, Category{{2, 3, 4}, 1}});
  const auto norm = normalize(inst);
  EXPECT_EQ(norm.num_items(), 6);
  EXPECT_EQ(norm.padded.category(0).items, (std::vector<int>{0, 1, 5}));
  EXPECT_EQ(norm.padded.category(1).items, (std::vector<int>{2, 3, 4}));
}

TEST(Feasibility, CapacityChecks) {
  const auto norm = normalize(one_category(2, {{1, 2}, {3, 4}}, 1));
  EXPECT_TRUE(is_feasible(norm, Allocation::from_bundles(2, {{0}, {1}})));
  EXPECT_FALSE(is_feasible(norm, Allocation::from_bundles(2, {{0, 1}, {}})));
  const auto single = normalize(one_category(1, {{1, 2, 3}}, 3));
  EXPECT_TRUE(is_feasible(single, Allocation::from_bundles(3, {{0, 1, 2}})));
}

TEST(Feasibility, UnknownAgentOrWrongSizeThrows) {
  const auto norm = normalize(one_category(2, {{1, 2}, {3, 4}}, 1));
  EXPECT_THROW(is_feasible(norm, Allocation(std::vector<int>{0, 5})), InstanceError);
  EXPECT_THROW(is_feasible(norm, Allocation(std::vector<int>{0})), InstanceError);
}

TEST(BundleUtility, IsAdditive) {
  const auto norm = normalize(Instance(2, {{3, 1, 0}, {1, 3, 0}}, {Category{{0, 1, 2}, 2}}));
  const std::vector<int> both{0, 1};
  EXPECT_EQ(bundle_utility(norm.padded, 0, both), 4);
  EXPECT_EQ(bundle_utility(norm.padded, 0, std::vector<int>{}), 0);
  const std::vector<int> dummy{3};
  EXPECT_EQ(bundle_utility(norm.padded, 0, dummy), 0);
}

TEST(SlotGraph, TwoByTwoStructureAndRanks) {
  const auto norm = normalize(one_category(2, {{1, 2}, {3, 4}}, 1));
  const SlotGraph g = build_slot_graph(norm);
  ASSERT_EQ(g.num_edges(), 4);
  EXPECT_EQ(g.edge(g.edge_index(0, 0)).rank, 1);
  EXPECT_EQ(g.edge(g.edge_index(1, 0)).rank, 2);
  EXPECT_EQ(g.edge(g.edge_index(0, 1)).rank, 3);
  EXPECT_EQ(g.edge(g.edge_index(1, 1)).rank, 4);
}

TEST(SlotGraph, SingleAgentRanksFollowItems) {
  const auto norm = normalize(one_category(1, {{1, 2, 3}}, 3));
  const SlotGraph g = build_slot_graph(norm);
  ASSERT_EQ(g.num_edges(), 3);
  for (int j = 0; j < 3; ++j) EXPECT_EQ(g.edge(g.edge_index(0, j)).rank, j + 1);
}

TEST(SlotGraphProperty, EveryItemHasDegreeNAndRanksAreABijection) {
  std::mt19937_64 rng(101);
  for (int it = 0; it < 50; ++it) {
    const auto norm = normalize(test_support::random_instance(rng));
    const SlotGraph g = build_slot_graph(norm);
    const SlotGraph again = build_slot_graph(norm);
    const int n = norm.num_agents();
    ASSERT_EQ(g.num_edges(), n * norm.num_items());
    std::vector<int> seen(static_cast<std::size_t>(g.num_edges()) + 1, 0);
    std::vector<int> degree(static_cast<std::size_t>(norm.num_items()), 0);
    for (int e = 0; e < g.num_edges(); ++e) {
      ++seen[g.edge(e).rank];
      ++degree[g.edge(e).item];
      EXPECT_EQ(g.edge(e).rank, again.edge(e).rank);
      EXPECT_EQ(g.edge(e).category, norm.padded.category_of(g.edge(e).item));
    }
    for (int r = 1; r <= g.num_edges(); ++r) EXPECT_EQ(seen[r], 1);
    for (int d : degree) EXPECT_EQ(d, n);
  }
}

TEST(NormalizeProperty, FeasibleAllocationsFillEverySlotAndStripCleanly) {
  std::mt19937_64 rng(202);
  for (int it = 0; it < 30; ++it) {
    const Instance inst = test_support::random_instance(rng);
    const auto norm = normalize(inst);
    int per_agent = 0;
    for (const auto& c : norm.padded.categories()) {
      EXPECT_EQ(static_cast<int>(c.items.size()), inst.num_agents() * c.capacity);
      per_agent += c.capacity;
    }
    for (const auto& a : enumerate_feasible(norm)) {
      for (int i = 0; i < inst.num_agents(); ++i) {
        EXPECT_EQ(static_cast<int>(a.bundle(i).size()), per_agent);
      }
      const Allocation base = strip_dummies(norm, a);
      EXPECT_TRUE(is_feasible(inst, base));
      for (int i = 0; i < inst.num_agents(); ++i)
        EXPECT_EQ(utility_of_bundle(inst, base, i, i), utility_of_bundle(norm.padded, a, i, i));
    }
  }
}
