#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "fairalloc/cycles.hpp"
#include "fairalloc/instance.hpp"
#include "fairalloc/lex_cost.hpp"
#include "fairalloc/perturbation.hpp"

// The cycle hyperplanes pulled back to weight space. Along the weight curve
// c_e(t) = t'_i u_i(j) + eps_e, the alternating cycle sum is
//   (1/K) [ sum_i a_i + (K - n) sum_i a_i t_i ] + eps_C,
// with a_i the signed utility sum of agent i's edges on the cycle and eps_C
// the alternating sum of the edge perturbations. Using sum_l t_l = 1 this is
// the hyperplane  sum_l (A + (K - n) a_l) t_l = -K eps_C,  A = sum_i a_i.

namespace fairalloc {

/// { t : sum_l coef_l t_l = rhs } in weight coordinates.
struct WeightHyperplane {
  std::vector<Rational> coef;
  LexCost rhs;
};

inline WeightHyperplane weight_hyperplane(const Instance& inst, const SlotGraph& g, const CycleHyperplane& hp,
                                          const BigInt& K, const CostModel& model) {
  const int n = inst.num_agents();
  std::vector<Rational> a(static_cast<std::size_t>(n), Rational(0));
  LexCost eps_cycle;
  for (std::size_t k = 0; k < hp.cycle.size(); ++k) {
    const Edge& e = g.edge(hp.cycle[k]);
    const int sigma = k % 2 == 0 ? 1 : -1;
    a[e.agent] += sigma * inst.utility(e.agent, e.item);
    LexCost term = model.epsilon_term(e.rank);
    if (sigma > 0) {
      eps_cycle += term;
    } else {
      eps_cycle -= term;
    }
  }
  Rational total = 0;
  for (const auto& x : a) total += x;
  WeightHyperplane out;
  out.coef.reserve(static_cast<std::size_t>(n));
  for (const auto& x : a) out.coef.push_back(total + Rational(K - n) * x);
  out.rhs = eps_cycle * Rational(-K);
  return out;
}

namespace detail {

/// Gauss-Jordan inverse; nullopt when singular.
inline std::optional<std::vector<std::vector<Rational>>> invert(std::vector<std::vector<Rational>> m) {
  const std::size_t n = m.size();
  std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t k = 0; k < n; ++k) inv[k][k] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m[pivot][col] == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    std::swap(m[pivot], m[col]);
    std::swap(inv[pivot], inv[col]);
    const Rational scale = Rational(1) / m[col][col];
    for (std::size_t c = 0; c < n; ++c) {
      m[col][c] *= scale;
      inv[col][c] *= scale;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col] == 0) continue;
      const Rational f = m[r][col];
      for (std::size_t c = 0; c < n; ++c) {
        m[r][c] -= f * m[col][c];
        inv[r][c] -= f * inv[col][c];
      }
    }
  }
  return inv;
}

/// Intersection of the simplex's affine hull with `planes` (n-1 of them),
/// if it is a single point inside the simplex.
inline std::optional<std::vector<LexCost>> intersect(const std::vector<const WeightHyperplane*>& planes, int n) {
  std::vector<std::vector<Rational>> m;
  std::vector<const LexCost*> rhs;
  const LexCost one(1);
  m.emplace_back(static_cast<std::size_t>(n), Rational(1));
  rhs.push_back(&one);
  for (const auto* p : planes) {
    m.push_back(p->coef);
    rhs.push_back(&p->rhs);
  }
  auto inv = invert(std::move(m));
  if (!inv) return std::nullopt;
  // cheap rejection on the base part before forming the infinitesimal part
  for (int l = 0; l < n; ++l) {
    Rational base = 0;
    for (int k = 0; k < n; ++k) base += (*inv)[l][k] * rhs[k]->base();
    if (base < 0) return std::nullopt;
  }
  std::vector<LexCost> t(static_cast<std::size_t>(n));
  for (int l = 0; l < n; ++l) {
    for (int k = 0; k < n; ++k) {
      if ((*inv)[l][k] != 0 && !rhs[k]->is_zero()) t[l] += *rhs[k] * (*inv)[l][k];
    }
    if (t[l].sign() < 0) return std::nullopt;
  }
  return t;
}

}  // namespace detail

/// Vertices of the arrangement cut out on the weight simplex by the cycle
/// hyperplanes, including simplex corners and boundary crossings: every
/// point fixed by n-1 of the hyperplanes / facets {t_i = 0} together with
/// sum t = 1. Deduplicated, sorted lexicographically by t.
inline std::vector<WeightPoint> arrangement_vertices(const std::vector<CycleHyperplane>& hps,
                                                     const NormalizedInstance& inst, const BigInt& K,
                                                     const CostModel& model) {
  const int n = inst.num_agents();
  const SlotGraph g = build_slot_graph(inst);
  std::vector<WeightHyperplane> planes;
  planes.reserve(hps.size() + static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    WeightHyperplane facet;
    facet.coef.assign(static_cast<std::size_t>(n), Rational(0));
    facet.coef[i] = 1;
    planes.push_back(std::move(facet));
  }
  for (const auto& hp : hps) {
    auto plane = weight_hyperplane(inst.padded, g, hp, K, model);
    // a normal parallel to (1,...,1) never meets the simplex at a single point
    const bool flat = std::all_of(plane.coef.begin(), plane.coef.end(),
                                  [&](const Rational& c) { return c == plane.coef.front(); });
    if (!flat) planes.push_back(std::move(plane));
  }

  std::vector<std::vector<LexCost>> points;
  const int choose = n - 1;
  std::vector<int> pick(static_cast<std::size_t>(choose));
  std::vector<const WeightHyperplane*> chosen(static_cast<std::size_t>(choose));
  const int total = static_cast<int>(planes.size());
  auto recurse = [&](auto&& self, int depth, int start) -> void {
    if (depth == choose) {
      if (auto t = detail::intersect(chosen, n)) points.push_back(std::move(*t));
      return;
    }
    for (int p = start; p < total; ++p) {
      chosen[depth] = &planes[p];
      self(self, depth + 1, p + 1);
    }
  };
  recurse(recurse, 0, 0);

  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  std::vector<WeightPoint> out;
  out.reserve(points.size());
  for (auto& t : points) out.push_back(shrink_weights(std::move(t), K, n));
  return out;
}

/// Two-agent specialization: every cycle hyperplane is a breakpoint on the
/// segment t_2 = 1 - t_1, solved directly from the scalar equation
///   t_1 (b_1 - b_2) = rhs - b_2.
/// Returns the breakpoints in [0, 1] plus both endpoints, ascending in t_1.
inline std::vector<WeightPoint> two_agent_breakpoints(const std::vector<CycleHyperplane>& hps,
                                                      const NormalizedInstance& inst, const BigInt& K,
                                                      const CostModel& model) {
  if (inst.num_agents() != 2) throw std::invalid_argument("two-agent sweep needs exactly two agents");
  const SlotGraph g = build_slot_graph(inst);
  std::vector<LexCost> t1{LexCost(0), LexCost(1)};
  for (const auto& hp : hps) {
    const auto plane = weight_hyperplane(inst.padded, g, hp, K, model);
    const Rational slope = plane.coef[0] - plane.coef[1];
    if (slope == 0) continue;
    LexCost x = (plane.rhs - LexCost(plane.coef[1])) / slope;
    if (x.sign() >= 0 && !(LexCost(1) < x)) t1.push_back(std::move(x));
  }
  std::sort(t1.begin(), t1.end());
  t1.erase(std::unique(t1.begin(), t1.end()), t1.end());
  std::vector<WeightPoint> out;
  out.reserve(t1.size());
  for (auto& x : t1) out.push_back(shrink_weights(std::vector<LexCost>{x, LexCost(1) - x}, K, 2));
  return out;
}

}  // namespace fairalloc
