#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fairalloc/errors.hpp"
#include "fairalloc/instance.hpp"
#include "fairalloc/lex_cost.hpp"
#include "fairalloc/rational.hpp"

namespace fairalloc {

/// K = n * sum_i sum_j |u_i(j)| + 1.
inline BigInt compute_K(const Instance& inst) {
  BigInt total = 0;
  for (const auto& row : inst.utilities())
    for (auto u : row) total += u < 0 ? -u : u;
  return BigInt(inst.num_agents()) * total + 1;
}

inline BigInt compute_K(const NormalizedInstance& inst) { return compute_K(inst.padded); }

/// A point t of the standard simplex and its shrunken image
/// t'_i = (1 + (K - n) t_i) / K. Coordinates may carry infinitesimal parts
/// when the point was solved from perturbed hyperplanes.
struct WeightPoint {
  std::vector<LexCost> t;
  std::vector<LexCost> t_prime;

  friend bool operator==(const WeightPoint& a, const WeightPoint& b) { return a.t == b.t; }
  friend std::strong_ordering operator<=>(const WeightPoint& a, const WeightPoint& b) {
    for (std::size_t i = 0; i < std::min(a.t.size(), b.t.size()); ++i) {
      if (auto c = a.t[i] <=> b.t[i]; c != 0) return c;
    }
    return a.t.size() <=> b.t.size();
  }
};

inline bool in_simplex(const std::vector<LexCost>& t) {
  LexCost total;
  for (const auto& x : t) {
    if (x.sign() < 0) return false;
    total += x;
  }
  return !t.empty() && total == LexCost(1);
}

inline WeightPoint shrink_weights(std::vector<LexCost> t, const BigInt& K, int n) {
  if (static_cast<int>(t.size()) != n || !in_simplex(t)) {
    throw std::invalid_argument("weight point is not in the standard simplex");
  }
  WeightPoint w;
  w.t_prime.reserve(t.size());
  const Rational scale = make_rational(K - n, K);
  const Rational offset = make_rational(1, K);
  for (const auto& ti : t) w.t_prime.push_back(LexCost(offset) + ti * scale);
  w.t = std::move(t);
  return w;
}

inline WeightPoint shrink_weights(const std::vector<Rational>& t, const BigInt& K, int n) {
  return shrink_weights(std::vector<LexCost>(t.begin(), t.end()), K, n);
}

/// Explicit rational perturbation eps_s = (alpha / (d theta))^s, s = 1..d.
struct EpsilonSpec {
  Rational alpha;
  int d = 0;
  BigInt theta_prime;
  Rational theta;
  std::vector<Rational> eps;  // eps[s-1] = eps_s

  const Rational& at_rank(int rank) const { return eps[static_cast<std::size_t>(rank - 1)]; }
};

inline EpsilonSpec make_epsilon(const Rational& alpha, int d, const BigInt& theta_prime) {
  EpsilonSpec spec;
  spec.alpha = alpha;
  spec.d = d;
  spec.theta_prime = theta_prime;
  spec.theta = theta_prime > 2 ? Rational(theta_prime) : Rational(2);
  const Rational base = d > 0 ? alpha / (Rational(d) * spec.theta) : Rational(0);
  Rational power = 1;
  spec.eps.reserve(static_cast<std::size_t>(d));
  for (int s = 1; s <= d; ++s) {
    power *= base;
    spec.eps.push_back(power);
  }
  return spec;
}

/// (q+1)! ((r+1)!)^q ||C||^q with q = n - 1, r = m + n k, ||M|| = 1.
inline BigInt theta_prime_bound(const NormalizedInstance& inst) {
  const Instance& p = inst.padded;
  const unsigned q = static_cast<unsigned>(p.num_agents() - 1);
  const unsigned r = static_cast<unsigned>(p.num_items() + p.num_agents() * p.num_categories());
  const BigInt norm_c = std::max<std::int64_t>(1, p.max_abs_utility());
  return factorial(q + 1) * boost::multiprecision::pow(factorial(r + 1), q) *
         boost::multiprecision::pow(norm_c, q);
}

/// Largest alpha allowed for explicit mode: 1 / (K n^2 m).
inline Rational alpha_upper_bound(const NormalizedInstance& inst) {
  const BigInt n = inst.num_agents();
  const BigInt m = std::max(1, inst.num_items());
  return make_rational(1, compute_K(inst) * n * n * m);
}

/// Default alpha = 1 / (K n^2 m + 1).
inline Rational default_alpha(const NormalizedInstance& inst) {
  const BigInt n = inst.num_agents();
  const BigInt m = std::max(1, inst.num_items());
  return make_rational(1, compute_K(inst) * n * n * m + 1);
}

inline EpsilonSpec epsilon_explicit(const NormalizedInstance& inst, const Rational& alpha) {
  if (alpha <= 0 || alpha >= 1 || alpha > alpha_upper_bound(inst)) {
    throw std::invalid_argument("alpha must lie in (0, 1/(K n^2 m)], got " + to_string(alpha));
  }
  const int d = inst.num_agents() * inst.num_items();
  return make_epsilon(alpha, d, theta_prime_bound(inst));
}

enum class EpsilonMode { lex, explicit_, none };

inline std::string to_string(EpsilonMode mode) {
  switch (mode) {
    case EpsilonMode::lex: return "lex";
    case EpsilonMode::explicit_: return "explicit";
    case EpsilonMode::none: return "none";
  }
  return "?";
}

/// How the eps_ij term of the objective is realized. `none` drops it
/// (unperturbed objective, used by the grid heuristic).
struct CostModel {
  EpsilonMode mode = EpsilonMode::lex;
  std::optional<EpsilonSpec> eps;

  static CostModel lex() { return {}; }
  static CostModel unperturbed() { return {EpsilonMode::none, std::nullopt}; }
  static CostModel explicit_with(EpsilonSpec spec) { return {EpsilonMode::explicit_, std::move(spec)}; }

  /// The perturbation term eps_rank as a value of the cost group.
  LexCost epsilon_term(int rank) const {
    switch (mode) {
      case EpsilonMode::lex: return LexCost::epsilon(rank);
      case EpsilonMode::explicit_: return LexCost(eps->at_rank(rank));
      case EpsilonMode::none: return LexCost();
    }
    return LexCost();
  }
};

/// c_e = t'_i u_i(j) + eps_rank(e).
inline LexCost edge_cost(const Instance& inst, const Edge& e, const WeightPoint& w,
                         const CostModel& model) {
  LexCost out = w.t_prime[static_cast<std::size_t>(e.agent)] * Rational(inst.utility(e.agent, e.item));
  out += model.epsilon_term(e.rank);
  return out;
}

inline std::vector<LexCost> edge_costs(const NormalizedInstance& inst, const SlotGraph& g,
                                       const WeightPoint& w, const CostModel& model) {
  std::vector<LexCost> out;
  out.reserve(static_cast<std::size_t>(g.num_edges()));
  for (const auto& e : g.edges()) out.push_back(edge_cost(inst.padded, e, w, model));
  return out;
}

/// Substitutes explicit eps values into a lexicographic value.
inline Rational realize(const LexCost& value, const EpsilonSpec& spec) {
  Rational out = value.base();
  for (const auto& [rank, coef] : value.pert()) out += coef * spec.at_rank(rank);
  return out;
}

}  // namespace fairalloc
