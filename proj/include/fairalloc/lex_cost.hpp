#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fairalloc/rational.hpp"

namespace fairalloc {

/// A value `base + sum_s coef_s * eps_s` where the eps_s are infinitesimals
/// with eps_1 >> eps_2 >> ... > 0. Ordering is lexicographic: base first,
/// then the coefficient at the smallest rank where two values differ. This
/// is the sign rule of a low-degree polynomial in a small enough variable.
///
/// Coefficients are rational so that weight points solved from perturbed
/// hyperplanes live in the same group as edge costs.
class LexCost {
 public:
  using Term = std::pair<std::int32_t, Rational>;

  LexCost() = default;
  LexCost(Rational base) : base_(std::move(base)) {}  // NOLINT: implicit by design of the group
  LexCost(std::int64_t base) : base_(base) {}         // NOLINT
  LexCost(Rational base, std::vector<Term> pert) : base_(std::move(base)), pert_(std::move(pert)) {
    normalize();
  }

  static LexCost epsilon(std::int32_t rank, Rational coef = 1) {
    LexCost out;
    if (coef != 0) {
      out.pert_.emplace_back(rank, std::move(coef));
    }
    return out;
  }

  const Rational& base() const { return base_; }
  std::span<const Term> pert() const { return pert_; }
  bool is_rational() const { return pert_.empty(); }
  bool is_zero() const { return base_ == 0 && pert_.empty(); }

  Rational coefficient(std::int32_t rank) const {
    auto it = std::lower_bound(pert_.begin(), pert_.end(), rank,
                               [](const Term& t, std::int32_t r) { return t.first < r; });
    return (it != pert_.end() && it->first == rank) ? it->second : Rational(0);
  }

  /// Sign under the lexicographic rule: -1, 0 or +1.
  int sign() const {
    if (base_ != 0) return base_.sign();
    return pert_.empty() ? 0 : pert_.front().second.sign();
  }

  LexCost& operator+=(const LexCost& other) {
    base_ += other.base_;
    merge(other.pert_, 1);
    return *this;
  }

  LexCost& operator-=(const LexCost& other) {
    base_ -= other.base_;
    merge(other.pert_, -1);
    return *this;
  }

  LexCost& operator*=(const Rational& scalar) {
    if (scalar == 0) {
      base_ = 0;
      pert_.clear();
      return *this;
    }
    base_ *= scalar;
    for (auto& term : pert_) term.second *= scalar;
    return *this;
  }

  LexCost& operator/=(const Rational& scalar) { return *this *= Rational(1) / scalar; }

  friend LexCost operator+(LexCost a, const LexCost& b) { return a += b; }
  friend LexCost operator-(LexCost a, const LexCost& b) { return a -= b; }
  friend LexCost operator*(LexCost a, const Rational& s) { return a *= s; }
  friend LexCost operator*(const Rational& s, LexCost a) { return a *= s; }
  friend LexCost operator/(LexCost a, const Rational& s) { return a /= s; }
  friend LexCost operator-(LexCost a) {
    a.base_ = -a.base_;
    for (auto& term : a.pert_) term.second = -term.second;
    return a;
  }

  friend bool operator==(const LexCost& a, const LexCost& b) {
    return a.base_ == b.base_ && a.pert_ == b.pert_;
  }

  friend std::strong_ordering operator<=>(const LexCost& a, const LexCost& b) {
    if (a.base_ != b.base_) {
      return a.base_ < b.base_ ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    // walk both sorted term lists; the first rank where coefficients differ decides
    auto ia = a.pert_.begin();
    auto ib = b.pert_.begin();
    while (ia != a.pert_.end() || ib != b.pert_.end()) {
      if (ib == b.pert_.end() || (ia != a.pert_.end() && ia->first < ib->first)) {
        return ia->second > 0 ? std::strong_ordering::greater : std::strong_ordering::less;
      }
      if (ia == a.pert_.end() || ib->first < ia->first) {
        return ib->second > 0 ? std::strong_ordering::less : std::strong_ordering::greater;
      }
      if (ia->second != ib->second) {
        return ia->second < ib->second ? std::strong_ordering::less
                                       : std::strong_ordering::greater;
      }
      ++ia;
      ++ib;
    }
    return std::strong_ordering::equal;
  }

  std::string to_string() const {
    std::string out = fairalloc::to_string(base_);
    for (const auto& [rank, coef] : pert_) {
      out += " + (" + fairalloc::to_string(coef) + ")e" + std::to_string(rank);
    }
    return out;
  }

 private:
  void normalize() {
    std::sort(pert_.begin(), pert_.end(),
              [](const Term& x, const Term& y) { return x.first < y.first; });
    std::vector<Term> merged;
    merged.reserve(pert_.size());
    for (auto& term : pert_) {
      if (!merged.empty() && merged.back().first == term.first) {
        merged.back().second += term.second;
      } else {
        merged.push_back(std::move(term));
      }
    }
    std::erase_if(merged, [](const Term& t) { return t.second == 0; });
    pert_ = std::move(merged);
  }

  void merge(const std::vector<Term>& other, int factor) {
    if (other.empty()) return;
    std::vector<Term> out;
    out.reserve(pert_.size() + other.size());
    auto ia = pert_.begin();
    auto ib = other.begin();
    while (ia != pert_.end() || ib != other.end()) {
      if (ib == other.end() || (ia != pert_.end() && ia->first < ib->first)) {
        out.push_back(std::move(*ia++));
      } else if (ia == pert_.end() || ib->first < ia->first) {
        out.emplace_back(ib->first, factor > 0 ? ib->second : Rational(-ib->second));
        ++ib;
      } else {
        Rational sum = factor > 0 ? ia->second + ib->second : ia->second - ib->second;
        if (sum != 0) out.emplace_back(ia->first, std::move(sum));
        ++ia;
        ++ib;
      }
    }
    pert_ = std::move(out);
  }

  Rational base_{0};
  std::vector<Term> pert_;  // sorted by rank, no zero coefficients
};

inline LexCost lex_add(const LexCost& a, const LexCost& b) { return a + b; }

inline std::strong_ordering lex_compare(const LexCost& a, const LexCost& b) { return a <=> b; }

}  // namespace fairalloc
