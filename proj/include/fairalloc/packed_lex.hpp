#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "fairalloc/lex_cost.hpp"

namespace fairalloc {

/// Dense fixed-width image of a LexCost family after scaling every member by
/// one common positive integer: slot 0 holds the base, slot s the coefficient
/// of eps_s. Same ordered group, machine integers. Missing trailing slots are
/// zero, so a default-constructed value is the identity.
class PackedLex {
 public:
  using Storage = boost::container::small_vector<std::int64_t, 32>;

  PackedLex() = default;
  explicit PackedLex(Storage coefs) : c_(std::move(coefs)) {}

  std::span<const std::int64_t> coefficients() const { return {c_.data(), c_.size()}; }

  PackedLex& operator+=(const PackedLex& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
  }
  PackedLex& operator-=(const PackedLex& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    return *this;
  }
  friend PackedLex operator+(PackedLex a, const PackedLex& b) { return a += b; }
  friend PackedLex operator-(PackedLex a, const PackedLex& b) { return a -= b; }
  friend PackedLex operator-(PackedLex a) {
    for (auto& v : a.c_) v = -v;
    return a;
  }

  friend std::strong_ordering operator<=>(const PackedLex& a, const PackedLex& b) {
    const std::size_t n = std::max(a.c_.size(), b.c_.size());
    for (std::size_t k = 0; k < n; ++k) {
      const std::int64_t x = k < a.c_.size() ? a.c_[k] : 0;
      const std::int64_t y = k < b.c_.size() ? b.c_[k] : 0;
      if (x != y) return x <=> y;
    }
    return std::strong_ordering::equal;
  }
  friend bool operator==(const PackedLex& a, const PackedLex& b) {
    return (a <=> b) == std::strong_ordering::equal;
  }

 private:
  Storage c_;
};

/// Scales `costs` by the least common denominator and packs them densely.
/// Returns nullopt when any scaled coefficient exceeds 2^40 in magnitude:
/// sums of up to 2^22 such terms then stay inside int64.
inline std::optional<std::vector<PackedLex>> pack_costs(std::span<const LexCost> costs) {
  BigInt common = 1;
  std::int32_t width = 0;
  for (const auto& c : costs) {
    common = lcm(common, denominator_of(c.base()));
    for (const auto& [rank, coef] : c.pert()) {
      common = lcm(common, denominator_of(coef));
      width = std::max(width, rank);
    }
  }
  const BigInt limit = BigInt(1) << 40;
  auto scaled = [&](const Rational& r) -> std::optional<std::int64_t> {
    BigInt v = numerator_of(r) * (common / denominator_of(r));
    if (abs(v) > limit) return std::nullopt;
    return v.convert_to<std::int64_t>();
  };
  std::vector<PackedLex> out;
  out.reserve(costs.size());
  for (const auto& c : costs) {
    PackedLex::Storage coefs(static_cast<std::size_t>(width) + 1, 0);
    auto b = scaled(c.base());
    if (!b) return std::nullopt;
    coefs[0] = *b;
    for (const auto& [rank, coef] : c.pert()) {
      auto v = scaled(coef);
      if (!v) return std::nullopt;
      coefs[static_cast<std::size_t>(rank)] = *v;
    }
    out.emplace_back(std::move(coefs));
  }
  return out;
}

}  // namespace fairalloc
