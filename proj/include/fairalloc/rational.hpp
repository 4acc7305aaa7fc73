#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace fairalloc {

using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;
/// Exact rational, always in lowest terms with a positive denominator.
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend, boost::multiprecision::et_off>;

inline Rational make_rational(const BigInt& num, const BigInt& den = 1) {
  if (den == 0) {
    throw std::invalid_argument("rational with zero denominator");
  }
  // the two-argument constructor rejects negative denominators
  return Rational(num) / Rational(den);
}

inline const BigInt numerator_of(const Rational& r) {
  return boost::multiprecision::numerator(r);
}

inline const BigInt denominator_of(const Rational& r) {
  return boost::multiprecision::denominator(r);
}

inline int sign(const Rational& r) { return r.sign(); }

namespace detail {

inline BigInt parse_integer(std::string_view text) {
  std::size_t pos = 0;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) {
    pos = 1;
  }
  if (pos == text.size()) {
    throw std::invalid_argument("malformed integer '" + std::string(text) + "'");
  }
  for (std::size_t k = pos; k < text.size(); ++k) {
    if (text[k] < '0' || text[k] > '9') {
      throw std::invalid_argument("malformed integer '" + std::string(text) + "'");
    }
  }
  BigInt value(std::string(text.substr(pos)));
  return text[0] == '-' ? BigInt(-value) : value;
}

}  // namespace detail

/// Parses "p/q" or "p".
inline Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    return Rational(detail::parse_integer(text));
  }
  return make_rational(detail::parse_integer(text.substr(0, slash)),
                       detail::parse_integer(text.substr(slash + 1)));
}

/// Always "p/q", including integers ("3/1").
inline std::string to_string(const Rational& r) {
  return numerator_of(r).str() + "/" + denominator_of(r).str();
}

inline BigInt lcm(const BigInt& a, const BigInt& b) {
  return boost::multiprecision::lcm(a, b);
}

inline BigInt factorial(unsigned n) {
  BigInt result = 1;
  for (unsigned k = 2; k <= n; ++k) {
    result *= k;
  }
  return result;
}

}  // namespace fairalloc
