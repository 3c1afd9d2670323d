#pragma once

// Exact integer and rational types shared by every module, plus the string
// forms used at serialization boundaries ("num/den", reduced, den > 0).

#include <boost/multiprecision/gmp.hpp>

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>

#include "balchain/errors.hpp"

namespace balchain {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

inline std::string to_string(const Integer& value) { return value.str(); }

/// Renders as "num/den", or just "num" when the denominator is 1.
inline std::string to_string(const Rational& value) { return value.str(); }

inline Integer numerator(const Rational& value) {
  return boost::multiprecision::numerator(value);
}
inline Integer denominator(const Rational& value) {
  return boost::multiprecision::denominator(value);
}

inline Integer parse_integer(std::string_view text) {
  std::string_view digits = text;
  if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) {
    digits.remove_prefix(1);
  }
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string_view::npos) {
    throw ParameterError("not an integer: '" + std::string(text) + "'");
  }
  if (text.front() == '+') text.remove_prefix(1);
  return Integer(std::string(text));
}

/// Accepts "num/den" or "num". The result is always reduced.
inline Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text));
  const Integer num = parse_integer(text.substr(0, slash));
  const Integer den = parse_integer(text.substr(slash + 1));
  if (den == 0) throw ParameterError("zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

inline double to_double(const Rational& value) { return value.convert_to<double>(); }

/// Shortest decimal that round-trips to the same double.
inline std::string format_double(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

inline Rational abs(const Rational& value) { return value < 0 ? Rational(-value) : value; }

}  // namespace balchain
