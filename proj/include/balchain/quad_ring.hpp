#pragma once

// Exact arithmetic in Z[sqrt 2] and Q[sqrt 2]. beta = 3 - 2 sqrt 2 is the
// limiting ratio B_{n-1}/B_n and a unit of norm 1. Decimal rendering goes
// through an integer square root of 2 * 10^(2d), so every printed bound is a
// certified enclosure rather than a floating-point estimate.

#include <algorithm>
#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "balchain/numeric.hpp"
#include "balchain/sequences.hpp"

namespace balchain {

inline constexpr unsigned kDefaultDigits = 50;

/// a + b sqrt 2 with coefficients in T (Integer for Z[sqrt 2], Rational for Q[sqrt 2]).
template <typename T>
struct QuadNumber {
  T a{0};
  T b{0};

  QuadNumber() = default;
  QuadNumber(T a_, T b_) : a(std::move(a_)), b(std::move(b_)) {}
  explicit QuadNumber(T a_) : a(std::move(a_)) {}

  QuadNumber conjugate() const { return {a, -b}; }
  T norm() const { return a * a - 2 * b * b; }

  friend QuadNumber operator+(const QuadNumber& x, const QuadNumber& y) { return {x.a + y.a, x.b + y.b}; }
  friend QuadNumber operator-(const QuadNumber& x, const QuadNumber& y) { return {x.a - y.a, x.b - y.b}; }
  friend QuadNumber operator-(const QuadNumber& x) { return {-x.a, -x.b}; }
  friend QuadNumber operator*(const QuadNumber& x, const QuadNumber& y) {
    return {x.a * y.a + 2 * x.b * y.b, x.a * y.b + y.a * x.b};
  }
  friend QuadNumber operator*(const T& s, const QuadNumber& x) { return {s * x.a, s * x.b}; }
  friend bool operator==(const QuadNumber& x, const QuadNumber& y) { return x.a == y.a && x.b == y.b; }

  friend std::ostream& operator<<(std::ostream& os, const QuadNumber& x) {
    os << x.a << (x.b < 0 ? "-" : "+") << (x.b < 0 ? T(-x.b) : x.b) << "*sqrt2";
    return os;
  }
};

using QuadInt = QuadNumber<Integer>;
using QuadRational = QuadNumber<Rational>;

inline QuadRational to_rational(const QuadInt& x) { return {Rational(x.a), Rational(x.b)}; }

inline const QuadInt& beta() {
  static const QuadInt value{3, -2};
  return value;
}

/// 1 + sqrt 2; beta is its inverse square.
inline const QuadInt& silver_ratio() {
  static const QuadInt value{1, 1};
  return value;
}

inline QuadInt qmul(const QuadInt& x, const QuadInt& y) { return x * y; }

inline QuadInt qpow(const QuadInt& x, std::size_t n) {
  QuadInt acc{1, 0};
  for (std::size_t i = 0; i < n; ++i) acc = acc * x;
  return acc;
}

/// Exact sign of a + b sqrt 2.
template <typename T>
int sign(const QuadNumber<T>& x) {
  const int sa = x.a > 0 ? 1 : (x.a < 0 ? -1 : 0);
  const int sb = x.b > 0 ? 1 : (x.b < 0 ? -1 : 0);
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  // Opposite signs: compare a^2 with 2 b^2.
  const T lhs = x.a * x.a;
  const T rhs = 2 * x.b * x.b;
  if (lhs == rhs) return 0;
  return lhs > rhs ? sa : sb;
}

/// Closed interval [lo, hi] * 10^-digits known to contain a value.
struct DecimalEnclosure {
  Integer lo;
  Integer hi;
  unsigned digits;

  Rational lower() const { return Rational(lo, pow10()); }
  Rational upper() const { return Rational(hi, pow10()); }
  /// Certified upper bound on the absolute value.
  Rational abs_upper() const {
    const Integer m = std::max(Integer(abs(lo)), Integer(abs(hi)));
    return Rational(m, pow10());
  }
  Integer pow10() const { return boost::multiprecision::pow(Integer(10), digits); }
};

namespace detail {

inline Integer floor_div(const Integer& num, const Integer& den) {
  // den > 0
  Integer q = num / den;
  if (num < 0 && q * den != num) --q;
  return q;
}

inline Integer floor_rational(const Rational& r) { return floor_div(numerator(r), denominator(r)); }
inline Integer ceil_rational(const Rational& r) { return -floor_div(-numerator(r), denominator(r)); }

/// floor(sqrt(2) * 10^digits).
inline Integer scaled_sqrt2(unsigned digits) {
  const Integer scale = boost::multiprecision::pow(Integer(10), 2 * digits);
  return integer_sqrt(2 * scale).root;
}

}  // namespace detail

/// Outward-rounded decimal enclosure of a + b sqrt 2.
inline DecimalEnclosure enclose(const QuadRational& x, unsigned digits = kDefaultDigits) {
  const Integer scale = boost::multiprecision::pow(Integer(10), digits);
  const Integer s = detail::scaled_sqrt2(digits);  // s <= sqrt2 * scale < s + 1
  const Rational a_scaled = x.a * scale;
  Rational low = a_scaled + x.b * s;
  Rational high = a_scaled + x.b * (s + 1);
  if (low > high) std::swap(low, high);
  if (x.b == 0) low = high = a_scaled;
  return {detail::floor_rational(low), detail::ceil_rational(high), digits};
}

inline DecimalEnclosure enclose(const QuadInt& x, unsigned digits = kDefaultDigits) {
  return enclose(to_rational(x), digits);
}

/// Certified upper bound on |x|; exactly 0 for x == 0.
inline Rational abs_upper_bound(const QuadRational& x, unsigned digits = kDefaultDigits) {
  if (sign(x) == 0) return 0;
  return enclose(x, digits).abs_upper();
}

/// Midpoint of the enclosure as a double, for display and float comparisons.
inline double approximate(const QuadRational& x, unsigned digits = kDefaultDigits) {
  const auto e = enclose(x, digits);
  return to_double((e.lower() + e.upper()) / 2);
}
inline double approximate(const QuadInt& x, unsigned digits = kDefaultDigits) {
  return approximate(to_rational(x), digits);
}

/// Decimal string truncated toward the lower end of the enclosure.
inline std::string to_decimal_string(const QuadRational& x, unsigned digits = kDefaultDigits) {
  const auto e = enclose(x, digits);
  Integer v = e.lo;
  const bool negative = v < 0;
  if (negative) v = -v;
  std::string s = v.str();
  if (s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
  s.insert(s.size() - digits, ".");
  return negative ? "-" + s : s;
}

/// beta^{n+1} == beta * B_{n+1} - B_n, checked exactly in Z[sqrt 2].
inline bool beta_power_identity(std::size_t n) {
  const auto b = sequence(kind::Balancing{}, n + 2);
  const QuadInt lhs = qpow(beta(), n + 1);
  const QuadInt rhs = b[n + 1] * beta() - QuadInt(b[n]);
  return lhs == rhs;
}

/// Stationary probabilities beta^i - beta^{i+1} of the infinite restart chain, i < count.
inline std::vector<QuadInt> infinite_steady_state(std::size_t count) {
  if (count < 1) throw ParameterError("infinite_steady_state expects count >= 1");
  std::vector<QuadInt> out;
  out.reserve(count);
  QuadInt power{1, 0};
  for (std::size_t i = 0; i < count; ++i) {
    QuadInt next = power * beta();
    out.push_back(power - next);
    power = std::move(next);
  }
  return out;
}

/// Certified upper bound on |B_{n-1}/B_n - beta|.
inline Rational silver_ratio_gap(std::size_t n, unsigned digits = kDefaultDigits) {
  if (n < 2) throw ParameterError("silver_ratio_gap expects n >= 2");
  const auto b = sequence(kind::Balancing{}, n + 1);
  const QuadRational diff = QuadRational(Rational(b[n - 1], b[n])) - to_rational(beta());
  return abs_upper_bound(diff, digits);
}

}  // namespace balchain
