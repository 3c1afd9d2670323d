#pragma once

// Balancing-family integer sequences generated by one second-order
// recurrence engine, together with the classical identities that tie them
// together (perfect-square characterisations, sum and Pell links, the 2x2
// matrix power form).

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "balchain/errors.hpp"
#include "balchain/numeric.hpp"

namespace balchain {

/// x_{n+1} = coeff * x_n + lag * x_{n-1} + shift, seeded with x_0 and x_1.
/// Every balancing-type sequence uses lag = -1; Pell uses lag = +1.
struct RecurrenceSpec {
  Integer coeff;
  Integer shift;
  Integer x0;
  Integer x1;
  Integer lag = -1;
};

namespace kind {
struct Balancing {};
struct LucasBalancing {};
struct Cobalancing {};
struct LucasCobalancing {};
struct Pell {};
struct BalancingLike {
  Integer a;
};
}  // namespace kind

using SequenceKind = std::variant<kind::Balancing, kind::LucasBalancing, kind::Cobalancing,
                                  kind::LucasCobalancing, kind::Pell, kind::BalancingLike>;

inline RecurrenceSpec recurrence_for(const SequenceKind& k) {
  return std::visit(
      [](const auto& s) -> RecurrenceSpec {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, kind::Balancing>) {
          return {6, 0, 0, 1};
        } else if constexpr (std::is_same_v<T, kind::LucasBalancing>) {
          return {6, 0, 1, 3};
        } else if constexpr (std::is_same_v<T, kind::Cobalancing>) {
          return {6, 2, 0, 0};
        } else if constexpr (std::is_same_v<T, kind::LucasCobalancing>) {
          return {6, 0, 1, 7};
        } else if constexpr (std::is_same_v<T, kind::Pell>) {
          return {2, 0, 0, 1, 1};
        } else {
          if (s.a < 2) throw ParameterError("balancing-like coefficient A must be >= 2");
          return {s.a, 0, 0, 1};
        }
      },
      k);
}

inline std::string kind_name(const SequenceKind& k) {
  static constexpr std::array names = {"balancing",         "lucas-balancing", "cobalancing",
                                       "lucas-cobalancing", "pell",            "balancing-like"};
  return names[k.index()];
}

/// Prefix [x_0, ..., x_{count-1}] of an arbitrary recurrence.
inline std::vector<Integer> iterate(const RecurrenceSpec& spec, std::size_t count) {
  std::vector<Integer> out;
  out.reserve(count);
  if (count > 0) out.push_back(spec.x0);
  if (count > 1) out.push_back(spec.x1);
  while (out.size() < count) {
    const std::size_t n = out.size() - 1;
    out.push_back(spec.coeff * out[n] + spec.lag * out[n - 1] + spec.shift);
  }
  return out;
}

inline std::vector<Integer> sequence(const SequenceKind& k, std::size_t count) {
  return iterate(recurrence_for(k), count);
}

inline Integer term(const SequenceKind& k, std::size_t n) {
  const RecurrenceSpec spec = recurrence_for(k);
  if (n == 0) return spec.x0;
  Integer prev = spec.x0;
  Integer cur = spec.x1;
  for (std::size_t i = 1; i < n; ++i) {
    Integer next = spec.coeff * cur + spec.lag * prev + spec.shift;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

struct IntegerSqrt {
  Integer root;
  bool exact;
};

/// Floor square root by monotone Newton iteration: root^2 <= value < (root+1)^2.
inline IntegerSqrt integer_sqrt(const Integer& value) {
  if (value < 0) throw ParameterError("integer_sqrt of a negative number");
  if (value < 2) return {value, true};
  // Start above the root so the iteration decreases monotonically.
  const std::size_t bits = boost::multiprecision::msb(value) + 1;
  Integer x = Integer(1) << ((bits + 1) / 2);
  while (true) {
    Integer y = (x + value / x) >> 1;
    if (y >= x) break;
    x = std::move(y);
  }
  return {x, x * x == value};
}

/// Result of a perfect-square membership test; witness is the square root.
struct Membership {
  bool member = false;
  std::optional<Integer> witness;
};

/// N is balancing iff 8N^2 + 1 is a perfect square (the Lucas-balancing partner).
inline Membership is_balancing(const Integer& n) {
  if (n < 1) throw ParameterError("is_balancing expects N >= 1");
  const auto [root, exact] = integer_sqrt(8 * n * n + 1);
  if (!exact) return {};
  return {true, root};
}

/// N is cobalancing iff 8N^2 + 8N + 1 is a perfect square.
inline Membership is_cobalancing(const Integer& n) {
  if (n < 0) throw ParameterError("is_cobalancing expects N >= 0");
  const auto [root, exact] = integer_sqrt(8 * n * n + 8 * n + 1);
  if (!exact) return {};
  return {true, root};
}

/// 2 * (B_1 + ... + B_{n-1}) == b_n.
inline bool check_sum_identity(std::size_t n) {
  if (n < 1) throw ParameterError("check_sum_identity expects n >= 1");
  const auto balancing = sequence(kind::Balancing{}, n);
  Integer sum = 0;
  for (std::size_t i = 1; i < n; ++i) sum += balancing[i];
  return 2 * sum == term(kind::Cobalancing{}, n);
}

struct PellLinks {
  bool even;  // P_{2n} == 2 B_n
  bool odd;   // P_{2n+1} == B_{n+1} - B_n
};

inline PellLinks check_pell_links(std::size_t n) {
  const auto pell = sequence(kind::Pell{}, 2 * n + 2);
  const auto balancing = sequence(kind::Balancing{}, n + 2);
  return {pell[2 * n] == 2 * balancing[n], pell[2 * n + 1] == balancing[n + 1] - balancing[n]};
}

using IntMatrix2 = std::array<std::array<Integer, 2>, 2>;

inline IntMatrix2 multiply(const IntMatrix2& x, const IntMatrix2& y) {
  IntMatrix2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
  return r;
}

/// [[6,1],[-1,0]]^n by repeated multiplication; equals [[B_{n+1},B_n],[-B_n,-B_{n-1}]].
/// The lower-right entry carries a minus sign: the power has determinant 1.
inline IntMatrix2 balancing_matrix_power(std::size_t n) {
  if (n < 1) throw ParameterError("balancing_matrix_power expects n >= 1");
  const IntMatrix2 base{{{6, 1}, {-1, 0}}};
  IntMatrix2 acc = base;
  for (std::size_t i = 1; i < n; ++i) acc = multiply(acc, base);
  return acc;
}

}  // namespace balchain
