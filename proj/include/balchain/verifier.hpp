#pragma once

// Closed-form stationary vectors for every chain family, checked against the
// exact solver. Also the lazy-chain q-invariance check, the truncation study
// of the infinite restart chain and its unnormalised recursion.

#include <algorithm>
#include <cstddef>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "balchain/chain.hpp"
#include "balchain/quad_ring.hpp"
#include "balchain/sequences.hpp"
#include "balchain/steady_state.hpp"

namespace balchain {

namespace detail {

/// v_i = numbers[i] / sum(numbers)
inline ExactDistribution normalised(const std::vector<Integer>& numbers) {
  Integer total = 0;
  for (const auto& x : numbers) total += x;
  ExactDistribution out;
  out.reserve(numbers.size());
  for (const auto& x : numbers) out.emplace_back(x, total);
  return out;
}

/// (x_n, x_{n-1}, ..., x_1) of a sequence with x_0 = 0.
inline std::vector<Integer> reversed_tail(const SequenceKind& k, std::size_t n) {
  auto xs = sequence(k, n + 1);
  return {xs.rbegin(), xs.rend() - 1};
}

/// (x_{n-1}, ..., x_0).
inline std::vector<Integer> reversed_head(const SequenceKind& k, std::size_t n) {
  auto xs = sequence(k, n);
  return {xs.rbegin(), xs.rend()};
}

/// (B_n - B_{n-1}, ..., B_1 - B_0); these sum to B_n.
inline std::vector<Integer> balancing_differences(std::size_t n) {
  const auto b = sequence(kind::Balancing{}, n + 1);
  std::vector<Integer> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(b[n - i] - b[n - i - 1]);
  return out;
}

}  // namespace detail

/// Closed-form stationary vector, indexed so that it satisfies the balance
/// equations of the family (ratio pi_{n-2}/pi_{n-1} of 6, 5, 3, 7 or A).
inline ExactDistribution closed_form(const ChainFamily& f) {
  check_parameters(f);
  const std::size_t n = family_size(f);
  return std::visit(
      [n](const auto& s) -> ExactDistribution {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, family::Balancing> || std::is_same_v<T, family::BalancingQ>) {
          return detail::normalised(detail::reversed_tail(kind::Balancing{}, n));
        } else if constexpr (std::is_same_v<T, family::PellRatio> || std::is_same_v<T, family::TruncatedInfinite> ||
                             std::is_same_v<T, family::TruncatedInfiniteQ>) {
          return detail::normalised(detail::balancing_differences(n));
        } else if constexpr (std::is_same_v<T, family::Lucas> || std::is_same_v<T, family::LucasQ>) {
          return detail::normalised(detail::reversed_head(kind::LucasBalancing{}, n));
        } else if constexpr (std::is_same_v<T, family::LucasCobalancing>) {
          return detail::normalised(detail::reversed_head(kind::LucasCobalancing{}, n));
        } else {
          return detail::normalised(detail::reversed_tail(kind::BalancingLike{s.a}, n));
        }
      },
      f);
}

/// Balancing and Pell-ratio chains rewritten in Pell numbers:
/// pi_i = P_{2(n-i)} / b_{n+1} and pi_i = P_{2(n-i)-1} / B_n respectively.
inline ExactDistribution pell_form(const ChainFamily& f) {
  check_parameters(f);
  const std::size_t n = family_size(f);
  const auto pell = sequence(kind::Pell{}, 2 * n + 1);
  ExactDistribution out(n);
  if (std::holds_alternative<family::Balancing>(f) || std::holds_alternative<family::BalancingQ>(f)) {
    const Integer den = term(kind::Cobalancing{}, n + 1);
    for (std::size_t i = 0; i < n; ++i) out[i] = Rational(pell[2 * (n - i)], den);
    return out;
  }
  if (std::holds_alternative<family::PellRatio>(f) || std::holds_alternative<family::TruncatedInfinite>(f) ||
      std::holds_alternative<family::TruncatedInfiniteQ>(f)) {
    const Integer den = term(kind::Balancing{}, n);
    for (std::size_t i = 0; i < n; ++i) out[i] = Rational(pell[2 * (n - i) - 1], den);
    return out;
  }
  throw ParameterError("no Pell form for family '" + family_name(f) + "'");
}

/// The closed forms exactly as typeset for the three families whose printed
/// indexing differs from the proof-consistent one. Empty for other families.
inline ExactDistribution printed_form(const ChainFamily& f) {
  const std::size_t n = family_size(f);
  ExactDistribution out;
  auto ratio_form = [&](const SequenceKind& k) {
    // pi_i = x_{n-i} / (x_1 + ... + x_n)
    const auto xs = sequence(k, n + 1);
    Integer total = 0;
    for (std::size_t l = 1; l <= n; ++l) total += xs[l];
    for (std::size_t i = 0; i < n; ++i) out.emplace_back(xs[n - i], total);
  };
  if (std::holds_alternative<family::Lucas>(f) || std::holds_alternative<family::LucasQ>(f)) {
    ratio_form(kind::LucasBalancing{});
  } else if (std::holds_alternative<family::LucasCobalancing>(f)) {
    ratio_form(kind::LucasCobalancing{});
  } else if (std::holds_alternative<family::PellRatio>(f)) {
    // pi_i = (B_{n+i} - B_{n+i-1}) / B_n
    const auto b = sequence(kind::Balancing{}, 2 * n + 1);
    for (std::size_t i = 0; i < n; ++i) out.emplace_back(b[n + i] - b[n + i - 1], b[n]);
  }
  return out;
}

inline Rational max_abs_difference(const ExactDistribution& x, const ExactDistribution& y) {
  if (x.size() != y.size()) throw ParameterError("dimension mismatch");
  Rational worst = 0;
  for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, abs(Rational(x[i] - y[i])));
  return worst;
}

struct VerificationReport {
  ChainFamily family;
  ExactDistribution predicted;
  ExactDistribution solved;
  bool exact_match = false;
  Rational max_gap = 0;
  std::string notes;
};

namespace detail {

inline std::string family_notes(const ChainFamily& f) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, family::Balancing>) {
          return "balancing restart chain: pi_i = 2B_{n-i}/b_{n+1}; Pell reading pi_i = P_{2(n-i)}/b_{n+1} "
                 "(the printed Pell rendering 2P_{2n}/sum B_l is constant in i and off by a factor 2)";
        } else if constexpr (std::is_same_v<T, family::BalancingQ>) {
          return "lazy balancing chain: stationary vector independent of q, equal to the q = 1/6 chain";
        } else if constexpr (std::is_same_v<T, family::PellRatio>) {
          return "Pell-ratio chain: pi_i = (B_{n-i} - B_{n-i-1})/B_n = P_{2(n-i)-1}/B_n; printed form "
                 "(B_{n+i} - B_{n+i-1})/B_n contradicts pi_{n-2} = 5 pi_{n-1}; printed Pell rendering "
                 "2P_{2n-1}/P_{2n} is constant in i and equals pi_0 only";
        } else if constexpr (std::is_same_v<T, family::Lucas>) {
          return "Lucas-balancing chain: pi_i = C_{n-1-i}/(C_0 + ... + C_{n-1}); printed indexing "
                 "C_{n-i}/(C_1 + ... + C_n) contradicts pi_{n-2} = 3 pi_{n-1} = (C_1/C_0) pi_{n-1}";
        } else if constexpr (std::is_same_v<T, family::LucasQ>) {
          return "lazy Lucas-balancing chain: q-invariant; pi_i = C_{n-1-i}/(C_0 + ... + C_{n-1}) "
                 "(printed indexing C_{n-i} over C_1..C_n is off by one)";
        } else if constexpr (std::is_same_v<T, family::LucasCobalancing>) {
          return "Lucas-cobalancing chain: pi_i = c_{n-1-i}/(c_0 + ... + c_{n-1}); printed indexing "
                 "c_{n-i}/(c_1 + ... + c_n) contradicts pi_{n-2} = 7 pi_{n-1} = (c_1/c_0) pi_{n-1}";
        } else if constexpr (std::is_same_v<T, family::TruncatedInfinite>) {
          return "truncated infinite restart chain (same matrix as the Pell-ratio chain): "
                 "pi_i = (B_{n-i} - B_{n-i-1})/B_n -> beta^i - beta^{i+1}";
        } else if constexpr (std::is_same_v<T, family::TruncatedInfiniteQ>) {
          return "lazy truncated infinite chain (last row 4q, q, 1-5q): q-invariant, equal to the Pell-ratio chain";
        } else if constexpr (std::is_same_v<T, family::BalancingLike>) {
          return "balancing-like chain: pi_i = x_{n-i}/(x_1 + ... + x_n), x_{k+1} = A x_k - x_{k-1}";
        } else {
          return "lazy balancing-like chain: q-invariant, equal to the q = 1/A chain";
        }
      },
      f);
}

}  // namespace detail

/// closed_form(f) == solve_exact(build(f)) entrywise. Builder and solver
/// failures are recorded in the report rather than thrown.
inline VerificationReport verify_family(const ChainFamily& f) {
  VerificationReport report{f, {}, {}, false, 0, detail::family_notes(f)};
  try {
    report.predicted = closed_form(f);
    report.solved = solve_exact(build(f));
    report.max_gap = max_abs_difference(report.predicted, report.solved);
    report.exact_match = report.predicted == report.solved;
    if (const auto printed = printed_form(f); !printed.empty()) {
      const Rational gap = max_abs_difference(printed, report.solved);
      report.notes += "; printed form " + std::string(gap == 0 ? "agrees" : "disagrees") +
                      " with the solver (max gap " + to_string(gap) + ")";
    }
  } catch (const std::exception& e) {
    report.exact_match = false;
    report.notes += "; error: " + std::string(e.what());
  }
  return report;
}

enum class LazyFamily { balancing, lucas, truncated_infinite, balancing_like };

struct QInvarianceReport {
  ChainFamily reference;
  ExactDistribution expected;
  std::vector<std::pair<Rational, ExactDistribution>> solutions;
  bool identical = true;
};

/// Solves the lazy chain for every q and compares with the q-free chain.
/// `a` is only read for balancing-like chains.
inline QInvarianceReport q_invariance(std::size_t n, const std::vector<Rational>& q_values, LazyFamily kind,
                                      const Integer& a = 6) {
  auto lazy = [&](const Rational& q) -> ChainFamily {
    switch (kind) {
      case LazyFamily::balancing: return family::BalancingQ{n, q};
      case LazyFamily::lucas: return family::LucasQ{n, q};
      case LazyFamily::truncated_infinite: return family::TruncatedInfiniteQ{n, q};
      default: return family::BalancingLikeQ{n, a, q};
    }
  };
  ChainFamily reference = family::Balancing{n};
  switch (kind) {
    case LazyFamily::balancing: break;
    case LazyFamily::lucas: reference = family::Lucas{n}; break;
    case LazyFamily::truncated_infinite: reference = family::TruncatedInfinite{n}; break;
    case LazyFamily::balancing_like: reference = family::BalancingLike{n, a}; break;
  }
  for (const auto& q : q_values) check_parameters(lazy(q));

  QInvarianceReport report{reference, solve_exact(build(reference)), {}, true};
  for (const auto& q : q_values) {
    auto pi = solve_exact(build(lazy(q)));
    if (pi != report.expected) report.identical = false;
    report.solutions.emplace_back(q, std::move(pi));
  }
  return report;
}

inline constexpr std::size_t kTruncationWindow = 8;

struct TruncationRow {
  std::size_t n;
  Rational gap_bound;  // certified upper bound
  double gap;
};

/// Certified L-infinity distance between the first min(n, 8) stationary
/// probabilities of the n-state truncation and beta^i - beta^{i+1}.
inline TruncationRow truncation_gap(std::size_t n, unsigned digits = kDefaultDigits) {
  if (n < 3) throw ParameterError("truncation study requires n >= 3");
  const auto pi = solve_exact(build(family::TruncatedInfinite{n}));
  const std::size_t window = std::min(n, kTruncationWindow);
  const auto limit = infinite_steady_state(window);
  Rational worst = 0;
  for (std::size_t i = 0; i < window; ++i)
    worst = std::max(worst, abs_upper_bound(QuadRational(pi[i]) - to_rational(limit[i]), digits));
  return {n, worst, to_double(worst)};
}

inline std::vector<TruncationRow> truncation_convergence(const std::vector<std::size_t>& sizes,
                                                         unsigned digits = kDefaultDigits) {
  if (sizes.empty()) throw ParameterError("truncation study needs at least one size");
  std::vector<TruncationRow> rows;
  rows.reserve(sizes.size());
  for (auto n : sizes) rows.push_back(truncation_gap(n, digits));
  return rows;
}

/// pi_i == (B_{i+1} - B_i) pi_0 - 4 B_i for i = 1..count on the exact
/// solution of the n-state truncation, within its certified truncation gap.
inline bool unnormalized_recursion_check(std::size_t n, std::size_t count) {
  const std::size_t window = std::min(n, kTruncationWindow);
  if (count < 1 || count >= window)
    throw ParameterError("count must lie in [1, " + std::to_string(window - 1) + "]");
  const auto pi = solve_exact(build(family::TruncatedInfinite{n}));
  const Rational bound = truncation_gap(n).gap_bound;
  const auto b = sequence(kind::Balancing{}, count + 2);
  for (std::size_t i = 1; i <= count; ++i) {
    const Rational rhs = Rational(b[i + 1] - b[i]) * pi[0] - 4 * Rational(b[i]);
    if (abs(Rational(pi[i] - rhs)) > bound) return false;
  }
  return true;
}

/// The same recursion on the exact infinite-chain values in Z[sqrt 2].
inline bool infinite_recursion_check(std::size_t count) {
  const auto pi = infinite_steady_state(count + 1);
  const auto b = sequence(kind::Balancing{}, count + 2);
  for (std::size_t i = 1; i <= count; ++i) {
    const QuadInt rhs = (b[i + 1] - b[i]) * pi[0] - QuadInt(4 * b[i]);
    if (pi[i] != rhs) return false;
  }
  return true;
}

/// Every named family for sizes 3..max_n, in a fixed order.
inline std::vector<ChainFamily> suite_families(std::size_t max_n) {
  std::vector<ChainFamily> out;
  for (std::size_t n = 3; n <= max_n; ++n) {
    out.push_back(family::Balancing{n});
    for (int d : {6, 7, 100}) out.push_back(family::BalancingQ{n, Rational(1, d)});
    out.push_back(family::PellRatio{n});
    out.push_back(family::TruncatedInfinite{n});
    for (int d : {6, 7, 100}) out.push_back(family::TruncatedInfiniteQ{n, Rational(1, d)});
    out.push_back(family::Lucas{n});
    for (int d : {6, 7, 100}) out.push_back(family::LucasQ{n, Rational(1, d)});
    if (n >= 4) out.push_back(family::LucasCobalancing{n});
    for (int a : {2, 3, 4, 6, 10}) {
      out.push_back(family::BalancingLike{n, a});
      out.push_back(family::BalancingLikeQ{n, a, Rational(1, a + 1)});
    }
  }
  return out;
}

}  // namespace balchain
