#pragma once

// Transition matrices of the restart-type birth/death chains whose stationary
// vectors are built from balancing-family numbers. Every family shares one
// shape: a column of "restart" probabilities into state 0 plus a tridiagonal
// band. Entries are exact rationals and every row sums to exactly 1.

#include <algorithm>
#include <array>
#include <cstddef>
#include <numeric>
#include <optional>
#include <queue>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "balchain/errors.hpp"
#include "balchain/numeric.hpp"

namespace balchain {

namespace family {
/// Restart chain with step 1/6; stationary vector in balancing numbers.
struct Balancing {
  std::size_t n;
};
/// Lazy version of Balancing with step q in (0, 1/6].
struct BalancingQ {
  std::size_t n;
  Rational q;
};
/// Last state holds with 1/6; stationary vector in odd-indexed Pell numbers.
struct PellRatio {
  std::size_t n;
};
/// Last row (1/3, ..., 1/6, 1/2); stationary vector in Lucas-balancing numbers.
struct Lucas {
  std::size_t n;
};
struct LucasQ {
  std::size_t n;
  Rational q;
};
/// Rows n-2 and n-1 modified; stationary vector in Lucas-cobalancing numbers.
struct LucasCobalancing {
  std::size_t n;
};
/// n-state truncation of the infinite restart chain (same matrix as PellRatio).
struct TruncatedInfinite {
  std::size_t n;
};
struct TruncatedInfiniteQ {
  std::size_t n;
  Rational q;
};
/// Step 1/A generalisation of Balancing; stationary vector in x_{n+1} = A x_n - x_{n-1}.
struct BalancingLike {
  std::size_t n;
  Integer a;
};
struct BalancingLikeQ {
  std::size_t n;
  Integer a;
  Rational q;
};
}  // namespace family

using ChainFamily =
    std::variant<family::Balancing, family::BalancingQ, family::PellRatio, family::Lucas, family::LucasQ,
                 family::LucasCobalancing, family::TruncatedInfinite, family::TruncatedInfiniteQ,
                 family::BalancingLike, family::BalancingLikeQ>;

inline std::string family_name(const ChainFamily& f) {
  static constexpr const char* names[] = {"balancing",          "balancing-q",         "pell-ratio",
                                          "lucas",              "lucas-q",             "lucas-cobalancing",
                                          "truncated-infinite", "truncated-infinite-q", "balancing-like",
                                          "balancing-like-q"};
  return names[f.index()];
}

inline std::size_t family_size(const ChainFamily& f) {
  return std::visit([](const auto& s) { return s.n; }, f);
}

inline std::optional<Rational> family_q(const ChainFamily& f) {
  return std::visit(
      [](const auto& s) -> std::optional<Rational> {
        if constexpr (requires { s.q; }) return s.q;
        return std::nullopt;
      },
      f);
}

inline std::optional<Integer> family_a(const ChainFamily& f) {
  return std::visit(
      [](const auto& s) -> std::optional<Integer> {
        if constexpr (requires { s.a; }) return s.a;
        return std::nullopt;
      },
      f);
}

/// Band coefficient c of the family: q ranges over (0, 1/c].
inline Integer family_coefficient(const ChainFamily& f) { return family_a(f).value_or(6); }

/// "n=10;q=1/7;a=4"-style parameter summary, used in reports.
inline std::string family_params(const ChainFamily& f) {
  std::string out = "n=" + std::to_string(family_size(f));
  if (auto a = family_a(f)) out += ";a=" + to_string(*a);
  if (auto q = family_q(f)) out += ";q=" + to_string(*q);
  return out;
}

/// Parses a family from its CLI name and parameters.
inline ChainFamily make_family(const std::string& name, std::size_t n, const std::optional<Integer>& a,
                               const std::optional<Rational>& q) {
  auto need_q = [&]() -> Rational {
    if (!q) throw ParameterError("family '" + name + "' requires --q");
    return *q;
  };
  auto need_a = [&]() -> Integer {
    if (!a) throw ParameterError("family '" + name + "' requires --a");
    return *a;
  };
  if (name == "balancing") return family::Balancing{n};
  if (name == "balancing-q") return family::BalancingQ{n, need_q()};
  if (name == "pell-ratio") return family::PellRatio{n};
  if (name == "lucas") return family::Lucas{n};
  if (name == "lucas-q") return family::LucasQ{n, need_q()};
  if (name == "lucas-cobalancing") return family::LucasCobalancing{n};
  if (name == "truncated-infinite") return family::TruncatedInfinite{n};
  if (name == "truncated-infinite-q") return family::TruncatedInfiniteQ{n, need_q()};
  if (name == "balancing-like") return family::BalancingLike{n, need_a()};
  if (name == "balancing-like-q") return family::BalancingLikeQ{n, need_a(), need_q()};
  throw ParameterError("unknown chain family '" + name + "'");
}

/// Square matrix of exact rationals. Stored dense, or as restart column plus
/// tridiagonal band (columns >= 1) for large named-family instances.
class StochasticMatrix {
 public:
  enum class Storage { dense, band };

  StochasticMatrix() = default;

  static StochasticMatrix from_rows(const std::vector<std::vector<Rational>>& rows) {
    StochasticMatrix m;
    m.n_ = rows.size();
    m.storage_ = Storage::dense;
    m.dense_.reserve(m.n_ * m.n_);
    for (const auto& row : rows) {
      if (row.size() != m.n_) throw ParameterError("matrix is not square");
      m.dense_.insert(m.dense_.end(), row.begin(), row.end());
    }
    return m;
  }

  /// restart[i] = P(i,0); band[i] = {P(i,i-1), P(i,i), P(i,i+1)} restricted to columns >= 1.
  static StochasticMatrix from_band(std::vector<Rational> restart, std::vector<std::array<Rational, 3>> band) {
    if (restart.size() != band.size()) throw ParameterError("band storage size mismatch");
    StochasticMatrix m;
    m.n_ = restart.size();
    m.storage_ = Storage::band;
    m.restart_ = std::move(restart);
    m.band_ = std::move(band);
    return m;
  }

  std::size_t size() const noexcept { return n_; }
  Storage storage() const noexcept { return storage_; }

  Rational at(std::size_t i, std::size_t j) const {
    if (storage_ == Storage::dense) return dense_[i * n_ + j];
    if (j == 0) return restart_[i];
    if (j + 1 >= i && j <= i + 1) return band_[i][j + 1 - i];
    return 0;
  }

  std::vector<Rational> row(std::size_t i) const {
    std::vector<Rational> out(n_);
    for (std::size_t j = 0; j < n_; ++j) out[j] = at(i, j);
    return out;
  }

  std::vector<std::vector<Rational>> rows() const {
    std::vector<std::vector<Rational>> out;
    out.reserve(n_);
    for (std::size_t i = 0; i < n_; ++i) out.push_back(row(i));
    return out;
  }

  /// Nonzero entries of row i as (column, value), columns ascending.
  std::vector<std::pair<std::size_t, Rational>> row_nonzeros(std::size_t i) const {
    std::vector<std::pair<std::size_t, Rational>> out;
    if (storage_ == Storage::dense) {
      for (std::size_t j = 0; j < n_; ++j)
        if (dense_[i * n_ + j] != 0) out.emplace_back(j, dense_[i * n_ + j]);
      return out;
    }
    if (restart_[i] != 0) out.emplace_back(0, restart_[i]);
    for (std::size_t k = 0; k < 3; ++k) {
      if (i + k < 1) continue;
      const std::size_t j = i + k - 1;
      if (j == 0 || j >= n_) continue;
      if (band_[i][k] != 0) out.emplace_back(j, band_[i][k]);
    }
    return out;
  }

  StochasticMatrix to_dense() const { return from_rows(rows()); }

  friend bool operator==(const StochasticMatrix& x, const StochasticMatrix& y) {
    if (x.n_ != y.n_) return false;
    for (std::size_t i = 0; i < x.n_; ++i)
      for (std::size_t j = 0; j < x.n_; ++j)
        if (x.at(i, j) != y.at(i, j)) return false;
    return true;
  }

 private:
  std::size_t n_ = 0;
  Storage storage_ = Storage::dense;
  std::vector<Rational> dense_;
  std::vector<Rational> restart_;
  std::vector<std::array<Rational, 3>> band_;
};

inline constexpr std::size_t kDenseLimit = 64;

namespace detail {

/// One row of a restart-band matrix: P(i,0), P(i,i-1), P(i,i), P(i,i+1).
/// For rows 0 and 1 the left/diagonal entries that land in column 0 are folded
/// into `restart` by the caller.
struct RowPattern {
  Rational restart = 0;
  Rational left = 0;
  Rational diag = 0;
  Rational right = 0;
};

inline StochasticMatrix assemble(const std::vector<RowPattern>& rows, std::optional<StochasticMatrix::Storage> storage) {
  const std::size_t n = rows.size();
  const auto chosen = storage.value_or(n <= kDenseLimit ? StochasticMatrix::Storage::dense : StochasticMatrix::Storage::band);
  std::vector<Rational> restart(n);
  std::vector<std::array<Rational, 3>> band(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = rows[i];
    restart[i] = r.restart;
    // column 0 only ever carries the restart entry
    band[i] = {i >= 2 ? r.left : Rational(0), i >= 1 ? r.diag : Rational(0), i + 1 < n ? r.right : Rational(0)};
    if (i == 0) restart[i] += r.diag;
    if (i == 1) restart[i] += r.left;
  }
  auto banded = StochasticMatrix::from_band(std::move(restart), std::move(band));
  return chosen == StochasticMatrix::Storage::band ? banded : banded.to_dense();
}

inline void require_size(std::size_t n, std::size_t minimum, const std::string& name) {
  if (n < minimum)
    throw ParameterError(name + " requires n >= " + std::to_string(minimum) + ", got " + std::to_string(n));
}

inline void require_q(const Rational& q, const Integer& coeff, const std::string& name) {
  if (q <= 0 || q > Rational(Integer(1), coeff))
    throw ParameterError(name + " requires 0 < q <= 1/" + to_string(coeff) + ", got " + to_string(q));
}

inline void require_a(const Integer& a, const std::string& name) {
  if (a < 2) throw ParameterError(name + " requires A >= 2, got " + to_string(a));
}

/// Fixed-step chains. Row 0 is (1-1/c, 1/c); rows 1..n-2 step to both
/// neighbours with 1/c and restart with the remainder; `last` is row n-1.
inline std::vector<RowPattern> restart_rows(std::size_t n, const Integer& c, const RowPattern& last) {
  const Rational s(Integer(1), c);
  std::vector<RowPattern> rows(n);
  rows[0] = {1 - s, 0, 0, s};
  rows[1] = {1 - s, 0, 0, s};
  for (std::size_t i = 2; i + 1 < n; ++i) rows[i] = {1 - 2 * s, s, 0, s};
  rows[n - 1] = last;
  return rows;
}

/// Lazy chains of the form (1 - cq) I + cq * P_fixed, written out entrywise.
inline std::vector<RowPattern> lazy_rows(std::size_t n, const Integer& c, const Rational& q, const RowPattern& last) {
  std::vector<RowPattern> rows(n);
  rows[0] = {1 - q, 0, 0, q};
  rows[1] = {(c - 1) * q, 0, 1 - c * q, q};
  for (std::size_t i = 2; i + 1 < n; ++i) rows[i] = {(c - 2) * q, q, 1 - c * q, q};
  rows[n - 1] = last;
  return rows;
}

}  // namespace detail

/// Throws ParameterError unless the family parameters are admissible:
/// n >= 3 (n >= 4 for lucas-cobalancing), A >= 2, 0 < q <= 1/c.
inline void check_parameters(const ChainFamily& f) {
  const std::string name = family_name(f);
  detail::require_size(family_size(f), std::holds_alternative<family::LucasCobalancing>(f) ? 4 : 3, name);
  if (auto a = family_a(f)) detail::require_a(*a, name);
  if (auto q = family_q(f)) detail::require_q(*q, family_coefficient(f), name);
}

/// Exact transition matrix of a chain family. Parameters out of range raise
/// ParameterError. `storage` overrides the size-based dense/band choice.
inline StochasticMatrix build(const ChainFamily& f, std::optional<StochasticMatrix::Storage> storage = std::nullopt) {
  using detail::RowPattern;
  check_parameters(f);
  const std::vector<RowPattern> rows = std::visit(
      [&](const auto& s) -> std::vector<RowPattern> {
        using T = std::decay_t<decltype(s)>;
        const Rational sixth(1, 6);
        if constexpr (std::is_same_v<T, family::Balancing>) {
          return detail::restart_rows(s.n, 6, {Rational(5, 6), sixth, 0, 0});
        } else if constexpr (std::is_same_v<T, family::BalancingQ>) {
          return detail::lazy_rows(s.n, 6, s.q, {5 * s.q, s.q, 1 - 6 * s.q, 0});
        } else if constexpr (std::is_same_v<T, family::PellRatio> || std::is_same_v<T, family::TruncatedInfinite>) {
          return detail::restart_rows(s.n, 6, {Rational(2, 3), sixth, sixth, 0});
        } else if constexpr (std::is_same_v<T, family::TruncatedInfiniteQ>) {
          return detail::lazy_rows(s.n, 6, s.q, {4 * s.q, s.q, 1 - 5 * s.q, 0});
        } else if constexpr (std::is_same_v<T, family::Lucas>) {
          return detail::restart_rows(s.n, 6, {Rational(1, 3), sixth, Rational(1, 2), 0});
        } else if constexpr (std::is_same_v<T, family::LucasQ>) {
          return detail::lazy_rows(s.n, 6, s.q, {2 * s.q, s.q, 1 - 3 * s.q, 0});
        } else if constexpr (std::is_same_v<T, family::LucasCobalancing>) {
          auto r = detail::restart_rows(s.n, 6, {Rational(1, 3), sixth, Rational(1, 2), 0});
          r[s.n - 2] = {Rational(16, 21), sixth, 0, Rational(1, 14)};
          return r;
        } else if constexpr (std::is_same_v<T, family::BalancingLike>) {
          const Rational step(Integer(1), s.a);
          return detail::restart_rows(s.n, s.a, {1 - step, step, 0, 0});
        } else {
          return detail::lazy_rows(s.n, s.a, s.q, {(s.a - 1) * s.q, s.q, 1 - s.a * s.q, 0});
        }
      },
      f);
  return detail::assemble(rows, storage);
}

struct Violation {
  enum class Kind { negative_entry, row_sum, unreachable, periodic };
  Kind kind;
  std::size_t row;
  std::size_t column;
  std::string message;
};

struct ValidationReport {
  bool nonnegative = true;
  bool rows_sum_to_one = true;
  bool irreducible = true;
  bool aperiodic = true;
  std::size_t period = 1;
  std::vector<Violation> violations;

  bool ok() const { return nonnegative && rows_sum_to_one && irreducible && aperiodic; }

  std::string summary() const {
    if (ok()) return "ok";
    std::ostringstream os;
    for (std::size_t k = 0; k < violations.size(); ++k) os << (k ? "; " : "") << violations[k].message;
    return os.str();
  }
};

/// Nonnegativity, exact unit row sums, irreducibility and aperiodicity.
/// Problems are reported, never thrown.
inline ValidationReport validate(const StochasticMatrix& m) {
  ValidationReport report;
  const std::size_t n = m.size();
  std::vector<std::vector<std::size_t>> succ(n), pred(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rational sum = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const Rational v = m.at(i, j);
      if (v < 0) {
        report.nonnegative = false;
        report.violations.push_back({Violation::Kind::negative_entry, i, j,
                                     "negative entry " + to_string(v) + " at (" + std::to_string(i) + "," +
                                         std::to_string(j) + ")"});
      }
      if (v > 0) {
        succ[i].push_back(j);
        pred[j].push_back(i);
      }
      sum += v;
    }
    if (sum != 1) {
      report.rows_sum_to_one = false;
      report.violations.push_back(
          {Violation::Kind::row_sum, i, 0, "row " + std::to_string(i) + " sums to " + to_string(sum)});
    }
  }
  if (n == 0) return report;

  // Breadth-first levels from state 0 over the positive-entry graph.
  auto bfs = [n](const std::vector<std::vector<std::size_t>>& adj) {
    std::vector<long> level(n, -1);
    std::queue<std::size_t> frontier;
    level[0] = 0;
    frontier.push(0);
    while (!frontier.empty()) {
      const std::size_t u = frontier.front();
      frontier.pop();
      for (std::size_t v : adj[u])
        if (level[v] < 0) {
          level[v] = level[u] + 1;
          frontier.push(v);
        }
    }
    return level;
  };
  const auto forward = bfs(succ);
  const auto backward = bfs(pred);
  for (std::size_t s = 0; s < n; ++s) {
    if (forward[s] < 0) {
      report.irreducible = false;
      report.violations.push_back(
          {Violation::Kind::unreachable, s, s, "state " + std::to_string(s) + " is unreachable from state 0"});
    } else if (backward[s] < 0) {
      report.irreducible = false;
      report.violations.push_back(
          {Violation::Kind::unreachable, s, s, "state 0 is unreachable from state " + std::to_string(s)});
    }
  }
  if (!report.irreducible) {
    report.aperiodic = false;
    return report;
  }
  // Period = gcd over edges (u,v) of level(u) + 1 - level(v).
  long g = 0;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v : succ[u]) g = std::gcd(g, std::labs(forward[u] + 1 - forward[v]));
  report.period = static_cast<std::size_t>(g);
  if (g != 1) {
    report.aperiodic = false;
    report.violations.push_back(
        {Violation::Kind::periodic, 0, 0, "chain is periodic with period " + std::to_string(g)});
  }
  return report;
}

}  // namespace balchain
