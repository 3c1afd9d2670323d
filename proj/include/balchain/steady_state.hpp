#pragma once

// Three independent routes to the stationary vector of a stochastic matrix:
// exact rational elimination on the balance equations, floating-point power
// iteration, and seeded Monte Carlo simulation. Plus exact n-step powers.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "balchain/chain.hpp"
#include "balchain/errors.hpp"
#include "balchain/numeric.hpp"

namespace balchain {

using ExactDistribution = std::vector<Rational>;

/// Unique pi with pi = pi * m and sum(pi) = 1, by fraction-exact Gaussian
/// elimination on (m^T - I) with the first balance equation replaced by the
/// normalisation row. Throws SolverError if m fails validation or the system
/// is singular.
inline ExactDistribution solve_exact(const StochasticMatrix& m) {
  const std::size_t n = m.size();
  if (n == 0) throw SolverError("empty matrix");
  if (const auto report = validate(m); !report.ok())
    throw SolverError("matrix is not an ergodic stochastic matrix: " + report.summary());

  // Augmented system [A | rhs], row r is the balance equation of state r.
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n + 1));
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& [j, p] : m.row_nonzeros(i)) a[j][i] += p;
  for (std::size_t i = 0; i < n; ++i) a[i][i] -= 1;
  for (std::size_t j = 0; j <= n; ++j) a[0][j] = 1;

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (abs(a[r][col]) > abs(a[pivot][col])) pivot = r;
    if (a[pivot][col] == 0) throw SolverError("singular balance system: chain is reducible");
    std::swap(a[pivot], a[col]);
    const Rational inv = 1 / a[col][col];
    for (std::size_t j = col; j <= n; ++j) a[col][j] *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const Rational factor = a[r][col];
      for (std::size_t j = col; j <= n; ++j)
        if (a[col][j] != 0) a[r][j] -= factor * a[col][j];
    }
  }
  ExactDistribution pi(n);
  for (std::size_t i = 0; i < n; ++i) pi[i] = a[i][n];
  return pi;
}

/// pi * m, exact.
inline ExactDistribution left_multiply(const ExactDistribution& pi, const StochasticMatrix& m) {
  if (pi.size() != m.size()) throw ParameterError("dimension mismatch");
  ExactDistribution out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (const auto& [j, p] : m.row_nonzeros(i)) out[j] += pi[i] * p;
  return out;
}

struct PowerIterationResult {
  std::vector<double> probs;
  std::size_t iterations = 0;
  double tol = 0;
};

inline constexpr double kDefaultTol = 1e-12;
inline constexpr std::size_t kDefaultMaxIter = 1'000'000;

/// Iterates v <- v * m from the uniform vector until the L1 change drops
/// below tol. Throws ConvergenceError (carrying the last iterate) otherwise.
inline PowerIterationResult power_iteration(const StochasticMatrix& m, double tol = kDefaultTol,
                                            std::size_t max_iter = kDefaultMaxIter) {
  if (!(tol > 0)) throw ParameterError("power_iteration requires tol > 0");
  if (max_iter < 1) throw ParameterError("power_iteration requires max_iter >= 1");
  const std::size_t n = m.size();
  if (n == 0) throw ParameterError("empty matrix");

  struct Entry {
    std::size_t col;
    double p;
  };
  std::vector<std::vector<Entry>> rows(n);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& [j, p] : m.row_nonzeros(i)) rows[i].push_back({j, to_double(p)});

  std::vector<double> v(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n);
  for (std::size_t it = 1; it <= max_iter; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& e : rows[i]) next[e.col] += v[i] * e.p;
    double total = 0;
    for (double x : next) total += x;
    double change = 0;
    for (std::size_t j = 0; j < n; ++j) {
      next[j] /= total;
      change += std::fabs(next[j] - v[j]);
    }
    v.swap(next);
    if (change < tol) return {v, it, tol};
  }
  throw ConvergenceError("power iteration did not converge within " + std::to_string(max_iter) + " iterations", v,
                         max_iter);
}

namespace detail {

inline std::vector<std::vector<Rational>> multiply(const std::vector<std::vector<Rational>>& x,
                                                   const std::vector<std::vector<Rational>>& y) {
  const std::size_t n = x.size();
  std::vector<std::vector<Rational>> r(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (x[i][k] == 0) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (y[k][j] != 0) r[i][j] += x[i][k] * y[k][j];
    }
  return r;
}

}  // namespace detail

/// Exact m^steps by binary exponentiation.
inline StochasticMatrix n_step(const StochasticMatrix& m, std::uint64_t steps) {
  if (steps < 1) throw ParameterError("n_step requires n >= 1");
  auto base = m.rows();
  std::vector<std::vector<Rational>> acc;
  bool have = false;
  while (true) {
    if (steps & 1U) {
      acc = have ? detail::multiply(acc, base) : base;
      have = true;
    }
    steps >>= 1U;
    if (steps == 0) break;
    base = detail::multiply(base, base);
  }
  return StochasticMatrix::from_rows(acc);
}

/// m^(2^squarings) in double precision by repeated squaring. Used where the
/// exact power would have astronomically large denominators.
inline std::vector<std::vector<double>> repeated_squaring(const StochasticMatrix& m, unsigned squarings) {
  const std::size_t n = m.size();
  std::vector<std::vector<double>> p(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& [j, v] : m.row_nonzeros(i)) p[i][j] = to_double(v);
  std::vector<std::vector<double>> sq(n, std::vector<double>(n));
  for (unsigned s = 0; s < squarings; ++s) {
    for (std::size_t i = 0; i < n; ++i) {
      std::fill(sq[i].begin(), sq[i].end(), 0.0);
      for (std::size_t k = 0; k < n; ++k) {
        const double x = p[i][k];
        if (x == 0) continue;
        for (std::size_t j = 0; j < n; ++j) sq[i][j] += x * p[k][j];
      }
      // keep rows stochastic against rounding drift
      double total = 0;
      for (double x : sq[i]) total += x;
      for (double& x : sq[i]) x /= total;
    }
    p.swap(sq);
  }
  return p;
}

inline constexpr const char* kSimulationGenerator = "mt19937_64";

struct SimulationResult {
  std::vector<std::uint64_t> visits;
  std::uint64_t steps = 0;
  std::uint64_t seed = 0;
  std::string generator = kSimulationGenerator;
  std::vector<double> empirical;

  friend bool operator==(const SimulationResult&, const SimulationResult&) = default;
};

/// Runs the chain for `steps` transitions from `start` and counts the states
/// X_1..X_steps. Uniforms are the top 53 bits of std::mt19937_64 output, so a
/// given seed reproduces on any conforming standard library.
inline SimulationResult simulate(const StochasticMatrix& m, std::uint64_t steps, std::uint64_t seed,
                                 std::size_t start = 0) {
  const std::size_t n = m.size();
  if (start >= n) throw ParameterError("start state " + std::to_string(start) + " out of range");
  if (steps < 1) throw ParameterError("simulate requires steps >= 1");

  struct Cumulative {
    std::vector<std::size_t> cols;
    std::vector<double> upper;
  };
  std::vector<Cumulative> table(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rational acc = 0;
    for (const auto& [j, p] : m.row_nonzeros(i)) {
      acc += p;
      table[i].cols.push_back(j);
      table[i].upper.push_back(to_double(acc));
    }
    if (table[i].cols.empty()) throw ParameterError("row " + std::to_string(i) + " has no transitions");
  }

  std::mt19937_64 gen(seed);
  SimulationResult result;
  result.visits.assign(n, 0);
  result.steps = steps;
  result.seed = seed;
  std::size_t state = start;
  for (std::uint64_t t = 0; t < steps; ++t) {
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    const auto& row = table[state];
    std::size_t k = 0;
    while (k + 1 < row.cols.size() && u >= row.upper[k]) ++k;
    state = row.cols[k];
    ++result.visits[state];
  }
  result.empirical.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    result.empirical[i] = static_cast<double>(result.visits[i]) / static_cast<double>(steps);
  return result;
}

/// max_i |x_i - y_i| with y exact.
inline double linf_distance(const std::vector<double>& x, const ExactDistribution& y) {
  if (x.size() != y.size()) throw ParameterError("dimension mismatch");
  double worst = 0;
  for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::fabs(x[i] - to_double(y[i])));
  return worst;
}

}  // namespace balchain
