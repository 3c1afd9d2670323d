#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace balchain {

/// A parameter outside its admissible range (family size, q, A, index...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The linear system for the stationary vector could not be solved.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative method ran out of iterations. Carries the last iterate.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> last_iterate, std::size_t iterations)
      : std::runtime_error(what), last_iterate_(std::move(last_iterate)), iterations_(iterations) {}

  const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }
  std::size_t iterations() const noexcept { return iterations_; }

 private:
  std::vector<double> last_iterate_;
  std::size_t iterations_;
};

}  // namespace balchain
