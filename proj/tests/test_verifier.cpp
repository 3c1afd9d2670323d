#include <catch_amalgamated.hpp>

#include "balchain/verifier.hpp"

using namespace balchain;

namespace {
Rational r(long num, long den = 1) { return Rational(num, den); }
}  // namespace

TEST_CASE("closed forms at small sizes", "[verify]") {
  CHECK(closed_form(family::Balancing{3}) == ExactDistribution{r(35, 42), r(6, 42), r(1, 42)});
  CHECK(closed_form(family::Lucas{3}) == ExactDistribution{r(17, 21), r(3, 21), r(1, 21)});
  CHECK(closed_form(family::PellRatio{3}) == ExactDistribution{r(29, 35), r(5, 35), r(1, 35)});
  CHECK(closed_form(family::BalancingLike{4, 3}) == ExactDistribution{r(21, 33), r(8, 33), r(3, 33), r(1, 33)});
  CHECK_THROWS_AS(closed_form(family::LucasCobalancing{3}), ParameterError);
}

TEST_CASE("balancing normaliser is half a cobalancing number", "[verify]") {
  for (std::size_t n = 3; n <= 40; ++n) {
    const auto pi = closed_form(family::Balancing{n});
    const Integer b = term(kind::Cobalancing{}, n + 1);
    for (std::size_t i = 0; i < n; ++i) REQUIRE(pi[i] == Rational(2 * term(kind::Balancing{}, n - i), b));
    REQUIRE(denominator(pi[n - 1]) * 2 == b);  // pi_{n-1} = 1/(b_{n+1}/2)
  }
}

TEST_CASE("verify_family examples", "[verify]") {
  CHECK(verify_family(family::Balancing{10}).exact_match);
  CHECK(verify_family(family::LucasQ{10, r(1, 50)}).exact_match);
  const auto cob = verify_family(family::LucasCobalancing{4});
  CHECK(cob.exact_match);
  CHECK(cob.max_gap == 0);
}

TEST_CASE("verify_family over the whole family grid", "[verify]") {
  for (std::size_t n = 3; n <= 40; ++n) {
    REQUIRE(verify_family(family::Balancing{n}).exact_match);
    REQUIRE(verify_family(family::PellRatio{n}).exact_match);
    REQUIRE(verify_family(family::Lucas{n}).exact_match);
    if (n >= 4) REQUIRE(verify_family(family::LucasCobalancing{n}).exact_match);
  }
  for (int a : {2, 3, 4, 6, 10})
    for (std::size_t n = 3; n <= 25; ++n) REQUIRE(verify_family(family::BalancingLike{n, a}).exact_match);
}

TEST_CASE("reports record the printed-index discrepancies", "[verify]") {
  const auto lucas = verify_family(family::Lucas{6});
  CHECK(lucas.notes.find("C_{n-i}/(C_1 + ... + C_n)") != std::string::npos);
  CHECK(lucas.notes.find("printed form disagrees") != std::string::npos);
  const auto cob = verify_family(family::LucasCobalancing{6});
  CHECK(cob.notes.find("printed form disagrees") != std::string::npos);
  const auto pell = verify_family(family::PellRatio{6});
  CHECK(pell.notes.find("(B_{n+i} - B_{n+i-1})/B_n") != std::string::npos);
  CHECK(pell.notes.find("printed form disagrees") != std::string::npos);
  CHECK(pell.notes.find("constant in i") != std::string::npos);
}

TEST_CASE("builder errors are carried in the report", "[verify]") {
  const auto report = verify_family(family::BalancingQ{5, r(1, 2)});
  CHECK_FALSE(report.exact_match);
  CHECK(report.notes.find("error:") != std::string::npos);
  CHECK(report.predicted.empty());
}

TEST_CASE("Pell renderings", "[verify]") {
  for (std::size_t n = 3; n <= 30; ++n) {
    REQUIRE(pell_form(family::Balancing{n}) == solve_exact(build(family::Balancing{n})));
    REQUIRE(pell_form(family::PellRatio{n}) == solve_exact(build(family::PellRatio{n})));
  }
  CHECK_THROWS_AS(pell_form(family::Lucas{5}), ParameterError);
}

TEST_CASE("A = 6 reduces to the balancing chain", "[verify]") {
  for (std::size_t n = 3; n <= 25; ++n)
    REQUIRE(closed_form(family::BalancingLike{n, 6}) == closed_form(family::Balancing{n}));
}

TEST_CASE("A = 3 numerators are even-indexed Fibonacci numbers", "[verify]") {
  const auto pi = closed_form(family::BalancingLike{5, 3});
  const Integer total = 1 + 3 + 8 + 21 + 55;
  CHECK(pi == ExactDistribution{Rational(55, total), Rational(21, total), Rational(8, total), Rational(3, total),
                                Rational(1, total)});
}

TEST_CASE("q invariance", "[verify]") {
  const auto bal = q_invariance(8, {r(1, 6), r(1, 7), r(1, 100)}, LazyFamily::balancing);
  CHECK(bal.identical);
  CHECK(bal.expected == solve_exact(build(family::Balancing{8})));
  CHECK(bal.solutions.size() == 3);
  CHECK(q_invariance(8, {r(1, 6), r(1, 10)}, LazyFamily::lucas).identical);
  CHECK(q_invariance(6, {r(1, 10)}, LazyFamily::balancing_like, 4).identical);
  CHECK(q_invariance(9, {r(1, 6), r(1, 13)}, LazyFamily::truncated_infinite).identical);
  CHECK_THROWS_AS(q_invariance(8, {r(1, 5)}, LazyFamily::balancing), ParameterError);
  CHECK_THROWS_AS(q_invariance(6, {r(1, 3)}, LazyFamily::balancing_like, 4), ParameterError);
}

TEST_CASE("truncation convergence", "[verify]") {
  const auto rows = truncation_convergence({10, 20});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].gap < 1e-7);
  CHECK(rows[1].gap < 1e-14);
  // 80-digit mpmath reference values
  CHECK(rows[0].gap == Catch::Approx(5.390609374e-10).epsilon(1e-8));
  CHECK(rows[1].gap == Catch::Approx(2.633967723e-25).epsilon(1e-8));

  std::vector<std::size_t> sizes;
  for (std::size_t n = 5; n <= 30; ++n) sizes.push_back(n);
  const auto study = truncation_convergence(sizes);
  for (std::size_t k = 0; k + 1 < study.size(); ++k) REQUIRE(study[k + 1].gap / study[k].gap < 0.2);

  CHECK(truncation_convergence({3})[0].gap < 1e-1);
  CHECK_THROWS_AS(truncation_convergence({}), ParameterError);
  CHECK_THROWS_AS(truncation_convergence({2}), ParameterError);
}

TEST_CASE("pi_0 of the 40-state truncation", "[verify]") {
  const auto pi = solve_exact(build(family::TruncatedInfinite{40}));
  const QuadRational diff = QuadRational(pi[0]) - to_rational(QuadInt{1, 0} - beta());
  CHECK(abs_upper_bound(diff) < Rational(1, Integer("10000000000000000000000000000")));
}

TEST_CASE("unnormalised recursion", "[verify]") {
  CHECK(unnormalized_recursion_check(30, 7));
  CHECK(unnormalized_recursion_check(5, 4));
  CHECK_THROWS_AS(unnormalized_recursion_check(30, 8), ParameterError);
  CHECK_THROWS_AS(unnormalized_recursion_check(30, 0), ParameterError);
  CHECK(infinite_recursion_check(30));

  const auto pi = infinite_steady_state(4);
  CHECK(pi[1] == 5 * pi[0] - QuadInt(4));
  CHECK(pi[2] == 29 * pi[0] - QuadInt(24));
  CHECK(pi[3] == 169 * pi[0] - QuadInt(140));
}

TEST_CASE("suite families are all verified", "[verify]") {
  const auto families = suite_families(8);
  CHECK(families.size() == 6 * 24 - 1);
  for (const auto& f : families) REQUIRE(verify_family(f).exact_match);
}
