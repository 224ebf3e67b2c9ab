#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "qtube/dataset.hpp"
#include "qtube/lp.hpp"

using namespace qtube;

namespace {

double max_violation(const LinearProgram& lp, const std::vector<double>& z) {
  double worst = 0.0;
  for (std::size_t i = 0; i < lp.num_rows(); ++i) {
    const double r = std::inner_product(lp.A[i].begin(), lp.A[i].end(), z.begin(), 0.0) - lp.b[i];
    if (lp.sense[i] == RowSense::kLessEqual) worst = std::max(worst, r);
    if (lp.sense[i] == RowSense::kGreaterEqual) worst = std::max(worst, -r);
    if (lp.sense[i] == RowSense::kEqual) worst = std::max(worst, std::abs(r));
  }
  return worst;
}

}  // namespace

TEST_CASE("single active lower bound") {
  LinearProgram lp(1);
  lp.c = {1.0};
  lp.add_row({1.0}, RowSense::kGreaterEqual, 3.0);
  const auto sol = solve(lp);
  REQUIRE(sol.optimal());
  CHECK(sol.z[0] == doctest::Approx(3.0));
  CHECK(sol.objective == doctest::Approx(3.0));
  CHECK(sol.active_rows == std::vector<std::size_t>{0});
}

TEST_CASE("textbook vertex of x + y <= 1") {
  LinearProgram lp(2);
  lp.c = {-1.0, -1.0};
  lp.add_row({1.0, 1.0}, RowSense::kLessEqual, 1.0);
  const auto sol = solve(lp);
  REQUIRE(sol.optimal());
  CHECK(sol.objective == doctest::Approx(-1.0));
  CHECK(sol.active_rows == std::vector<std::size_t>{0});
  CHECK(sol.duals[0] == doctest::Approx(-1.0));
}

TEST_CASE("infeasible and unbounded are statuses, not exceptions") {
  LinearProgram infeasible(1);
  infeasible.c = {1.0};
  infeasible.add_row({1.0}, RowSense::kLessEqual, 1.0);
  infeasible.add_row({1.0}, RowSense::kGreaterEqual, 2.0);
  CHECK(solve(infeasible).status == LpStatus::kInfeasible);

  LinearProgram unbounded(2);
  unbounded.c = {-1.0, 0.0};
  unbounded.add_row({0.0, 1.0}, RowSense::kLessEqual, 1.0);
  CHECK(solve(unbounded).status == LpStatus::kUnbounded);
}

TEST_CASE("free variables are split internally") {
  LinearProgram lp(1);
  lp.c = {1.0};
  lp.bounds = {VarBound::kFree};
  lp.add_row({1.0}, RowSense::kGreaterEqual, -5.0);
  const auto sol = solve(lp);
  REQUIRE(sol.optimal());
  CHECK(sol.z[0] == doctest::Approx(-5.0));
}

TEST_CASE("redundant equality rows keep an artificial at zero") {
  LinearProgram lp(2);
  lp.c = {1.0, 2.0};
  lp.add_row({1.0, 1.0}, RowSense::kEqual, 2.0);
  lp.add_row({2.0, 2.0}, RowSense::kEqual, 4.0);
  const auto sol = solve(lp);
  REQUIRE(sol.optimal());
  CHECK(sol.objective == doctest::Approx(2.0));
  CHECK(sol.dual_objective == doctest::Approx(2.0));
}

TEST_CASE("malformed programs are rejected") {
  LinearProgram lp(2);
  lp.A.push_back({1.0});
  lp.b.push_back(1.0);
  lp.sense.push_back(RowSense::kLessEqual);
  CHECK_THROWS_AS(solve(lp), std::invalid_argument);
  LinearProgram nan(1);
  nan.c = {std::nan("")};
  CHECK_THROWS_AS(solve(nan), std::invalid_argument);
}

TEST_CASE("objective matches vertex enumeration on random small programs") {
  Rng rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t vars = 2 + rng.next() % 3;
    const std::size_t rows = 2 + rng.next() % 7;
    const LinearProgram lp = fixtures::random_bounded_lp(rng, vars, rows);
    const auto oracle = oracle::enumerate_vertices(lp);
    const auto sol = solve(lp);
    REQUIRE(oracle.feasible);
    REQUIRE(sol.optimal());
    CHECK(sol.objective == doctest::Approx(oracle.objective).epsilon(1e-8));
    CHECK(max_violation(lp, sol.z) <= 1e-9 * (1.0 + 10.0));
    // Duality: b.y reproduces the objective at an optimal basis.
    CHECK(std::abs(sol.dual_objective - sol.objective) <= 1e-8 * (1.0 + std::abs(sol.objective)));
  }
}

TEST_CASE("row permutation leaves the optimum unchanged") {
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    LinearProgram lp = fixtures::random_bounded_lp(rng, 3, 6);
    LinearProgram perm = lp;
    std::vector<std::size_t> order(lp.num_rows());
    std::iota(order.begin(), order.end(), 0);
    std::reverse(order.begin(), order.end());
    for (std::size_t i = 0; i < order.size(); ++i) {
      perm.A[i] = lp.A[order[i]];
      perm.b[i] = lp.b[order[i]];
      perm.sense[i] = lp.sense[order[i]];
    }
    const auto a = solve(lp), b = solve(perm);
    REQUIRE(a.optimal());
    REQUIRE(b.optimal());
    CHECK(std::abs(a.objective - b.objective) <= 1e-9 * (1.0 + std::abs(a.objective)));
  }
}

TEST_CASE("Beale's cycling example terminates") {
  // Cycles under textbook Dantzig pricing with naive ratio tie-breaks.
  const LinearProgram lp = fixtures::beale_lp();
  for (bool bland : {false, true}) {
    LpOptions opt;
    opt.always_bland = bland;
    opt.max_pivots = 10'000;
    const auto sol = solve(lp, opt);
    REQUIRE(sol.optimal());
    CHECK(sol.objective == doctest::Approx(-1.25));
    CHECK(sol.pivots <= 10'000);
  }
}

TEST_CASE("Kuhn's degenerate example terminates") {
  const LinearProgram lp = fixtures::kuhn_lp();
  const auto oracle = oracle::enumerate_vertices(lp);
  LpOptions opt;
  opt.max_pivots = 10'000;
  opt.degenerate_run_for_bland = 1;
  const auto sol = solve(lp, opt);
  REQUIRE(sol.optimal());
  CHECK(sol.objective == doctest::Approx(oracle.objective));
}

TEST_CASE("active_sample_set maps rows to distinct samples") {
  LpSolution sol;
  sol.status = LpStatus::kOptimal;
  sol.active_rows = {2, 7};
  std::vector<std::optional<std::size_t>> row_map(8);
  row_map[2] = 1;
  row_map[7] = 3;
  row_map[3] = 3;
  CHECK(active_sample_set(sol, row_map) == std::vector<std::size_t>{1, 3});
  sol.active_rows.clear();
  CHECK(active_sample_set(sol, row_map).empty());
  sol.active_rows = {0};
  CHECK(active_sample_set(sol, row_map).empty());
}
