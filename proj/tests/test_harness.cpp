#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "qtube/harness.hpp"

using namespace qtube;

namespace {

TrialConfig small(const std::string& gen, BoundKind bound) {
  TrialConfig cfg;
  cfg.gen = GeneratorSpec::parse(gen);
  cfg.n_train = 200;
  cfg.n_eval = 20000;
  cfg.trials = 40;
  cfg.bound = bound;
  cfg.base_seed = 100;
  return cfg;
}

}  // namespace

TEST_CASE("compression validation stays under the cap") {
  const ValidationReport r = validate_compression(small("linear", BoundKind::kCompression));
  CHECK(r.rows.size() == 40);
  CHECK(r.violation_rate == static_cast<double>(r.violations) / 40.0);
  CHECK(r.within_cap());
  CHECK(r.cap == doctest::Approx(0.05 + 1.96 * std::sqrt(0.05 * 0.95 / 40)));
  for (const TrialRow& row : r.rows) {
    CHECK(row.empirical_risk == 0.0);
    CHECK(row.bound == doctest::Approx(0.10494562968971375));
    CHECK(row.alt_bound == doctest::Approx(0.09229682393381274));
    CHECK(row.seed == 100 + row.trial);
  }
  CHECK(r.ci_lo <= r.violation_rate);
  CHECK(r.ci_hi >= r.violation_rate);
}

TEST_CASE("smaller training sets give larger bounds and still hold") {
  TrialConfig cfg = small("linear", BoundKind::kCompression);
  cfg.n_train = 50;
  const ValidationReport r = validate_compression(cfg);
  CHECK(r.rows[0].bound > 0.1049);
  CHECK(r.within_cap());
}

TEST_CASE("validation is reproducible and thread-count independent") {
  TrialConfig cfg = small("hetero", BoundKind::kOrderStat);
  cfg.trials = 6;
  cfg.threads = 1;
  const ValidationReport serial = validate_order_stat(cfg);
  cfg.threads = 4;
  const ValidationReport parallel = validate_order_stat(cfg);
  REQUIRE(serial.rows.size() == parallel.rows.size());
  for (std::size_t i = 0; i < serial.rows.size(); ++i) {
    CHECK(serial.rows[i].true_risk == parallel.rows[i].true_risk);
    CHECK(serial.rows[i].bound == parallel.rows[i].bound);
  }
  cfg.trials = 1;
  const ValidationReport one = validate_order_stat(cfg);
  CHECK(one.rows.size() == 1);
  CHECK(one.rows[0].true_risk == serial.rows[0].true_risk);
}

TEST_CASE("order statistics validation") {
  const ValidationReport r = validate_order_stat(small("linear", BoundKind::kOrderStat));
  CHECK(r.within_cap());
  CHECK(r.rows[0].bound == doctest::Approx(order_stat_epsilon(0.05, 200, 3, CountingMode::kLoose)));
}

TEST_CASE("unbounded noise is rejected for support-tube bounds") {
  CHECK_THROWS_AS(validate_compression(small("gauss", BoundKind::kCompression)), std::invalid_argument);
  CHECK_THROWS_AS(validate_order_stat(small("gauss", BoundKind::kOrderStat)), std::invalid_argument);
  TrialConfig cfg = small("linear", BoundKind::kCompression);
  cfg.trials = 0;
  CHECK_THROWS_AS(validate_compression(cfg), std::invalid_argument);
}

TEST_CASE("hull validation on the square") {
  TrialConfig cfg = small("square", BoundKind::kHull);
  cfg.n_train = 250;
  const ValidationReport r = validate_hull(cfg);
  CHECK(r.rows[0].bound == doctest::Approx(0.073068481891258017));
  CHECK(r.rows[0].true_risk > 0.0);
  CHECK(r.rows[0].true_risk < 0.2);
}

TEST_CASE("tiny hull samples clamp the bound") {
  TrialConfig cfg = small("disk", BoundKind::kHull);
  cfg.n_train = 10;
  cfg.trials = 10;
  const ValidationReport r = validate_hull(cfg);
  CHECK(r.rows[0].bound == 1.0);
  CHECK(r.violations == 0);
}

TEST_CASE("quantile validation") {
  TrialConfig cfg = small("linear", BoundKind::kQtDeviation);
  cfg.n_train = 500;
  cfg.C = 25.0;
  cfg.trials = 10;
  const ValidationReport r = validate_qt(cfg);
  CHECK(r.violations == 0);
  for (const TrialRow& row : r.rows) {
    CHECK(row.empirical_risk <= 25.0 / 500.0 + 1e-12);
    CHECK(row.alt_bound <= row.bound);
  }
  cfg.C = 0.0;
  CHECK_THROWS_AS(validate_qt(cfg), std::invalid_argument);
}

TEST_CASE("a budget below one makes quantile validation match support-tube validation") {
  TrialConfig cfg = small("linear", BoundKind::kQtDeviation);
  cfg.trials = 5;
  cfg.C = 0.5;
  const ValidationReport q = validate_qt(cfg);
  const ValidationReport s = validate_compression(cfg);
  for (std::size_t i = 0; i < 5; ++i) CHECK(q.rows[i].true_risk == doctest::Approx(s.rows[i].true_risk).epsilon(1e-12));
}

TEST_CASE("closed-form mutual information matches quadrature") {
  for (auto [s, u] : {std::pair{2.0, 0.25}, {0.3, 0.25}, {1.0, 0.5}}) {
    GeneratorSpec g;
    g.slope = s;
    g.half_width = u;
    const double hy = oracle::linear_uniform_entropy_quadrature(s, u, 400000);
    CHECK(analytic_mutual_information(g) == doctest::Approx(hy - std::log(2.0 * u)).epsilon(1e-7));
  }
  CHECK(analytic_mutual_information(GeneratorSpec::parse("independent")) == 0.0);
  CHECK_THROWS_AS(analytic_mutual_information(GeneratorSpec::parse("hetero")), std::invalid_argument);
}

TEST_CASE("mutual information experiment") {
  TrialConfig cfg = small("linear:slope=2,u=0.25", BoundKind::kCompression);
  cfg.trials = 20;
  cfg.n_train = 1000;
  const MiExperimentReport r = mi_experiment(cfg, {200, 2000}, 15);
  CHECK(r.analytic_I == doctest::Approx(std::log(2.0) + 0.125 - std::log(0.5)));
  CHECK(r.violations <= 1);
  REQUIRE(r.gap_trajectory.size() == 2);
  CHECK(r.gap_trajectory[1].median_gap < r.gap_trajectory[0].median_gap);

  TrialConfig indep = small("independent", BoundKind::kCompression);
  indep.features = "intercept";
  indep.trials = 10;
  const MiExperimentReport z = mi_experiment(indep, {}, 0);
  CHECK(z.analytic_I == 0.0);
  for (const MiTrialRow& row : z.rows) {
    CHECK(row.valid);
    CHECK(row.mi_lower <= 0.0);
  }
}
