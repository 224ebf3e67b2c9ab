#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "qtube/bounds.hpp"
#include "qtube/errors.hpp"
#include "qtube/info.hpp"

using namespace qtube;

TEST_CASE("binary entropy values") {
  CHECK(binary_entropy(0.5) == doctest::Approx(std::numbers::ln2).epsilon(1e-15));
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.10494) == doctest::Approx(0.33580362340026288).epsilon(1e-12));
  CHECK_THROWS_AS(binary_entropy(-0.01), std::invalid_argument);
  CHECK_THROWS_AS(binary_entropy(1.01), std::invalid_argument);
  CHECK_THROWS_AS(binary_entropy(std::nan("")), std::invalid_argument);
}

TEST_CASE("binary entropy symmetry and range") {
  for (int k = 0; k <= 1000; ++k) {
    const double e = k / 1000.0;
    CHECK(std::abs(binary_entropy(e) - binary_entropy(1.0 - e)) <= 1e-15);
    CHECK(binary_entropy(e) >= 0.0);
    CHECK(binary_entropy(e) <= std::numbers::ln2 + 1e-15);
  }
}

TEST_CASE("constant-width log term") {
  const Dataset d = fixtures::values({0, 1, 2, 3});
  TubeModel m{FeatureMap::affine(1), {0.0, 1.0}, 0.5};
  CHECK(mean_log_width(m, d) == 0.0);
  m.t = 0.25;
  CHECK(mean_log_width(m, d) == doctest::Approx(-std::numbers::ln2).epsilon(1e-15));
  m.t = 0.0;
  CHECK_THROWS_AS(mean_log_width(m, d), DataError);
}

TEST_CASE("multi-tube log term matches direct averaging") {
  const Dataset d = generate_synthetic(GeneratorSpec::parse("hetero"), 300, 21);
  const FeatureMap fm = FeatureMap::rbf_grid(d, 6);
  const std::vector<double> C{30.0, 6.0, 1.0};
  const MultiTubeModel m = fit_multi_quantile(d, fm, C);
  for (std::size_t l = 0; l < m.levels(); ++l) {
    // Reverse summation order, widths from the evaluated intervals.
    double sum = 0.0;
    for (std::size_t k = d.size(); k-- > 0;) {
      const Interval iv = m.interval(d[k].x, l);
      sum += std::log(iv.hi - iv.lo);
    }
    const double direct = sum / static_cast<double>(d.size());
    CHECK(std::abs(mean_log_width(m, l, d) - direct) <= 1e-12);
  }
  CHECK_THROWS_AS(mean_log_width(m, 99, d), std::invalid_argument);
}

TEST_CASE("spacing estimator on uniforms") {
  Rng rng(7);
  std::vector<double> u1, u2;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    u1.push_back(u);
    u2.push_back(2.0 * u);
  }
  CHECK(std::abs(marginal_entropy(u1)) <= 0.02);
  CHECK(std::abs(marginal_entropy(u2) - std::numbers::ln2) <= 0.02);
  // Scaling law holds exactly for the estimator itself.
  CHECK(marginal_entropy(u2) - marginal_entropy(u1) == doctest::Approx(std::numbers::ln2).epsilon(1e-9));
}

TEST_CASE("spacing estimator on a Gaussian") {
  Rng rng(8);
  std::vector<double> g;
  for (int i = 0; i < 100000; ++i) g.push_back(rng.normal());
  const double truth = 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e);
  CHECK(std::abs(marginal_entropy(g) - truth) <= 0.03);
}

TEST_CASE("spacing estimator errors and determinism") {
  CHECK_THROWS_AS(marginal_entropy(std::vector<double>{1, 1, 1, 1, 1}), DataError);
  CHECK_THROWS_AS(marginal_entropy(std::vector<double>{1, 2, 3}), DataError);
  CHECK_THROWS_AS(marginal_entropy(std::vector<double>{1, 2, 3, 4}, 4), std::invalid_argument);
  const std::vector<double> y{0.3, 0.1, 0.7, 0.2, 0.9, 0.4};
  const std::vector<double> shuffled{0.9, 0.4, 0.3, 0.7, 0.1, 0.2};
  CHECK(marginal_entropy(y) == marginal_entropy(shuffled));
  CHECK(marginal_entropy(y, 1) != marginal_entropy(y, 2));
}

TEST_CASE("conditional entropy upper bound") {
  CHECK(cond_entropy_upper(1.7, -0.3, 0.0) == -0.3);
  CHECK(cond_entropy_upper(1.0, 0.0, 0.1) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(cond_entropy_upper(0.5, -0.693, 0.10494) ==
        doctest::Approx(0.10494 * 0.5 - 0.89506 * 0.693).epsilon(1e-12));
  CHECK_THROWS_AS(cond_entropy_upper(1.0, 0.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(cond_entropy_upper(1.0, 0.0, -0.1), std::invalid_argument);
}

TEST_CASE("mutual information lower bound") {
  const MiReport indep = mi_lower_bound(0.0, 0.0, 0.1);
  CHECK(indep.mi_lower == doctest::Approx(-binary_entropy(0.1)).epsilon(1e-15));
  CHECK(indep.mi_lower <= 0.0);
  CHECK(indep.valid);
  CHECK(mi_lower_bound(1.0, 0.0, 0.0).mi_lower == 1.0);
  const MiReport bad = mi_lower_bound(1.0, 0.0, 0.6);
  CHECK_FALSE(bad.valid);
  CHECK(bad.h_eps == doctest::Approx(binary_entropy(0.6)));
}

TEST_CASE("mutual information identity and monotonicity") {
  for (double H : {-0.5, 0.2, 1.3}) {
    for (double L : {-1.0, -0.2, 0.4}) {
      for (double e = 0.0; e < 0.5; e += 0.01) {
        const MiReport r = mi_lower_bound(H, L, e);
        CHECK(std::abs(r.mi_lower - (H - cond_entropy_upper(H, L, e) - binary_entropy(e))) <= 1e-12);
        CHECK(std::abs(r.ce_upper - cond_entropy_upper(H, L, e)) <= 1e-15);
        CHECK(r.h_eps >= 0.0);
        CHECK(r.h_eps <= std::numbers::ln2);
        CHECK(mi_lower_bound(H + 0.1, L, e).mi_lower > r.mi_lower);
        CHECK(mi_lower_bound(H, L + 0.1, e).mi_lower < r.mi_lower);
        if (H - L > 0.0) CHECK(mi_lower_bound(H, L, e + 0.005).mi_lower < r.mi_lower);
      }
    }
  }
}

TEST_CASE("fitted bound on the linear model sits just below the true information") {
  const double true_hy = oracle::linear_uniform_entropy_quadrature(2.0, 0.25, 200000);
  const double true_mi = true_hy - std::log(0.5);
  const Dataset d = generate_synthetic(GeneratorSpec::parse("linear:slope=2,u=0.25"), 2000, 99);
  const FeatureMap fm = FeatureMap::affine(1);
  const TubeModel tube = fit_support_tube(d, fm);
  const double eps = compression_epsilon(0.05, compression_size(fm), d.size(), CountingMode::kLoose);
  const MiReport r = mi_lower_bound(marginal_entropy(d.responses()), mean_log_width(tube, d), eps);
  CHECK(r.valid);
  CHECK(r.mi_lower < true_mi);
  CHECK(true_mi - r.mi_lower < 0.15);
}
