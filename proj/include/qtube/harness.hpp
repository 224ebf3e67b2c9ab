#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "qtube/bounds.hpp"
#include "qtube/dataset.hpp"

namespace qtube {

struct TrialConfig {
  GeneratorSpec gen;
  std::size_t n_train = 200;
  std::size_t n_eval = 100'000;
  std::size_t trials = 200;
  double delta = 0.05;
  /// Feature map spec as accepted by FeatureMap::parse, laid out on each training draw.
  std::string features = "affine";
  BoundKind bound = BoundKind::kCompression;
  CountingMode mode = CountingMode::kLoose;
  std::uint64_t base_seed = 1;
  /// Exclusion budget for quantile-tube validation.
  double C = 0.0;
  /// Worker threads; 0 picks the hardware concurrency.
  unsigned threads = 0;

  /// Throws std::invalid_argument on out-of-range fields.
  void validate() const;
};

/// One Monte Carlo trial. `bound` is the bound under test; `alt_bound` the companion (other
/// counting mode, verbatim slack, or compression-derived hull value).
struct TrialRow {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double true_risk = 0.0;
  double true_risk_se = 0.0;
  double empirical_risk = 0.0;
  double bound = 0.0;
  bool violated = false;
  double alt_bound = 0.0;
  bool alt_violated = false;
};

struct ValidationReport {
  TrialConfig config;
  std::string bound_label;
  std::string alt_label;
  std::vector<TrialRow> rows;
  std::size_t violations = 0;
  double violation_rate = 0.0;
  /// Wilson 95% interval for the violation probability.
  double ci_lo = 0.0, ci_hi = 0.0;
  /// delta + 1.96 sqrt(delta (1 - delta) / trials).
  double cap = 0.0;
  std::size_t alt_violations = 0;
  double alt_violation_rate = 0.0;

  bool within_cap() const { return violation_rate <= cap; }
};

/// Support-tube fits against compression_epsilon. Rejects unbounded-noise generators.
ValidationReport validate_compression(const TrialConfig& cfg);
/// Support-tube fits against order_stat_epsilon. Rejects unbounded-noise generators.
ValidationReport validate_order_stat(const TrialConfig& cfg);
/// Hull of the training cloud against hull_mass_bound.
ValidationReport validate_hull(const TrialConfig& cfg);
/// Quantile-tube fits with budget cfg.C: violated when true risk - C/n exceeds empirical risk
/// plus the corrected-sign slack; the verbatim slack is the companion.
ValidationReport validate_qt(const TrialConfig& cfg);
/// Dispatches on cfg.bound.
ValidationReport run_validation(const TrialConfig& cfg);

/// I = H(Y) - H(Y|X) for generators where it is known in closed form: linear with uniform
/// noise and the independent pair. Throws std::invalid_argument otherwise.
double analytic_mutual_information(const GeneratorSpec& gen);

struct MiTrialRow {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double H_Y = 0.0;
  double mean_log_width = 0.0;
  double epsilon = 0.0;
  double mi_lower = 0.0;
  bool valid = false;
  /// mi_lower > analytic I.
  bool violated = false;
};

struct GapPoint {
  std::size_t n = 0;
  std::size_t trials = 0;
  double median_gap = 0.0;
  double mean_gap = 0.0;
};

struct MiExperimentReport {
  TrialConfig config;
  double analytic_I = 0.0;
  std::vector<MiTrialRow> rows;
  std::size_t violations = 0;
  double violation_rate = 0.0;
  std::vector<GapPoint> gap_trajectory;
};

/// Support tube, compression epsilon and spacing-estimated H(Y) per trial at cfg.n_train, then
/// the median gap I - mi_lower at each size in `gap_sizes` over `gap_trials` trials.
MiExperimentReport mi_experiment(const TrialConfig& cfg, const std::vector<std::size_t>& gap_sizes = {200, 1000, 5000},
                                 std::size_t gap_trials = 50);

}  // namespace qtube
