#include "qtube/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "qtube/features.hpp"
#include "qtube/hull.hpp"
#include "qtube/info.hpp"
#include "qtube/tubes.hpp"

namespace qtube {

namespace {

// Runs body(i) for i in [0, count) on a pool; each index writes only its own slot.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; !failed && (i = next++) < count;) {
        try {
          body(i);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

struct Draws {
  Dataset train;
  Rng rng;  // positioned after the training draws; the evaluation stream continues from here
};

Draws draw_training(const GeneratorSpec& gen, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Sample> s;
  s.reserve(n);
  for (std::size_t i = 0; i < n; ++i) s.push_back(draw_sample(gen, rng));
  return {Dataset(std::move(s)), rng};
}

// Fraction of n_eval fresh draws outside the tube, with its binomial standard error.
std::pair<double, double> held_out_risk(const TubeModel& tube, const GeneratorSpec& gen, std::size_t n_eval, Rng& rng) {
  std::size_t out = 0;
  for (std::size_t i = 0; i < n_eval; ++i) {
    const Sample s = draw_sample(gen, rng);
    if (!tube_contains(tube, s.x, s.y)) ++out;
  }
  const double p = static_cast<double>(out) / static_cast<double>(n_eval);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n_eval))};
}

void require_bounded(const TrialConfig& cfg) {
  if (!cfg.gen.bounded_noise()) {
    throw std::invalid_argument("generator '" + cfg.gen.to_string() +
                                "' has unbounded noise; zero-risk support tubes need bounded support");
  }
}

ValidationReport summarize(const TrialConfig& cfg, std::string label, std::string alt_label, std::vector<TrialRow> rows) {
  ValidationReport r;
  r.config = cfg;
  r.bound_label = std::move(label);
  r.alt_label = std::move(alt_label);
  r.rows = std::move(rows);
  for (const TrialRow& row : r.rows) {
    r.violations += row.violated;
    r.alt_violations += row.alt_violated;
  }
  const double T = static_cast<double>(r.rows.size());
  r.violation_rate = static_cast<double>(r.violations) / T;
  r.alt_violation_rate = static_cast<double>(r.alt_violations) / T;
  const double z = 1.96, p = r.violation_rate;
  const double denom = 1.0 + z * z / T;
  const double mid = (p + z * z / (2.0 * T)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / T + z * z / (4.0 * T * T)) / denom;
  r.ci_lo = std::max(0.0, mid - half);
  r.ci_hi = std::min(1.0, mid + half);
  r.cap = cfg.delta + z * std::sqrt(cfg.delta * (1.0 - cfg.delta) / T);
  return r;
}

CountingMode other(CountingMode m) { return m == CountingMode::kExact ? CountingMode::kLoose : CountingMode::kExact; }

ValidationReport validate_support(const TrialConfig& cfg, bool order_stat) {
  cfg.validate();
  require_bounded(cfg);
  auto eps_for = [&](std::size_t D, CountingMode mode) {
    return order_stat ? order_stat_epsilon(cfg.delta, cfg.n_train, D, mode)
                      : compression_epsilon(cfg.delta, D, cfg.n_train, mode);
  };
  std::vector<TrialRow> rows(cfg.trials);
  parallel_for(cfg.trials, cfg.threads, [&](std::size_t i) {
    TrialRow& row = rows[i];
    row.trial = i;
    row.seed = cfg.base_seed + i;
    auto [train, rng] = draw_training(cfg.gen, cfg.n_train, row.seed);
    const FeatureMap fm = FeatureMap::parse(cfg.features, train);
    const TubeModel tube = fit_support_tube(train, fm);
    const std::size_t D = compression_size(fm);
    std::tie(row.true_risk, row.true_risk_se) = held_out_risk(tube, cfg.gen, cfg.n_eval, rng);
    row.empirical_risk = empirical_risk(tube, train);
    row.bound = eps_for(D, cfg.mode);
    row.violated = row.true_risk > row.bound;
    row.alt_bound = eps_for(D, other(cfg.mode));
    row.alt_violated = row.true_risk > row.alt_bound;
  });
  const std::string base = order_stat ? "order_stat_epsilon" : "compression_epsilon";
  return summarize(cfg, base + " (" + to_string(cfg.mode) + ")", base + " (" + to_string(other(cfg.mode)) + ")",
                   std::move(rows));
}

}  // namespace

void TrialConfig::validate() const {
  if (n_train < 2) throw std::invalid_argument("n_train must be at least 2");
  if (n_eval < 1) throw std::invalid_argument("n_eval must be positive");
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
}

ValidationReport validate_compression(const TrialConfig& cfg) { return validate_support(cfg, false); }

ValidationReport validate_order_stat(const TrialConfig& cfg) { return validate_support(cfg, true); }

ValidationReport validate_hull(const TrialConfig& cfg) {
  cfg.validate();
  if (cfg.n_train < 4) throw std::invalid_argument("hull validation needs n_train >= 4");
  const double bound = hull_mass_bound(cfg.n_train, cfg.delta);
  const double alt = hull_mass_bound_from_compression(cfg.n_train, cfg.delta);
  std::vector<TrialRow> rows(cfg.trials);
  parallel_for(cfg.trials, cfg.threads, [&](std::size_t i) {
    TrialRow& row = rows[i];
    row.trial = i;
    row.seed = cfg.base_seed + i;
    auto [train, rng] = draw_training(cfg.gen, cfg.n_train, row.seed);
    const Polygon poly = convex_hull(train);
    std::size_t out = 0;
    for (std::size_t k = 0; k < cfg.n_eval; ++k) {
      const Sample s = draw_sample(cfg.gen, rng);
      if (!contains(poly, {s.x[0], s.y})) ++out;
    }
    row.true_risk = static_cast<double>(out) / static_cast<double>(cfg.n_eval);
    row.true_risk_se = std::sqrt(row.true_risk * (1.0 - row.true_risk) / static_cast<double>(cfg.n_eval));
    row.bound = bound;
    row.violated = row.true_risk > bound;
    row.alt_bound = alt;
    row.alt_violated = row.true_risk > alt;
  });
  return summarize(cfg, "hull_mass_bound", "compression_epsilon (exact, D=3)", std::move(rows));
}

ValidationReport validate_qt(const TrialConfig& cfg) {
  cfg.validate();
  if (!(cfg.C > 0.0) || !std::isfinite(cfg.C)) throw std::invalid_argument("quantile validation needs C > 0");
  const double alpha = cfg.C / static_cast<double>(cfg.n_train);
  std::vector<TrialRow> rows(cfg.trials);
  parallel_for(cfg.trials, cfg.threads, [&](std::size_t i) {
    TrialRow& row = rows[i];
    row.trial = i;
    row.seed = cfg.base_seed + i;
    auto [train, rng] = draw_training(cfg.gen, cfg.n_train, row.seed);
    const FeatureMap fm = FeatureMap::parse(cfg.features, train);
    const QuantileFit fit = fit_quantile_tube(train, fm, cfg.C);
    const std::size_t D = compression_size(fm);
    std::tie(row.true_risk, row.true_risk_se) = held_out_risk(fit.model, cfg.gen, cfg.n_eval, rng);
    row.empirical_risk = empirical_risk(fit.model, train);
    row.bound = row.empirical_risk + qt_deviation_slack(cfg.delta, D, cfg.n_train, SlackVariant::kCorrectedSign);
    row.violated = row.true_risk - alpha > row.bound;
    row.alt_bound = row.empirical_risk + qt_deviation_slack(cfg.delta, D, cfg.n_train, SlackVariant::kVerbatim);
    row.alt_violated = row.true_risk - alpha > row.alt_bound;
  });
  return summarize(cfg, "empirical risk + qt slack (corrected sign)", "empirical risk + qt slack (verbatim)",
                   std::move(rows));
}

ValidationReport run_validation(const TrialConfig& cfg) {
  switch (cfg.bound) {
    case BoundKind::kCompression:
      return validate_compression(cfg);
    case BoundKind::kOrderStat:
      return validate_order_stat(cfg);
    case BoundKind::kHull:
      return validate_hull(cfg);
    case BoundKind::kQtDeviation:
      return validate_qt(cfg);
  }
  throw std::invalid_argument("unknown bound kind");
}

double analytic_mutual_information(const GeneratorSpec& gen) {
  switch (gen.kind) {
    case GeneratorKind::kIndependent:
      return 0.0;
    case GeneratorKind::kLinear: {
      if (!(gen.half_width > 0.0) || gen.slope == 0.0) {
        throw std::invalid_argument("analytic information needs a nonzero slope and positive noise width");
      }
      // Y = sX + U is trapezoidal: ramps of length a, plateau 1/b, a = min(|s|, 2u), b = max(|s|, 2u).
      const double a = std::min(std::abs(gen.slope), 2.0 * gen.half_width);
      const double b = std::max(std::abs(gen.slope), 2.0 * gen.half_width);
      const double h_y = std::log(b) + a / (2.0 * b);
      return h_y - std::log(2.0 * gen.half_width);
    }
    default:
      throw std::invalid_argument("no closed-form mutual information for generator '" + gen.to_string() + "'");
  }
}

MiExperimentReport mi_experiment(const TrialConfig& cfg, const std::vector<std::size_t>& gap_sizes, std::size_t gap_trials) {
  cfg.validate();
  MiExperimentReport rep;
  rep.config = cfg;
  rep.analytic_I = analytic_mutual_information(cfg.gen);

  auto run_trial = [&](std::size_t n, std::uint64_t seed) {
    MiTrialRow row;
    row.seed = seed;
    const Dataset train = draw_training(cfg.gen, n, seed).train;
    const FeatureMap fm = FeatureMap::parse(cfg.features, train);
    const TubeModel tube = fit_support_tube(train, fm);
    row.epsilon = compression_epsilon(cfg.delta, compression_size(fm), n, cfg.mode);
    row.H_Y = marginal_entropy(train.responses());
    row.mean_log_width = mean_log_width(tube, train);
    const MiReport r = mi_lower_bound(row.H_Y, row.mean_log_width, row.epsilon);
    row.mi_lower = r.mi_lower;
    row.valid = r.valid;
    row.violated = r.mi_lower > rep.analytic_I;
    return row;
  };

  rep.rows.resize(cfg.trials);
  parallel_for(cfg.trials, cfg.threads, [&](std::size_t i) {
    rep.rows[i] = run_trial(cfg.n_train, cfg.base_seed + i);
    rep.rows[i].trial = i;
  });
  for (const MiTrialRow& row : rep.rows) rep.violations += row.violated;
  rep.violation_rate = static_cast<double>(rep.violations) / static_cast<double>(cfg.trials);

  for (std::size_t n : gap_sizes) {
    std::vector<double> gaps(gap_trials);
    parallel_for(gap_trials, cfg.threads,
                 [&](std::size_t i) { gaps[i] = rep.analytic_I - run_trial(n, cfg.base_seed + i).mi_lower; });
    GapPoint g{n, gap_trials, 0.0, 0.0};
    if (gap_trials > 0) {
      for (double v : gaps) g.mean_gap += v;
      g.mean_gap /= static_cast<double>(gap_trials);
      std::sort(gaps.begin(), gaps.end());
      const std::size_t h = gap_trials / 2;
      g.median_gap = gap_trials % 2 ? gaps[h] : 0.5 * (gaps[h - 1] + gaps[h]);
    }
    rep.gap_trajectory.push_back(g);
  }
  return rep;
}

}  // namespace qtube
