#include "qtube/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace qtube {

namespace {

double clamp01(double v) {
  if (std::isnan(v)) return 1.0;
  return std::clamp(v, 0.0, 1.0);
}

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
}

}  // namespace

std::string to_string(CountingMode mode) { return mode == CountingMode::kExact ? "exact" : "loose"; }

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::kCompression:
      return "compression";
    case BoundKind::kOrderStat:
      return "orderstat";
    case BoundKind::kHull:
      return "hull";
    case BoundKind::kQtDeviation:
      return "qt";
  }
  return "?";
}

std::string to_string(SlackVariant variant) {
  return variant == SlackVariant::kVerbatim ? "verbatim" : "corrected-sign";
}

CountingMode parse_counting_mode(const std::string& text) {
  if (text == "exact") return CountingMode::kExact;
  if (text == "loose") return CountingMode::kLoose;
  throw std::invalid_argument("counting mode must be exact or loose, got '" + text + "'");
}

BoundKind parse_bound_kind(const std::string& text) {
  if (text == "compression") return BoundKind::kCompression;
  if (text == "orderstat" || text == "order-stat") return BoundKind::kOrderStat;
  if (text == "hull") return BoundKind::kHull;
  if (text == "qt") return BoundKind::kQtDeviation;
  throw std::invalid_argument("unknown bound kind '" + text + "'");
}

double log_count_tubes(std::size_t n, std::size_t D, CountingMode mode) {
  if (D < 1) throw std::invalid_argument("count_tubes: D must be >= 1");
  if (D > n) throw std::invalid_argument("count_tubes: D must not exceed n");
  const double nd = static_cast<double>(n), dd = static_cast<double>(D);
  if (mode == CountingMode::kLoose) return dd * std::log(2.0 * nd * std::numbers::e / dd);
  if (D == 1) return -std::numeric_limits<double>::infinity();
  const double log_binom = std::lgamma(nd + 1.0) - std::lgamma(dd + 1.0) - std::lgamma(nd - dd + 1.0);
  // ln(2^(D-1) - 1) = (D-1) ln 2 + ln(1 - 2^-(D-1))
  const double log_assign = (dd - 1.0) * std::numbers::ln2 + std::log1p(-std::exp2(-(dd - 1.0)));
  return log_binom + log_assign;
}

double count_tubes(std::size_t n, std::size_t D, CountingMode mode) {
  const double log_k = log_count_tubes(n, D, mode);
  if (mode == CountingMode::kExact && log_k < 52.0 * std::numbers::ln2) {
    // Multiplicative binomial: every partial product is an integer below 2^53, so exact.
    double binom = 1.0;
    const std::size_t k = std::min(D, n - D);
    for (std::size_t i = 0; i < k; ++i) binom = binom * static_cast<double>(n - i) / static_cast<double>(i + 1);
    return binom * (std::exp2(static_cast<double>(D - 1)) - 1.0);
  }
  return std::exp(log_k);
}

double compression_epsilon(double delta, std::size_t D, std::size_t n, CountingMode mode) {
  check_delta(delta);
  if (n <= D) throw std::invalid_argument("compression bound needs n > D");
  const double log_k = log_count_tubes(n, D, mode);
  return clamp01((log_k - std::log(delta)) / static_cast<double>(n - D));
}

namespace {

// Unclamped K (1-eps)^(n-1) (1 + (n-1) eps); equal to the order-statistics expression.
double order_stat_raw(double epsilon, std::size_t n, std::size_t D, CountingMode mode) {
  if (epsilon >= 1.0) return 0.0;
  const double log_k = log_count_tubes(n, D, mode);
  const double nm1 = static_cast<double>(n - 1);
  return std::exp(log_k + nm1 * std::log1p(-epsilon) + std::log1p(nm1 * epsilon));
}

}  // namespace

double order_stat_confidence(double epsilon, std::size_t n, std::size_t D, CountingMode mode) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in [0, 1]");
  if (n < 2) throw std::invalid_argument("order-statistics bound needs n >= 2");
  return clamp01(order_stat_raw(epsilon, n, D, mode));
}

double order_stat_epsilon(double delta, std::size_t n, std::size_t D, CountingMode mode) {
  check_delta(delta);
  if (n < 2) throw std::invalid_argument("order-statistics bound needs n >= 2");
  if (order_stat_raw(0.0, n, D, mode) <= delta) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (order_stat_raw(mid, n, D, mode) > delta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

double hull_mass_bound(std::size_t n, double delta) {
  check_delta(delta);
  if (n <= 3) throw std::invalid_argument("hull bound needs n > 3");
  const double nd = static_cast<double>(n);
  return clamp01((3.0 * std::log(nd) - 1.5122 - std::log(delta)) / (nd - 3.0));
}

double hull_mass_bound_from_compression(std::size_t n, double delta) {
  return compression_epsilon(delta, 3, n, CountingMode::kExact);
}

double qt_deviation_slack(double delta, std::size_t D, std::size_t n, SlackVariant variant) {
  if (!(delta > 0.0 && delta <= 8.0)) throw std::invalid_argument("qt slack needs delta in (0, 8]");
  if (D < 1 || D >= n) throw std::invalid_argument("qt slack needs 1 <= D < n");
  const double nd = static_cast<double>(n), dd = static_cast<double>(D);
  const double complexity = 2.0 * dd * std::log(2.0 * nd * std::numbers::e / dd);
  const double confidence = 2.0 * std::log(8.0 / delta);
  const double radicand =
      variant == SlackVariant::kVerbatim ? complexity - confidence : complexity + confidence;
  return 2.0 * std::sqrt(std::max(radicand, 0.0) / nd);
}

BoundReport make_bound_report(BoundKind kind, std::size_t n, std::size_t D, double delta, CountingMode mode,
                              SlackVariant variant) {
  BoundReport r;
  r.kind = kind;
  r.n = n;
  r.D = D;
  r.delta = delta;
  r.counting_mode = mode;
  const CountingMode other = mode == CountingMode::kExact ? CountingMode::kLoose : CountingMode::kExact;
  switch (kind) {
    case BoundKind::kCompression:
      r.epsilon = compression_epsilon(delta, D, n, mode);
      r.alternative = compression_epsilon(delta, D, n, other);
      r.alternative_label = "epsilon_" + to_string(other);
      r.note =
          "exact counting C(n,D)(2^(D-1)-1) and loose counting (2ne/D)^D differ; a quoted K <= 3e8 for "
          "n=200, D=3 matches neither (exact 3.94e6, loose 4.76e7); loose counting with natural logs gives "
          "0.1049 at delta=0.05";
      break;
    case BoundKind::kOrderStat:
      r.epsilon = order_stat_epsilon(delta, n, D, mode);
      r.alternative = compression_epsilon(delta, D, n, mode);
      r.alternative_label = "compression_epsilon";
      break;
    case BoundKind::kHull:
      r.D = 3;
      r.epsilon = hull_mass_bound(n, delta);
      r.alternative = hull_mass_bound_from_compression(n, delta);
      r.alternative_label = "compression_epsilon_D3_exact";
      r.note = "constant -1.5122 taken verbatim; exact D=3 counting gives 3 ln n - 0.693 asymptotically";
      break;
    case BoundKind::kQtDeviation:
      check_delta(delta);
      r.epsilon = qt_deviation_slack(delta, D, n, variant);
      r.alternative = qt_deviation_slack(
          delta, D, n, variant == SlackVariant::kVerbatim ? SlackVariant::kCorrectedSign : SlackVariant::kVerbatim);
      r.alternative_label = variant == SlackVariant::kVerbatim ? "slack_corrected_sign" : "slack_verbatim";
      r.note = "deviation slack bounds a difference of risks and is not clamped";
      break;
  }
  return r;
}

}  // namespace qtube
