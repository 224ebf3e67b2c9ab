#pragma once

#include <cstddef>
#include <string>

namespace qtube {

/// exact: C(n,D) (2^(D-1) - 1).  loose: (2ne/D)^D.
enum class CountingMode { kExact, kLoose };

enum class BoundKind { kCompression, kOrderStat, kHull, kQtDeviation };

enum class SlackVariant { kVerbatim, kCorrectedSign };

std::string to_string(CountingMode mode);
std::string to_string(BoundKind kind);
std::string to_string(SlackVariant variant);
CountingMode parse_counting_mode(const std::string& text);
BoundKind parse_bound_kind(const std::string& text);

/// Natural log of the number of tubes determined by D of n samples. -inf when the count is 0.
double log_count_tubes(std::size_t n, std::size_t D, CountingMode mode);
/// The count itself; exact integers are reproduced exactly while they fit in a double.
double count_tubes(std::size_t n, std::size_t D, CountingMode mode);

/// Risk bound for zero-empirical-risk tubes compressible to D samples:
/// (ln K + ln(1/delta)) / (n - D), clamped to [0, 1].
double compression_epsilon(double delta, std::size_t D, std::size_t n, CountingMode mode);

/// K (n (1-eps)^(n-1) - (n-1)(1-eps)^n), clamped to [0, 1].
double order_stat_confidence(double epsilon, std::size_t n, std::size_t D, CountingMode mode);
/// Smallest eps with order_stat_confidence(eps) <= delta, by bisection to 1e-12.
double order_stat_epsilon(double delta, std::size_t n, std::size_t D, CountingMode mode);

/// (3 ln n - 1.5122 - ln delta) / (n - 3), clamped to [0, 1].
double hull_mass_bound(std::size_t n, double delta);
/// compression_epsilon with D = 3 and exact counting, reported next to hull_mass_bound.
double hull_mass_bound_from_compression(std::size_t n, double delta);

/// 2 sqrt((2D ln(2ne/D) -/+ 2 ln(8/delta)) / n). The verbatim variant subtracts the confidence
/// term (radicand clamped at 0); the corrected variant adds it. Not clamped to [0, 1].
/// delta may range over (0, 8] so the log term stays nonnegative.
double qt_deviation_slack(double delta, std::size_t D, std::size_t n, SlackVariant variant);

struct BoundReport {
  BoundKind kind = BoundKind::kCompression;
  double epsilon = 0.0;
  double delta = 0.05;
  std::size_t n = 0;
  std::size_t D = 0;
  CountingMode counting_mode = CountingMode::kLoose;
  /// Companion values: the other counting mode, the other slack variant, or the
  /// compression-derived hull value, depending on kind.
  double alternative = 0.0;
  std::string alternative_label;
  std::string note;
};

/// Evaluates the named bound with all inputs echoed. Throws std::invalid_argument on bad ranges.
BoundReport make_bound_report(BoundKind kind, std::size_t n, std::size_t D, double delta, CountingMode mode,
                              SlackVariant variant = SlackVariant::kCorrectedSign);

}  // namespace qtube
