#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>

#include "qtube/dataset.hpp"
#include "qtube/tubes.hpp"

namespace qtube {

/// All quantities in nats.
struct MiReport {
  double H_Y = 0.0;
  double mean_log_width = 0.0;
  double epsilon = 0.0;
  double h_eps = 0.0;
  double ce_upper = 0.0;
  double mi_lower = 0.0;
  /// epsilon < 0.5; otherwise mi_lower and ce_upper are not applicable.
  bool valid = false;
  std::string epsilon_source;
  std::string entropy_source;
};

/// -eps ln eps - (1-eps) ln(1-eps) with 0 ln 0 = 0. Throws std::invalid_argument outside [0, 1].
double binary_entropy(double eps);

/// ln(2t) for a constant-width tube. Throws DataError on t <= 0.
double mean_log_width(const TubeModel& model);
/// Same, averaged over the samples; kept for a uniform call shape.
double mean_log_width(const TubeModel& model, const Dataset& data);
/// (1/n) sum ln(full width of `level` at x_i). Throws DataError on a non-positive width.
double mean_log_width(const MultiTubeModel& model, std::size_t level, const Dataset& data);

/// Vasicek m-spacing estimate with order statistics clamped at the sample ends.
/// m defaults to floor(sqrt(n)). Throws DataError for n < 4 or a zero spacing that makes
/// the estimate -inf (e.g. constant y).
double marginal_entropy(std::span<const double> y, std::optional<std::size_t> m_spacing = std::nullopt);

/// eps H_Y + (1-eps) mean_log_width. Throws std::invalid_argument unless 0 <= eps < 0.5.
double cond_entropy_upper(double H_Y, double mean_log_width, double eps);

/// (1-eps)(H_Y - mean_log_width) - h(eps). Never throws for eps in [0, 1]; validity is recorded.
MiReport mi_lower_bound(double H_Y, double mean_log_width, double eps);

}  // namespace qtube
