#include "qtube/info.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qtube/errors.hpp"

namespace qtube {

namespace {

double checked_log_width(double width) {
  if (!(width > 0.0)) throw DataError("degenerate width, entropy bound -inf");
  return std::log(width);
}

}  // namespace

double binary_entropy(double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("binary_entropy: eps must lie in [0, 1]");
  auto term = [](double p) { return p > 0.0 ? -p * std::log(p) : 0.0; };
  return term(eps) + term(1.0 - eps);
}

double mean_log_width(const TubeModel& model) { return checked_log_width(2.0 * model.t); }

double mean_log_width(const TubeModel& model, const Dataset& data) {
  if (data.size() == 0) throw DataError("mean_log_width: empty dataset");
  return mean_log_width(model);
}

double mean_log_width(const MultiTubeModel& model, std::size_t level, const Dataset& data) {
  if (level >= model.levels()) throw std::invalid_argument("mean_log_width: level out of range");
  if (data.size() == 0) throw DataError("mean_log_width: empty dataset");
  double sum = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Interval iv = model.interval(data[i].x, level);
    sum += checked_log_width(iv.hi - iv.lo);
  }
  return sum / static_cast<double>(data.size());
}

double marginal_entropy(std::span<const double> y, std::optional<std::size_t> m_spacing) {
  const std::size_t n = y.size();
  if (n < 4) throw DataError("marginal_entropy: need at least 4 samples");
  const std::size_t m = m_spacing.value_or(static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n)))));
  if (m < 1 || m >= n) throw std::invalid_argument("marginal_entropy: spacing must lie in [1, n)");
  std::vector<double> s(y.begin(), y.end());
  for (double v : s) {
    if (!std::isfinite(v)) throw DataError("marginal_entropy: non-finite value");
  }
  std::sort(s.begin(), s.end());
  const double scale = static_cast<double>(n) / (2.0 * static_cast<double>(m));
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double hi = s[std::min(i + m, n - 1)];
    const double lo = s[i >= m ? i - m : 0];
    const double gap = hi - lo;
    if (!(gap > 0.0)) throw DataError("marginal_entropy: zero spacing, estimate degenerate (-inf)");
    sum += std::log(scale * gap);
  }
  return sum / static_cast<double>(n);
}

double cond_entropy_upper(double H_Y, double mean_log_width, double eps) {
  if (!(eps >= 0.0 && eps < 0.5)) throw std::invalid_argument("cond_entropy_upper: not applicable for eps >= 0.5");
  return eps * H_Y + (1.0 - eps) * mean_log_width;
}

MiReport mi_lower_bound(double H_Y, double mean_log_width, double eps) {
  MiReport r;
  r.H_Y = H_Y;
  r.mean_log_width = mean_log_width;
  r.epsilon = eps;
  r.h_eps = binary_entropy(eps);
  r.valid = eps < 0.5;
  r.ce_upper = eps * H_Y + (1.0 - eps) * mean_log_width;
  r.mi_lower = (1.0 - eps) * (H_Y - mean_log_width) - r.h_eps;
  return r;
}

}  // namespace qtube
