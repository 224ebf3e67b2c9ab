#include "qtube/tubes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "qtube/errors.hpp"

namespace qtube {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void require_optimal(const LpSolution& sol, const char* what) {
  if (sol.optimal()) return;
  throw SolverError(std::string(what) + ": LP " + to_string(sol.status) +
                    (sol.message.empty() ? "" : " (" + sol.message + ")"));
}

void check_dims(const Dataset& data, const FeatureMap& fm) {
  if (data.dim() != fm.input_dim()) {
    throw DataError("feature map expects dimension " + std::to_string(fm.input_dim()) + ", data has " +
                    std::to_string(data.dim()));
  }
}

}  // namespace

double TubeModel::center(std::span<const double> x) const { return dot(w, fm.expand(x)); }

Interval TubeModel::interval(std::span<const double> x) const {
  const double m = center(x);
  return {m - t, m + t};
}

std::size_t QuantileFit::excluded_count() const {
  return static_cast<std::size_t>(std::count_if(xi.begin(), xi.end(), [](double v) { return v > kExclusionTol; }));
}

double MultiTubeModel::width_minus(std::size_t level) const {
  return std::accumulate(inc_minus.begin(), inc_minus.begin() + static_cast<std::ptrdiff_t>(level + 1), 0.0);
}

double MultiTubeModel::width_plus(std::size_t level) const {
  return std::accumulate(inc_plus.begin(), inc_plus.begin() + static_cast<std::ptrdiff_t>(level + 1), 0.0);
}

double MultiTubeModel::center(std::span<const double> x) const { return dot(w, fm.expand(x)); }

Interval MultiTubeModel::interval(std::span<const double> x, std::size_t level) const {
  if (level >= levels()) throw std::out_of_range("tube level out of range");
  const double m = center(x);
  return {m - width_minus(level), m + width_plus(level)};
}

// The support-tube LP has 2n rows but only p+1 columns, so its dual is solved instead:
//   min sum_i y_i (u+_i - u-_i)
//   s.t. sum_i (u+_i - u-_i) phi_i = 0,   sum_i (u+_i + u-_i) <= 1,   u >= 0.
// Row duals of the optimal basis are the primal solution: w = duals of the equality
// rows, t = -(dual of the last row).
TubeModel fit_support_tube(const Dataset& data, const FeatureMap& fm) {
  check_dims(data, fm);
  const Design design = build_design(fm, data);
  const std::size_t n = data.size(), p = design.cols;

  LinearProgram lp(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    lp.c[i] = data[i].y;
    lp.c[n + i] = -data[i].y;
  }
  for (std::size_t j = 0; j < p; ++j) {
    std::vector<double> row(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      row[i] = design.row(i)[j];
      row[n + i] = -design.row(i)[j];
    }
    lp.add_row(std::move(row), RowSense::kEqual, 0.0);
  }
  lp.add_row(std::vector<double>(2 * n, 1.0), RowSense::kLessEqual, 1.0);

  const LpSolution sol = solve(lp);
  require_optimal(sol, "support tube");

  TubeModel model{fm, std::vector<double>(sol.duals.begin(), sol.duals.begin() + static_cast<std::ptrdiff_t>(p)),
                  0.0};
  // The width is the smallest one containing every sample under the recovered w.
  for (std::size_t i = 0; i < n; ++i) model.t = std::max(model.t, std::abs(data[i].y - dot(model.w, design.row(i))));
  return model;
}

QuantileFit fit_quantile_tube(const Dataset& data, const FeatureMap& fm, double C) {
  if (!(C > 0.0) || !std::isfinite(C)) throw std::invalid_argument("quantile tube needs C > 0");
  check_dims(data, fm);
  const Design design = build_design(fm, data);
  const std::size_t n = data.size(), p = design.cols;
  const std::size_t t_col = p, xi_col = p + 1;

  // Variables: w (free), t, xi_1..xi_n. Rows 2i (upper) and 2i+1 (lower) belong to sample i.
  LinearProgram lp(p + 1 + n);
  for (std::size_t j = 0; j < p; ++j) lp.bounds[j] = VarBound::kFree;
  lp.c[t_col] = C;
  for (std::size_t i = 0; i < n; ++i) lp.c[xi_col + i] = 1.0;
  std::vector<std::optional<std::size_t>> row_map;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> upper(lp.num_vars(), 0.0), lower(lp.num_vars(), 0.0);
    for (std::size_t j = 0; j < p; ++j) {
      upper[j] = design.row(i)[j];
      lower[j] = -design.row(i)[j];
    }
    upper[t_col] = lower[t_col] = -1.0;
    upper[xi_col + i] = lower[xi_col + i] = -1.0;
    lp.add_row(std::move(upper), RowSense::kLessEqual, data[i].y);
    lp.add_row(std::move(lower), RowSense::kLessEqual, -data[i].y);
    row_map.emplace_back(i);
    row_map.emplace_back(i);
  }

  const LpSolution sol = solve(lp);
  require_optimal(sol, "quantile tube");

  QuantileFit fit;
  fit.C = C;
  fit.model = TubeModel{fm, std::vector<double>(sol.z.begin(), sol.z.begin() + static_cast<std::ptrdiff_t>(p)),
                        std::max(sol.z[t_col], 0.0)};
  fit.xi.assign(sol.z.begin() + static_cast<std::ptrdiff_t>(xi_col), sol.z.end());
  fit.objective = sol.objective;
  fit.alpha_plus.resize(n);
  fit.alpha_minus.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    fit.alpha_plus[i] = -sol.duals[2 * i];
    fit.alpha_minus[i] = -sol.duals[2 * i + 1];
  }
  for (std::size_t i : active_sample_set(sol, row_map)) {
    if (fit.xi[i] > kExclusionTol) continue;
    const double r = dot(fit.model.w, design.row(i)) - data[i].y;
    // Row 2i is active when r = t (sample on the lower boundary y = m - t).
    fit.active.push_back({i, r > 0.0 ? -1 : +1});
  }
  return fit;
}

MultiTubeModel fit_multi_quantile(const Dataset& data, const FeatureMap& fm, std::span<const double> C,
                                  const MultiQuantileOptions& options) {
  if (C.empty()) throw std::invalid_argument("multi-quantile tube needs at least one level");
  for (double c : C) {
    if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("multi-quantile tube needs every C_l > 0");
  }
  check_dims(data, fm);
  const Design design = build_design(fm, data);
  const std::size_t n = data.size(), p = design.cols, m = C.size();

  // Per level k: symmetric increment s_k, and one-sided excesses a+_k, a-_k unless symmetric.
  // inc_plus_k = s_k + a+_k, inc_minus_k = s_k + a-_k.
  const std::size_t per_level = options.symmetric ? 1 : 3;
  const std::size_t width_col = p;
  const std::size_t xi_col = p + per_level * m;
  auto s_col = [&](std::size_t k) { return width_col + per_level * k; };
  auto xi_index = [&](std::size_t level, std::size_t i, bool upper) {
    return xi_col + 2 * (level * n + i) + (upper ? 0 : 1);
  };

  LinearProgram lp(xi_col + 2 * n * m);
  for (std::size_t j = 0; j < p; ++j) lp.bounds[j] = VarBound::kFree;
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t q = 0; q < per_level; ++q) lp.c[s_col(k) + q] = C[k];
  }
  for (std::size_t j = xi_col; j < lp.num_vars(); ++j) lp.c[j] = 1.0;

  for (std::size_t l = 0; l < m; ++l) {
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> upper(lp.num_vars(), 0.0), lower(lp.num_vars(), 0.0);
      for (std::size_t j = 0; j < p; ++j) {
        upper[j] = design.row(i)[j];
        lower[j] = -design.row(i)[j];
      }
      for (std::size_t k = 0; k <= l; ++k) {
        upper[s_col(k)] = lower[s_col(k)] = -1.0;
        if (!options.symmetric) {
          upper[s_col(k) + 1] = -1.0;
          lower[s_col(k) + 2] = -1.0;
        }
      }
      upper[xi_index(l, i, true)] = -1.0;
      lower[xi_index(l, i, false)] = -1.0;
      lp.add_row(std::move(upper), RowSense::kLessEqual, data[i].y);
      lp.add_row(std::move(lower), RowSense::kLessEqual, -data[i].y);
    }
  }

  const LpSolution sol = solve(lp);
  require_optimal(sol, "multi-quantile tube");

  MultiTubeModel model;
  model.fm = fm;
  model.w.assign(sol.z.begin(), sol.z.begin() + static_cast<std::ptrdiff_t>(p));
  for (std::size_t k = 0; k < m; ++k) {
    const double s = std::max(sol.z[s_col(k)], 0.0);
    const double ap = options.symmetric ? 0.0 : std::max(sol.z[s_col(k) + 1], 0.0);
    const double am = options.symmetric ? 0.0 : std::max(sol.z[s_col(k) + 2], 0.0);
    model.inc_plus.push_back(s + ap);
    model.inc_minus.push_back(s + am);
  }
  return model;
}

bool tube_contains(const TubeModel& model, std::span<const double> x, double y) {
  const Interval iv = model.interval(x);
  return y >= iv.lo - kContainTol && y <= iv.hi + kContainTol;
}

bool tube_contains(const MultiTubeModel& model, std::size_t level, std::span<const double> x, double y) {
  const Interval iv = model.interval(x, level);
  return y >= iv.lo - kContainTol && y <= iv.hi + kContainTol;
}

double empirical_risk(const TubeModel& model, const Dataset& data) {
  std::size_t out = 0;
  for (const Sample& s : data.samples()) out += tube_contains(model, s.x, s.y) ? 0 : 1;
  return static_cast<double>(out) / static_cast<double>(data.size());
}

double empirical_risk(const MultiTubeModel& model, std::size_t level, const Dataset& data) {
  std::size_t out = 0;
  for (const Sample& s : data.samples()) out += tube_contains(model, level, s.x, s.y) ? 0 : 1;
  return static_cast<double>(out) / static_cast<double>(data.size());
}

std::size_t compression_size(const FeatureMap& fm) { return fm.dim() + 1; }

std::vector<BoundaryPoint> boundary_points(const TubeModel& model, const Dataset& data, double tol) {
  std::vector<BoundaryPoint> out;
  const double scale = tol * (1.0 + model.t);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double r = data[i].y - model.center(data[i].x);
    if (std::abs(r - model.t) <= scale) {
      out.push_back({i, +1});
    } else if (std::abs(r + model.t) <= scale) {
      out.push_back({i, -1});
    }
  }
  return out;
}

std::vector<BoundaryPoint> boundary_points(const MultiTubeModel& model, const Dataset& data, double tol) {
  std::vector<BoundaryPoint> out;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double r = data[i].y - model.center(data[i].x);
    for (std::size_t l = 0; l < model.levels(); ++l) {
      const double up = model.width_plus(l), lo = model.width_minus(l);
      if (std::abs(r - up) <= tol * (1.0 + up)) out.push_back({i, +1});
      if (std::abs(r + lo) <= tol * (1.0 + lo)) out.push_back({i, -1});
    }
  }
  return out;
}

TubeModel reconstruct_from_boundary(const Dataset& data, const FeatureMap& fm,
                                    std::span<const BoundaryPoint> points) {
  check_dims(data, fm);
  const std::size_t p = fm.dim();
  LinearProgram lp(p + 1);
  for (std::size_t j = 0; j < p; ++j) lp.bounds[j] = VarBound::kFree;
  lp.c[p] = 1.0;
  for (const BoundaryPoint& bp : points) {
    std::vector<double> row = fm.expand(data[bp.index].x);
    row.push_back(static_cast<double>(bp.side));
    lp.add_row(std::move(row), RowSense::kEqual, data[bp.index].y);
  }
  const LpSolution sol = solve(lp);
  require_optimal(sol, "boundary reconstruction");
  return TubeModel{fm, std::vector<double>(sol.z.begin(), sol.z.begin() + static_cast<std::ptrdiff_t>(p)), sol.z[p]};
}

}  // namespace qtube
