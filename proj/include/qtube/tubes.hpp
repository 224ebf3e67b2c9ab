#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qtube/dataset.hpp"
#include "qtube/features.hpp"
#include "qtube/lp.hpp"

namespace qtube {

/// Tolerance for "on or inside the tube" tests.
inline constexpr double kContainTol = 1e-9;
/// A slack above this value means the sample is strictly excluded.
inline constexpr double kExclusionTol = 1e-7;

struct Interval {
  double lo, hi;
};

/// Constant-width tube m(x) +/- t with m(x) = w . expand(x).
struct TubeModel {
  FeatureMap fm;
  std::vector<double> w;
  double t = 0.0;

  double center(std::span<const double> x) const;
  Interval interval(std::span<const double> x) const;
};

/// Sample lying on one of the tube's boundaries; side is +1 (upper) or -1 (lower).
struct BoundaryPoint {
  std::size_t index;
  int side;
};

struct QuantileFit {
  TubeModel model;
  std::vector<double> xi;
  double C = 0.0;
  /// Samples interpolated by w.x - t or w.x + t (active constraints with zero slack).
  std::vector<BoundaryPoint> active;
  double objective = 0.0;
  /// Lagrange multipliers of the upper (w.x - y <= t + xi) and lower constraints, >= 0.
  std::vector<double> alpha_plus, alpha_minus;

  std::size_t excluded_count() const;
};

/// Nested tubes sharing m(x); level l spans [m - sum_{k<=l} inc_minus_k, m + sum_{k<=l} inc_plus_k].
struct MultiTubeModel {
  FeatureMap fm;
  std::vector<double> w;
  std::vector<double> inc_minus, inc_plus;

  std::size_t levels() const { return inc_plus.size(); }
  double width_minus(std::size_t level) const;
  double width_plus(std::size_t level) const;
  double center(std::span<const double> x) const;
  Interval interval(std::span<const double> x, std::size_t level) const;
};

struct MultiQuantileOptions {
  /// Force inc_plus == inc_minus at every level.
  bool symmetric = false;
};

/// Smallest constant-width tube containing every sample. Throws SolverError if the LP fails.
TubeModel fit_support_tube(const Dataset& data, const FeatureMap& fm);

/// min C t + sum xi_i  s.t. |w.x_i - y_i| <= t + xi_i, xi >= 0, t >= 0.
/// Throws std::invalid_argument if C <= 0 and SolverError on LP failure.
QuantileFit fit_quantile_tube(const Dataset& data, const FeatureMap& fm, double C);

/// Joint LP over shared w and per-level width increments. Increment l costs C_l per unit of
/// max(inc_plus_l, inc_minus_l) and widens tube l and every wider tube, so the samples strictly
/// outside tubes l, l+1, ..., m counted together never exceed C_l.
MultiTubeModel fit_multi_quantile(const Dataset& data, const FeatureMap& fm, std::span<const double> C,
                                  const MultiQuantileOptions& options = {});

bool tube_contains(const TubeModel& model, std::span<const double> x, double y);
bool tube_contains(const MultiTubeModel& model, std::size_t level, std::span<const double> x, double y);

double empirical_risk(const TubeModel& model, const Dataset& data);
double empirical_risk(const MultiTubeModel& model, std::size_t level, const Dataset& data);

/// Number of samples that determine a tube over this feature map: p coefficients + 1 width.
std::size_t compression_size(const FeatureMap& fm);

/// Samples lying on a boundary of `model`, i.e. | |y - m(x)| - t | <= tol.
std::vector<BoundaryPoint> boundary_points(const TubeModel& model, const Dataset& data, double tol = 1e-8);
/// Same for every level of a multi-tube; an index may appear once per boundary it touches.
std::vector<BoundaryPoint> boundary_points(const MultiTubeModel& model, const Dataset& data, double tol = 1e-8);

/// Recovers (w, t) from boundary samples alone by solving w.x_i + side_i t = y_i as an LP.
/// Throws SolverError when the interpolation system is inconsistent.
TubeModel reconstruct_from_boundary(const Dataset& data, const FeatureMap& fm,
                                    std::span<const BoundaryPoint> points);

}  // namespace qtube
