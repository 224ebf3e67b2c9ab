#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qtube/dataset.hpp"

namespace qtube {

enum class FeatureKind { kInterceptOnly, kAffine, kRbf };

/// Maps a covariate x in R^d to a feature vector whose coordinate 0 is always 1.
///   intercept-only: (1)
///   affine:         (1, x_1, ..., x_d)
///   rbf:            (1, exp(-|x - c_k|^2 / (2 h^2)) for each center c_k)
class FeatureMap {
 public:
  static FeatureMap intercept_only(std::size_t input_dim);
  static FeatureMap affine(std::size_t input_dim);
  /// Throws std::invalid_argument on empty centers, mixed center dimensions, or bandwidth <= 0.
  static FeatureMap rbf(std::vector<std::vector<double>> centers, double bandwidth);
  /// `count` equally spaced centers over the observed x-range of 1-d data; bandwidth = grid spacing.
  static FeatureMap rbf_grid(const Dataset& data, std::size_t count);

  /// Parses `affine`, `intercept`, or `rbf:<k>`; rbf grids are laid out over `data`.
  static FeatureMap parse(const std::string& text, const Dataset& data);

  FeatureKind kind() const { return kind_; }
  std::size_t input_dim() const { return input_dim_; }
  /// Output dimension p, including the intercept.
  std::size_t dim() const;
  const std::vector<std::vector<double>>& centers() const { return centers_; }
  double bandwidth() const { return bandwidth_; }
  std::string name() const;

  /// Throws DataError on dimension mismatch.
  std::vector<double> expand(std::span<const double> x) const;
  void expand_into(std::span<const double> x, std::span<double> out) const;

  bool operator==(const FeatureMap&) const = default;

 private:
  FeatureKind kind_ = FeatureKind::kAffine;
  std::size_t input_dim_ = 1;
  std::vector<std::vector<double>> centers_;
  double bandwidth_ = 0.0;
};

/// Row-major n x p design matrix of expanded covariates.
struct Design {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  std::span<const double> row(std::size_t i) const { return {values.data() + i * cols, cols}; }
};

Design build_design(const FeatureMap& fm, const Dataset& data);

}  // namespace qtube
