#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qtube/dataset.hpp"
#include "qtube/tubes.hpp"

namespace qtube {

struct Point2 {
  double x, y;
  bool operator==(const Point2&) const = default;
};

/// Convex polygon, vertices counter-clockwise starting from the lowest-x (then lowest-y) point.
/// Fewer than 3 vertices means a point or a segment and sets `degenerate`.
struct Polygon {
  std::vector<Point2> vertices;
  bool degenerate = false;

  bool operator==(const Polygon&) const = default;
};

/// Andrew's monotone chain. Collinear boundary points and duplicates are dropped.
/// Throws std::invalid_argument on empty or non-finite input.
Polygon convex_hull(std::span<const Point2> points);
/// Hull of the (x, y) pairs of planar data. Throws DataError unless dim() == 1.
Polygon convex_hull(const Dataset& data);

/// Boundary-inclusive: p may sit up to 1e-12 outside an edge.
bool contains(const Polygon& poly, Point2 p);

struct MassEstimate {
  double fraction = 0.0;
  /// 1.96 binomial standard errors.
  double half_width = 0.0;
  std::size_t outside = 0;
  std::size_t draws = 0;
};

/// Fraction of N fresh draws from `sampler` that fall outside `poly`. Throws std::invalid_argument if N == 0.
MassEstimate mass_outside(const Polygon& poly, const GeneratorSpec& sampler, std::size_t N, std::uint64_t seed);

/// A zero-risk affine tube on `data` that excludes p, built from a supporting line of the
/// sample cloud; nullopt when p lies inside or on the hull. Slopes are capped, so points beyond
/// the data's x-range that only a near-vertical line separates also give nullopt.
/// Throws DataError unless dim() == 1, SolverError on LP failure.
std::optional<TubeModel> separating_tube(const Dataset& data, Point2 p);

/// `x,y` rows in vertex order.
std::string format_polygon_csv(const Polygon& poly);
void write_polygon_csv(const Polygon& poly, const std::filesystem::path& path);

}  // namespace qtube
