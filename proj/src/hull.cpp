#include "qtube/hull.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "qtube/errors.hpp"
#include "qtube/lp.hpp"

namespace qtube {

namespace {

constexpr double kCrossEps = 1e-12;

double cross(Point2 o, Point2 a, Point2 b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

void require_planar(const Dataset& data) {
  if (data.dim() != 1) throw DataError("hull: data must have a single covariate");
}

// Value at px of the lowest line lying on or above every sample (sign = +1), or of the
// highest line on or below every sample (sign = -1). Returns (intercept, slope).
std::pair<double, double> supporting_line(const Dataset& data, double px, int sign, double slope_cap) {
  LinearProgram lp(2);
  lp.bounds = {VarBound::kFree, VarBound::kFree};
  lp.c = {sign * 1.0, sign * px};
  for (const Sample& s : data.samples()) {
    lp.add_row({1.0, s.x[0]}, sign > 0 ? RowSense::kGreaterEqual : RowSense::kLessEqual, s.y);
  }
  lp.add_row({0.0, 1.0}, RowSense::kLessEqual, slope_cap);
  lp.add_row({0.0, 1.0}, RowSense::kGreaterEqual, -slope_cap);
  const LpSolution sol = solve(lp);
  if (!sol.optimal()) throw SolverError("separating_tube: supporting line LP " + to_string(sol.status));
  return {sol.z[0], sol.z[1]};
}

}  // namespace

Polygon convex_hull(std::span<const Point2> points) {
  if (points.empty()) throw std::invalid_argument("convex_hull: no points");
  std::vector<Point2> pts(points.begin(), points.end());
  for (const Point2& p : pts) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw std::invalid_argument("convex_hull: non-finite point");
  }
  std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  Polygon poly;
  if (pts.size() < 3) {
    poly.vertices = pts;
    poly.degenerate = true;
    return poly;
  }
  std::vector<Point2> h(2 * pts.size());
  std::size_t k = 0;
  for (const Point2& p : pts) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= kCrossEps) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(h[k - 2], h[k - 1], pts[i]) <= kCrossEps) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  poly.vertices = std::move(h);
  poly.degenerate = poly.vertices.size() < 3;
  return poly;
}

Polygon convex_hull(const Dataset& data) {
  require_planar(data);
  std::vector<Point2> pts;
  pts.reserve(data.size());
  for (const Sample& s : data.samples()) pts.push_back({s.x[0], s.y});
  return convex_hull(pts);
}

bool contains(const Polygon& poly, Point2 p) {
  const auto& v = poly.vertices;
  if (v.empty()) return false;
  if (v.size() == 1) return std::hypot(p.x - v[0].x, p.y - v[0].y) <= kCrossEps;
  if (v.size() == 2) {
    const double dx = v[1].x - v[0].x, dy = v[1].y - v[0].y;
    const double len2 = dx * dx + dy * dy;
    const double u = std::clamp(((p.x - v[0].x) * dx + (p.y - v[0].y) * dy) / len2, 0.0, 1.0);
    return std::hypot(p.x - (v[0].x + u * dx), p.y - (v[0].y + u * dy)) <= kCrossEps;
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2 a = v[i], b = v[(i + 1) % v.size()];
    // Signed distance from the edge line; negative means outside.
    if (cross(a, b, p) / std::hypot(b.x - a.x, b.y - a.y) < -kCrossEps) return false;
  }
  return true;
}

MassEstimate mass_outside(const Polygon& poly, const GeneratorSpec& sampler, std::size_t N, std::uint64_t seed) {
  if (N == 0) throw std::invalid_argument("mass_outside: N must be positive");
  Rng rng(seed);
  MassEstimate m;
  m.draws = N;
  for (std::size_t i = 0; i < N; ++i) {
    const Sample s = draw_sample(sampler, rng);
    if (!contains(poly, {s.x[0], s.y})) ++m.outside;
  }
  m.fraction = static_cast<double>(m.outside) / static_cast<double>(N);
  m.half_width = 1.96 * std::sqrt(m.fraction * (1.0 - m.fraction) / static_cast<double>(N));
  return m;
}

std::optional<TubeModel> separating_tube(const Dataset& data, Point2 p) {
  require_planar(data);
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw std::invalid_argument("separating_tube: non-finite point");
  double xlo = data[0].x[0], xhi = xlo, ylo = data[0].y, yhi = ylo;
  for (const Sample& s : data.samples()) {
    xlo = std::min(xlo, s.x[0]);
    xhi = std::max(xhi, s.x[0]);
    ylo = std::min(ylo, s.y);
    yhi = std::max(yhi, s.y);
  }
  const double slope_cap = 1e6 * (1.0 + (yhi - ylo)) / std::max(xhi - xlo, 1e-6);
  const double margin = 1e-9 * (1.0 + std::abs(p.y));

  for (int sign : {+1, -1}) {
    const auto [a, b] = supporting_line(data, p.x, sign, slope_cap);
    const double at_p = a + b * p.x;
    if (sign * (p.y - at_p) <= margin) continue;
    // All samples lie on the inner side of the line; widen until the far edge covers them.
    double depth = 0.0;
    for (const Sample& s : data.samples()) depth = std::max(depth, sign * (a + b * s.x[0] - s.y));
    TubeModel tube{FeatureMap::affine(1), {a - sign * 0.5 * depth, b}, 0.5 * depth};
    if (!tube_contains(tube, std::vector<double>{p.x}, p.y) && empirical_risk(tube, data) == 0.0) return tube;
  }
  return std::nullopt;
}

std::string format_polygon_csv(const Polygon& poly) {
  std::string out = "x,y\n";
  char buf[64];
  for (const Point2& v : poly.vertices) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", v.x, v.y);
    out += buf;
  }
  return out;
}

void write_polygon_csv(const Polygon& poly, const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw DataError("cannot write " + path.string());
  f << format_polygon_csv(poly);
}

}  // namespace qtube
