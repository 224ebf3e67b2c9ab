#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "qtube/dataset.hpp"
#include "qtube/lp.hpp"

namespace qtube::fixtures {

inline Dataset points_1d(const std::vector<std::pair<double, double>>& xy) {
  std::vector<Sample> s;
  for (auto [x, y] : xy) s.push_back({{x}, y});
  return Dataset(std::move(s));
}

inline Dataset values(const std::vector<double>& y) {
  std::vector<Sample> s;
  for (std::size_t i = 0; i < y.size(); ++i) s.push_back({{static_cast<double>(i)}, y[i]});
  return Dataset(std::move(s));
}

/// x ~ U(0,1)^d, y = sum_j (j+1) x_j + Gaussian noise; continuous, so non-degenerate a.s.
inline Dataset random_linear(std::size_t n, std::size_t d, std::uint64_t seed, double noise = 0.3) {
  Rng rng(seed);
  std::vector<Sample> s;
  for (std::size_t i = 0; i < n; ++i) {
    Sample smp;
    smp.y = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      smp.x.push_back(rng.uniform());
      smp.y += static_cast<double>(j + 1) * smp.x.back();
    }
    smp.y += noise * rng.normal();
    s.push_back(std::move(smp));
  }
  return Dataset(std::move(s));
}

inline LinearProgram random_bounded_lp(Rng& rng, std::size_t vars, std::size_t rows) {
  LinearProgram lp(vars);
  for (auto& c : lp.c) c = rng.uniform(-1.0, 1.0);
  // Rows are built around a feasible point so every instance has a vertex.
  std::vector<double> z0(vars);
  for (auto& v : z0) v = rng.uniform(0.0, 2.0);
  for (std::size_t i = 0; i + 1 < rows; ++i) {
    std::vector<double> a(vars);
    for (auto& v : a) v = rng.uniform(-1.0, 1.0);
    const double lhs = std::inner_product(a.begin(), a.end(), z0.begin(), 0.0);
    const double kind = rng.uniform();
    if (kind < 0.6) {
      lp.add_row(a, RowSense::kLessEqual, lhs + rng.uniform(0.0, 1.0));
    } else if (kind < 0.9) {
      lp.add_row(a, RowSense::kGreaterEqual, lhs - rng.uniform(0.0, 1.0));
    } else {
      lp.add_row(a, RowSense::kEqual, lhs);
    }
  }
  lp.add_row(std::vector<double>(vars, 1.0), RowSense::kLessEqual,
             std::accumulate(z0.begin(), z0.end(), 0.0) + 5.0);
  return lp;
}

// Cycles under textbook Dantzig pricing with naive ratio tie-breaks; optimum -1.25.
inline LinearProgram beale_lp() {
  LinearProgram lp(4);
  lp.c = {-0.75, 20.0, -0.5, 6.0};
  lp.add_row({0.25, -8.0, -1.0, 9.0}, RowSense::kLessEqual, 0.0);
  lp.add_row({0.5, -12.0, -0.5, 3.0}, RowSense::kLessEqual, 0.0);
  lp.add_row({0.0, 0.0, 1.0, 0.0}, RowSense::kLessEqual, 1.0);
  return lp;
}

inline LinearProgram kuhn_lp() {
  LinearProgram lp(4);
  lp.c = {-2.0, -3.0, 1.0, 12.0};
  lp.add_row({-2.0, -9.0, 1.0, 9.0}, RowSense::kLessEqual, 0.0);
  lp.add_row({1.0 / 3.0, 1.0, -1.0 / 3.0, -2.0}, RowSense::kLessEqual, 0.0);
  lp.add_row({2.0, 3.0, -1.0, -12.0}, RowSense::kLessEqual, 2.0);
  return lp;
}

}  // namespace qtube::fixtures
