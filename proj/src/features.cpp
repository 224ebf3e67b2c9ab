#include "qtube/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "qtube/errors.hpp"

namespace qtube {

FeatureMap FeatureMap::intercept_only(std::size_t input_dim) {
  FeatureMap fm;
  fm.kind_ = FeatureKind::kInterceptOnly;
  fm.input_dim_ = input_dim;
  return fm;
}

FeatureMap FeatureMap::affine(std::size_t input_dim) {
  if (input_dim == 0) throw std::invalid_argument("affine feature map needs input dimension >= 1");
  FeatureMap fm;
  fm.kind_ = FeatureKind::kAffine;
  fm.input_dim_ = input_dim;
  return fm;
}

FeatureMap FeatureMap::rbf(std::vector<std::vector<double>> centers, double bandwidth) {
  if (centers.empty()) throw std::invalid_argument("rbf feature map needs at least one center");
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) throw std::invalid_argument("rbf bandwidth must be > 0");
  const std::size_t d = centers.front().size();
  if (d == 0) throw std::invalid_argument("rbf centers must have dimension >= 1");
  for (const auto& c : centers) {
    if (c.size() != d) throw std::invalid_argument("rbf centers have mixed dimensions");
  }
  FeatureMap fm;
  fm.kind_ = FeatureKind::kRbf;
  fm.input_dim_ = d;
  fm.centers_ = std::move(centers);
  fm.bandwidth_ = bandwidth;
  return fm;
}

FeatureMap FeatureMap::rbf_grid(const Dataset& data, std::size_t count) {
  if (data.dim() != 1) throw std::invalid_argument("rbf grid placement needs 1-d covariates");
  if (count == 0) throw std::invalid_argument("rbf grid needs at least one center");
  double lo = data[0].x[0], hi = lo;
  for (const Sample& s : data.samples()) {
    lo = std::min(lo, s.x[0]);
    hi = std::max(hi, s.x[0]);
  }
  std::vector<std::vector<double>> centers;
  double spacing = count > 1 ? (hi - lo) / static_cast<double>(count - 1) : hi - lo;
  if (!(spacing > 0.0)) spacing = 1.0;
  for (std::size_t k = 0; k < count; ++k) {
    centers.push_back({count > 1 ? lo + spacing * static_cast<double>(k) : 0.5 * (lo + hi)});
  }
  return rbf(std::move(centers), spacing);
}

FeatureMap FeatureMap::parse(const std::string& text, const Dataset& data) {
  if (text == "affine" || text == "linear") return affine(data.dim());
  if (text == "intercept") return intercept_only(data.dim());
  if (text.rfind("rbf:", 0) == 0) {
    std::size_t k = 0;
    const char* first = text.data() + 4;
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, k);
    if (ec != std::errc() || ptr != last || k == 0) throw std::invalid_argument("bad rbf count in '" + text + "'");
    return rbf_grid(data, k);
  }
  throw std::invalid_argument("unknown feature map '" + text + "' (expected affine, intercept or rbf:<k>)");
}

std::size_t FeatureMap::dim() const {
  switch (kind_) {
    case FeatureKind::kInterceptOnly:
      return 1;
    case FeatureKind::kAffine:
      return 1 + input_dim_;
    case FeatureKind::kRbf:
      return 1 + centers_.size();
  }
  return 1;
}

std::string FeatureMap::name() const {
  switch (kind_) {
    case FeatureKind::kInterceptOnly:
      return "intercept";
    case FeatureKind::kAffine:
      return "affine";
    case FeatureKind::kRbf:
      return "rbf";
  }
  return "?";
}

void FeatureMap::expand_into(std::span<const double> x, std::span<double> out) const {
  if (x.size() != input_dim_) {
    throw DataError("feature map expects dimension " + std::to_string(input_dim_) + ", got " +
                    std::to_string(x.size()));
  }
  out[0] = 1.0;
  switch (kind_) {
    case FeatureKind::kInterceptOnly:
      break;
    case FeatureKind::kAffine:
      std::copy(x.begin(), x.end(), out.begin() + 1);
      break;
    case FeatureKind::kRbf: {
      const double denom = 2.0 * bandwidth_ * bandwidth_;
      for (std::size_t k = 0; k < centers_.size(); ++k) {
        double dist2 = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
          const double diff = x[j] - centers_[k][j];
          dist2 += diff * diff;
        }
        out[k + 1] = std::exp(-dist2 / denom);
      }
      break;
    }
  }
}

std::vector<double> FeatureMap::expand(std::span<const double> x) const {
  std::vector<double> out(dim());
  expand_into(x, out);
  return out;
}

Design build_design(const FeatureMap& fm, const Dataset& data) {
  Design d;
  d.rows = data.size();
  d.cols = fm.dim();
  d.values.resize(d.rows * d.cols);
  for (std::size_t i = 0; i < d.rows; ++i) {
    fm.expand_into(data[i].x, std::span<double>(d.values.data() + i * d.cols, d.cols));
  }
  return d;
}

}  // namespace qtube
