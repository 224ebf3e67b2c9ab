#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace qtube {

struct Sample {
  std::vector<double> x;
  double y = 0.0;
};

/// Immutable ordered collection of (x, y) pairs sharing one covariate dimension.
/// Indices into samples() are stable identifiers used by active sets.
class Dataset {
 public:
  Dataset() = default;
  /// Throws DataError if empty, non-finite, or of inconsistent dimension.
  explicit Dataset(std::vector<Sample> samples);

  std::size_t size() const { return samples_.size(); }
  std::size_t dim() const { return dim_; }
  const Sample& operator[](std::size_t i) const { return samples_[i]; }
  const std::vector<Sample>& samples() const { return samples_; }

  std::vector<double> responses() const;
  /// Sub-dataset made of the given indices, in the order given.
  Dataset subset(std::span<const std::size_t> indices) const;

  bool operator==(const Dataset&) const;

 private:
  std::vector<Sample> samples_;
  std::size_t dim_ = 0;
};

/// Reads `x1,...,xd,y` CSV. Errors carry the offending row/column (1-based, header is row 1).
Dataset load_csv(const std::filesystem::path& path);
Dataset parse_csv(const std::string& text);

/// Writes with 17 significant digits so load_csv(write_csv(d)) == d.
void write_csv(const Dataset& data, const std::filesystem::path& path);
std::string format_csv(const Dataset& data);

// Small deterministic generator; draws are identical across platforms for a seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next();
  /// Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();

 private:
  std::uint64_t s_[4];
};

enum class GeneratorKind {
  kLinear,           // x ~ U(0,1), y = slope*x + U(-half_width, half_width)
  kIndependent,      // x ~ U(0,1), y ~ U(0,1), independent
  kHeteroscedastic,  // x ~ U(0,1), y = slope*x + s(x)*U(-1,1), s(x) = s0 + s1*x
  kGaussian,         // x ~ U(0,1), y = slope*x + half_width*N(0,1); unbounded noise
  kDisk,             // (x, y) uniform on the unit disk
  kSquare,           // (x, y) uniform on the unit square
};

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::kLinear;
  double slope = 2.0;
  double half_width = 0.25;
  double s0 = 0.1;
  double s1 = 0.4;

  /// Parses `name[:key=value,...]`, e.g. `linear:slope=2,u=0.25`, `hetero:s0=0.1,s1=0.4`.
  /// Throws std::invalid_argument for unknown names or keys.
  static GeneratorSpec parse(const std::string& text);
  std::string to_string() const;

  /// Conditional support of y given x is bounded (realizable case for support tubes).
  bool bounded_noise() const { return kind != GeneratorKind::kGaussian; }
  bool planar_only() const { return kind == GeneratorKind::kDisk || kind == GeneratorKind::kSquare; }
};

Sample draw_sample(const GeneratorSpec& spec, Rng& rng);
Dataset generate_synthetic(const GeneratorSpec& spec, std::size_t n, std::uint64_t seed);

}  // namespace qtube
