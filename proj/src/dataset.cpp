#include "qtube/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "qtube/errors.hpp"

namespace qtube {

Dataset::Dataset(std::vector<Sample> samples) : samples_(std::move(samples)) {
  if (samples_.empty()) throw DataError("dataset has no samples");
  dim_ = samples_.front().x.size();
  if (dim_ == 0) throw DataError("dataset covariate dimension is 0");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const Sample& s = samples_[i];
    if (s.x.size() != dim_) {
      throw DataError("sample " + std::to_string(i) + " has dimension " + std::to_string(s.x.size()) +
                      ", expected " + std::to_string(dim_));
    }
    bool finite = std::isfinite(s.y);
    for (double v : s.x) finite = finite && std::isfinite(v);
    if (!finite) throw DataError("sample " + std::to_string(i) + " has a non-finite entry");
  }
}

std::vector<double> Dataset::responses() const {
  std::vector<double> y;
  y.reserve(samples_.size());
  for (const Sample& s : samples_) y.push_back(s.y);
  return y;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  std::vector<Sample> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(samples_.at(i));
  return Dataset(std::move(out));
}

bool Dataset::operator==(const Dataset& other) const {
  if (size() != other.size() || dim_ != other.dim_) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    if (samples_[i].y != other.samples_[i].y || samples_[i].x != other.samples_[i].x) return false;
  }
  return true;
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, comma == std::string::npos ? std::string::npos
                                                                                      : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string location(std::size_t row, std::size_t col) {
  return "row " + std::to_string(row) + ", column " + std::to_string(col);
}

}  // namespace

Dataset parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t row = 0;

  // Header: x1,...,xd,y
  std::size_t columns = 0;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    auto fields = split_fields(line);
    if (row == 1 && fields.front().rfind("\xEF\xBB\xBF", 0) == 0) fields.front().erase(0, 3);
    if (fields.size() < 2) throw DataError("malformed header at row " + std::to_string(row) + ": need x1,...,xd,y");
    for (std::size_t j = 0; j + 1 < fields.size(); ++j) {
      if (fields[j] != "x" + std::to_string(j + 1)) {
        throw DataError("malformed header at " + location(row, j + 1) + ": expected 'x" + std::to_string(j + 1) +
                        "', got '" + fields[j] + "'");
      }
    }
    if (fields.back() != "y") {
      throw DataError("malformed header at " + location(row, fields.size()) + ": expected 'y', got '" +
                      fields.back() + "'");
    }
    columns = fields.size();
    break;
  }
  if (columns == 0) throw DataError("missing header row");

  std::vector<Sample> samples;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    auto fields = split_fields(line);
    if (fields.size() != columns) {
      throw DataError("inconsistent column count at row " + std::to_string(row) + ": expected " +
                      std::to_string(columns) + ", got " + std::to_string(fields.size()));
    }
    std::vector<double> values(columns);
    for (std::size_t j = 0; j < columns; ++j) {
      const std::string& f = fields[j];
      const char* first = f.data();
      const char* last = f.data() + f.size();
      if (!f.empty() && *first == '+') ++first;
      auto [ptr, ec] = std::from_chars(first, last, values[j]);
      if (f.empty() || ec != std::errc() || ptr != last || !std::isfinite(values[j])) {
        throw DataError("non-numeric cell '" + f + "' at " + location(row, j + 1));
      }
    }
    Sample s;
    s.y = values.back();
    values.pop_back();
    s.x = std::move(values);
    samples.push_back(std::move(s));
  }
  if (samples.empty()) throw DataError("no data rows");
  return Dataset(std::move(samples));
}

Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_csv(buf.str());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string format_csv(const Dataset& data) {
  std::string out;
  for (std::size_t j = 0; j < data.dim(); ++j) out += "x" + std::to_string(j + 1) + ",";
  out += "y\n";
  char buf[64];
  for (const Sample& s : data.samples()) {
    for (double v : s.x) {
      std::snprintf(buf, sizeof buf, "%.17g,", v);
      out += buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g\n", s.y);
    out += buf;
  }
  return out;
}

void write_csv(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << format_csv(data);
}

// xoshiro256** seeded through splitmix64.
Rng::Rng(std::uint64_t seed) {
  for (auto& word : s_) {
    seed += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = seed;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    word = z ^ (z >> 31);
  }
}

std::uint64_t Rng::next() {
  auto rotl = [](std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); };
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

GeneratorSpec GeneratorSpec::parse(const std::string& text) {
  GeneratorSpec spec;
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  if (name == "linear") {
    spec.kind = GeneratorKind::kLinear;
  } else if (name == "independent") {
    spec.kind = GeneratorKind::kIndependent;
  } else if (name == "hetero" || name == "heteroscedastic") {
    spec.kind = GeneratorKind::kHeteroscedastic;
    spec.slope = 1.0;
  } else if (name == "gauss" || name == "gaussian") {
    spec.kind = GeneratorKind::kGaussian;
    spec.half_width = 0.25;
  } else if (name == "disk") {
    spec.kind = GeneratorKind::kDisk;
  } else if (name == "square") {
    spec.kind = GeneratorKind::kSquare;
  } else {
    throw std::invalid_argument("unknown generator spec '" + name + "'");
  }
  if (colon == std::string::npos) return spec;

  std::map<std::string, double*> keys{{"slope", &spec.slope}, {"w", &spec.slope}, {"u", &spec.half_width},
                                      {"half_width", &spec.half_width}, {"sigma", &spec.half_width}, {"s0", &spec.s0}, {"s1", &spec.s1}};
  for (const std::string& kv : split_fields(text.substr(colon + 1))) {
    if (kv.empty()) continue;
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("generator option '" + kv + "' is not key=value");
    auto it = keys.find(kv.substr(0, eq));
    if (it == keys.end()) throw std::invalid_argument("unknown generator option '" + kv.substr(0, eq) + "'");
    const std::string value = kv.substr(eq + 1);
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), *it->second);
    if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(*it->second)) {
      throw std::invalid_argument("bad value in generator option '" + kv + "'");
    }
  }
  if (spec.half_width < 0 || spec.s0 < 0 || spec.s0 + spec.s1 < 0) {
    throw std::invalid_argument("generator noise widths must be nonnegative");
  }
  return spec;
}

std::string GeneratorSpec::to_string() const {
  char buf[160];
  switch (kind) {
    case GeneratorKind::kLinear:
      std::snprintf(buf, sizeof buf, "linear:slope=%.17g,u=%.17g", slope, half_width);
      return buf;
    case GeneratorKind::kIndependent:
      return "independent";
    case GeneratorKind::kHeteroscedastic:
      std::snprintf(buf, sizeof buf, "hetero:slope=%.17g,s0=%.17g,s1=%.17g", slope, s0, s1);
      return buf;
    case GeneratorKind::kGaussian:
      std::snprintf(buf, sizeof buf, "gauss:slope=%.17g,sigma=%.17g", slope, half_width);
      return buf;
    case GeneratorKind::kDisk:
      return "disk";
    case GeneratorKind::kSquare:
      return "square";
  }
  return "?";
}

Sample draw_sample(const GeneratorSpec& spec, Rng& rng) {
  Sample s;
  switch (spec.kind) {
    case GeneratorKind::kLinear: {
      const double x = rng.uniform();
      s.x = {x};
      s.y = spec.slope * x + rng.uniform(-spec.half_width, spec.half_width);
      break;
    }
    case GeneratorKind::kIndependent:
      s.x = {rng.uniform()};
      s.y = rng.uniform();
      break;
    case GeneratorKind::kHeteroscedastic: {
      const double x = rng.uniform();
      s.x = {x};
      s.y = spec.slope * x + (spec.s0 + spec.s1 * x) * rng.uniform(-1.0, 1.0);
      break;
    }
    case GeneratorKind::kGaussian: {
      const double x = rng.uniform();
      s.x = {x};
      s.y = spec.slope * x + spec.half_width * rng.normal();
      break;
    }
    case GeneratorKind::kDisk: {
      // Rejection from the enclosing square keeps the draw count per sample data-dependent
      // but deterministic for a seed.
      double a, b;
      do {
        a = rng.uniform(-1.0, 1.0);
        b = rng.uniform(-1.0, 1.0);
      } while (a * a + b * b > 1.0);
      s.x = {a};
      s.y = b;
      break;
    }
    case GeneratorKind::kSquare:
      s.x = {rng.uniform()};
      s.y = rng.uniform();
      break;
  }
  return s;
}

Dataset generate_synthetic(const GeneratorSpec& spec, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("generate_synthetic: n must be >= 1");
  Rng rng(seed);
  std::vector<Sample> samples;
  samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) samples.push_back(draw_sample(spec, rng));
  return Dataset(std::move(samples));
}

}  // namespace qtube
