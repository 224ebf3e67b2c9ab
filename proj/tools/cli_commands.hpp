#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace qtube::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kUsage = 2, kData = 3, kSolver = 4 };

struct RunManifest {
  std::string command;
  std::map<std::string, std::string> flags;
  std::string input_sha256;
  std::string tool_version = kToolVersion;
  std::optional<std::uint64_t> seed;
  std::string timestamp;

  nlohmann::json to_json() const;
};

/// Lowercase hex SHA-256 of a file's bytes. Throws DataError if unreadable.
std::string sha256_file(const std::string& path);
std::string utc_timestamp();

struct FitArgs {
  std::string input;
  std::string kind = "support";
  std::vector<double> C;
  std::string features = "affine";
  bool symmetric = false;
  std::string out;
  std::string plot;
};

struct BoundsArgs {
  std::string kind = "compression";
  std::size_t n = 0;
  std::size_t D = 3;
  double delta = 0.05;
  std::string mode = "loose";
  std::string variant = "corrected";
  std::string out;
};

struct MiArgs {
  std::string input;
  double delta = 0.05;
  std::optional<double> hy;
  std::string features = "affine";
  std::string mode = "loose";
  std::string out;
};

struct HullArgs {
  std::string input;
  std::string out;
  std::string polygon_csv;
  std::vector<double> point;
  double delta = 0.05;
};

struct ValidateArgs {
  std::string bound = "compression";
  std::string gen = "linear";
  std::size_t n = 200;
  std::size_t n_eval = 100'000;
  std::size_t trials = 200;
  double delta = 0.05;
  std::uint64_t seed = 1;
  std::string features = "affine";
  std::string mode = "loose";
  double C = 0.0;
  unsigned threads = 0;
  std::string out;
  std::string csv;
};

struct GenerateArgs {
  std::string gen = "linear";
  std::size_t n = 200;
  std::uint64_t seed = 1;
  std::string out;
};

// Each command writes its JSON (with the manifest embedded) to `out` or standard output.
// Library exceptions propagate; the caller maps them to exit codes.
int run_fit(const FitArgs& a, RunManifest m);
int run_bounds(const BoundsArgs& a, RunManifest m);
int run_mi(const MiArgs& a, RunManifest m);
int run_hull(const HullArgs& a, RunManifest m);
int run_validate(const ValidateArgs& a, RunManifest m);
int run_generate(const GenerateArgs& a);

}  // namespace qtube::cli
