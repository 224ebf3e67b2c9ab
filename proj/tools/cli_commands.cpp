#include "cli_commands.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <iterator>
#include <stdexcept>

#include "qtube/bounds.hpp"
#include "qtube/errors.hpp"
#include "qtube/features.hpp"
#include "qtube/harness.hpp"
#include "qtube/hull.hpp"
#include "qtube/info.hpp"
#include "qtube/serialize.hpp"
#include "qtube/tubes.hpp"

namespace qtube::cli {

using nlohmann::json;

namespace {

constexpr std::size_t kPlotGrid = 200;

void emit(const json& doc, const std::string& out) {
  const std::string text = doc.dump(2) + "\n";
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw DataError("cannot write '" + out + "'");
  f << text;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw DataError("cannot write '" + path + "'");
  f << text;
}

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Human-facing numbers; data files keep 17 digits.
std::string g10(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

SlackVariant parse_variant(const std::string& s) {
  if (s == "corrected" || s == to_string(SlackVariant::kCorrectedSign)) return SlackVariant::kCorrectedSign;
  if (s == "verbatim") return SlackVariant::kVerbatim;
  throw std::invalid_argument("unknown slack variant '" + s + "' (expected corrected or verbatim)");
}

// x-grid over [min X, max X] with lo_l, hi_l columns per level.
template <class IntervalAt>
std::string plot_csv(const Dataset& data, std::size_t levels, IntervalAt interval_at) {
  if (data.dim() != 1) throw std::invalid_argument("--plot needs data with a single covariate");
  double lo = data[0].x[0], hi = lo;
  for (const Sample& s : data.samples()) {
    lo = std::min(lo, s.x[0]);
    hi = std::max(hi, s.x[0]);
  }
  std::string out = "x";
  for (std::size_t l = 1; l <= levels; ++l) out += ",lo_" + std::to_string(l) + ",hi_" + std::to_string(l);
  out += "\n";
  for (std::size_t k = 0; k < kPlotGrid; ++k) {
    const double x = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(kPlotGrid - 1);
    out += g17(x);
    const std::vector<double> xv{x};
    for (std::size_t l = 0; l < levels; ++l) {
      const Interval iv = interval_at(xv, l);
      out += "," + g17(iv.lo) + "," + g17(iv.hi);
    }
    out += "\n";
  }
  return out;
}

json boundary_json(const std::vector<BoundaryPoint>& pts) {
  json arr = json::array();
  for (const BoundaryPoint& p : pts) arr.push_back({{"index", p.index}, {"side", p.side}});
  return arr;
}

}  // namespace

json RunManifest::to_json() const {
  json j{{"command", command}, {"flags", flags}, {"tool_version", tool_version}, {"timestamp", timestamp}};
  j["input_sha256"] = input_sha256.empty() ? json(nullptr) : json(input_sha256);
  j["seed"] = seed ? json(*seed) : json(nullptr);
  return j;
}

std::string sha256_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open '" + path + "'");
  const std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr)) {
    throw DataError("sha256 failed for '" + path + "'");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int run_fit(const FitArgs& a, RunManifest m) {
  if (a.kind != "support" && a.kind != "quantile" && a.kind != "multi") {
    throw std::invalid_argument("--kind must be support, quantile or multi");
  }
  if (a.kind == "quantile" && a.C.size() != 1) throw std::invalid_argument("--kind quantile needs exactly one --C value");
  if (a.kind == "multi" && a.C.empty()) throw std::invalid_argument("--kind multi needs a --C list");
  const Dataset data = load_csv(a.input);
  m.input_sha256 = sha256_file(a.input);
  const FeatureMap fm = FeatureMap::parse(a.features, data);

  json doc{{"schema", kSchemaVersion}, {"type", "fit"}, {"kind", a.kind}, {"n", data.size()}};
  std::string plot;
  if (a.kind == "support") {
    const TubeModel tube = fit_support_tube(data, fm);
    doc["model"] = tube;
    doc["boundary"] = boundary_json(boundary_points(tube, data));
    if (!a.plot.empty()) plot = plot_csv(data, 1, [&](const std::vector<double>& x, std::size_t) { return tube.interval(x); });
  } else if (a.kind == "quantile") {
    const QuantileFit fit = fit_quantile_tube(data, fm, a.C[0]);
    doc["model"] = fit.model;
    doc["C"] = fit.C;
    doc["objective"] = fit.objective;
    doc["excluded"] = fit.excluded_count();
    doc["empirical_risk"] = empirical_risk(fit.model, data);
    doc["boundary"] = boundary_json(fit.active);
    if (!a.plot.empty()) {
      plot = plot_csv(data, 1, [&](const std::vector<double>& x, std::size_t) { return fit.model.interval(x); });
    }
  } else {
    const MultiTubeModel mt = fit_multi_quantile(data, fm, a.C, {a.symmetric});
    doc["model"] = mt;
    doc["C"] = a.C;
    json excluded = json::array();
    for (std::size_t l = 0; l < mt.levels(); ++l) {
      excluded.push_back(static_cast<std::size_t>(std::llround(empirical_risk(mt, l, data) * static_cast<double>(data.size()))));
    }
    doc["excluded"] = std::move(excluded);
    doc["boundary"] = boundary_json(boundary_points(mt, data));
    if (!a.plot.empty()) {
      plot = plot_csv(data, mt.levels(), [&](const std::vector<double>& x, std::size_t l) { return mt.interval(x, l); });
    }
  }
  if (!a.plot.empty()) write_text(a.plot, plot);
  doc["manifest"] = m.to_json();
  emit(doc, a.out);
  return kOk;
}

int run_bounds(const BoundsArgs& a, RunManifest m) {
  const BoundKind kind = parse_bound_kind(a.kind);
  const BoundReport r = make_bound_report(kind, a.n, a.D, a.delta, parse_counting_mode(a.mode), parse_variant(a.variant));
  json doc = r;
  doc["manifest"] = m.to_json();
  emit(doc, a.out);
  return kOk;
}

int run_mi(const MiArgs& a, RunManifest m) {
  if (!(a.delta > 0.0 && a.delta < 1.0)) throw std::invalid_argument("--delta must lie in (0, 1)");
  const Dataset data = load_csv(a.input);
  m.input_sha256 = sha256_file(a.input);
  const FeatureMap fm = FeatureMap::parse(a.features, data);
  const CountingMode mode = parse_counting_mode(a.mode);
  const TubeModel tube = fit_support_tube(data, fm);
  const std::size_t D = compression_size(fm);
  if (D >= data.size()) throw std::invalid_argument("need more samples than the compression size " + std::to_string(D));
  const double eps = compression_epsilon(a.delta, D, data.size(), mode);
  const double hy = a.hy ? *a.hy : marginal_entropy(data.responses());
  MiReport r = mi_lower_bound(hy, mean_log_width(tube, data), eps);
  r.epsilon_source = "compression_epsilon(delta=" + g10(a.delta) + ", D=" + std::to_string(D) +
                     ", n=" + std::to_string(data.size()) + ", mode=" + to_string(mode) + ")";
  r.entropy_source = a.hy ? "user-supplied" : "m-spacing estimate, m=floor(sqrt(n))";
  if (!r.valid) std::cerr << "warning: epsilon = " << eps << " >= 0.5; the information bound does not apply\n";
  json doc = r;
  doc["model"] = tube;
  doc["manifest"] = m.to_json();
  emit(doc, a.out);
  return kOk;
}

int run_hull(const HullArgs& a, RunManifest m) {
  if (!a.point.empty() && a.point.size() != 2) throw std::invalid_argument("--point takes x,y");
  const Dataset data = load_csv(a.input);
  m.input_sha256 = sha256_file(a.input);
  if (data.dim() != 1) throw std::invalid_argument("hull needs data with a single covariate");
  const Polygon poly = convex_hull(data);
  json verts = json::array();
  for (const Point2& v : poly.vertices) verts.push_back({v.x, v.y});
  json doc{{"schema", kSchemaVersion}, {"type", "hull"}, {"n", data.size()}, {"vertices", verts},
           {"degenerate", poly.degenerate}};
  if (data.size() > 3) doc["mass_bound"] = make_bound_report(BoundKind::kHull, data.size(), 3, a.delta, CountingMode::kExact);
  if (!a.point.empty()) {
    const Point2 p{a.point[0], a.point[1]};
    doc["point"] = {p.x, p.y};
    doc["inside"] = contains(poly, p);
    const auto tube = separating_tube(data, p);
    doc["separating_tube"] = tube ? json(*tube) : json(nullptr);
  }
  if (!a.polygon_csv.empty()) write_polygon_csv(poly, a.polygon_csv);
  doc["manifest"] = m.to_json();
  emit(doc, a.out);
  return kOk;
}

int run_validate(const ValidateArgs& a, RunManifest m) {
  TrialConfig cfg;
  cfg.gen = GeneratorSpec::parse(a.gen);
  cfg.n_train = a.n;
  cfg.n_eval = a.n_eval;
  cfg.trials = a.trials;
  cfg.delta = a.delta;
  cfg.features = a.features;
  cfg.mode = parse_counting_mode(a.mode);
  cfg.base_seed = a.seed;
  cfg.C = a.C;
  cfg.threads = a.threads;
  m.seed = a.seed;

  json doc;
  std::string csv;
  std::size_t violations = 0;
  if (a.bound == "mi") {
    const MiExperimentReport r = mi_experiment(cfg);
    doc = r;
    csv = format_trials_csv(r);
    violations = r.violations;
    for (const GapPoint& g : r.gap_trajectory) {
      std::cout << "gap n=" << g.n << " median=" << g10(g.median_gap) << " mean=" << g10(g.mean_gap) << "\n";
    }
  } else {
    cfg.bound = parse_bound_kind(a.bound);
    const ValidationReport r = run_validation(cfg);
    doc = r;
    csv = format_trials_csv(r);
    violations = r.violations;
  }
  std::cout << "violations " << violations << "/" << cfg.trials << " (bound delta=" << g10(cfg.delta) << ")\n";
  if (!a.csv.empty()) write_text(a.csv, csv);
  doc["manifest"] = m.to_json();
  if (!a.out.empty()) emit(doc, a.out);
  return kOk;
}

int run_generate(const GenerateArgs& a) {
  if (a.n < 1) throw std::invalid_argument("--n must be positive");
  const Dataset d = generate_synthetic(GeneratorSpec::parse(a.gen), a.n, a.seed);
  if (a.out.empty() || a.out == "-") {
    std::cout << format_csv(d);
  } else {
    write_csv(d, a.out);
  }
  return kOk;
}

}  // namespace qtube::cli
