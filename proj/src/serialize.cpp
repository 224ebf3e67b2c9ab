#include "qtube/serialize.hpp"

#include <cstdio>

#include "qtube/errors.hpp"

namespace qtube {

using nlohmann::json;

namespace {

json header(const char* type) { return json{{"schema", kSchemaVersion}, {"type", type}}; }

void check_header(const json& j, const char* type) {
  if (!j.is_object()) throw DataError(std::string("expected a JSON object for ") + type);
  if (j.contains("schema") && j.at("schema") != kSchemaVersion) {
    throw DataError("unsupported schema version " + j.at("schema").dump() + " for " + type);
  }
  if (j.contains("type") && j.at("type") != type) {
    throw DataError("expected type '" + std::string(type) + "', got " + j.at("type").dump());
  }
}

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

FeatureKind parse_feature_kind(const std::string& s) {
  if (s == "intercept") return FeatureKind::kInterceptOnly;
  if (s == "affine") return FeatureKind::kAffine;
  if (s == "rbf") return FeatureKind::kRbf;
  throw DataError("unknown feature kind '" + s + "'");
}

const char* feature_kind_name(FeatureKind k) {
  switch (k) {
    case FeatureKind::kInterceptOnly:
      return "intercept";
    case FeatureKind::kAffine:
      return "affine";
    case FeatureKind::kRbf:
      return "rbf";
  }
  return "?";
}

}  // namespace

void to_json(json& j, const FeatureMap& fm) {
  j = json{{"kind", feature_kind_name(fm.kind())}, {"input_dim", fm.input_dim()}};
  if (fm.kind() == FeatureKind::kRbf) {
    j["centers"] = fm.centers();
    j["bandwidth"] = fm.bandwidth();
  }
}

void from_json(const json& j, FeatureMap& fm) {
  switch (parse_feature_kind(j.at("kind").get<std::string>())) {
    case FeatureKind::kInterceptOnly:
      fm = FeatureMap::intercept_only(j.at("input_dim").get<std::size_t>());
      break;
    case FeatureKind::kAffine:
      fm = FeatureMap::affine(j.at("input_dim").get<std::size_t>());
      break;
    case FeatureKind::kRbf:
      fm = FeatureMap::rbf(j.at("centers").get<std::vector<std::vector<double>>>(), j.at("bandwidth").get<double>());
      break;
  }
}

void to_json(json& j, const TubeModel& m) {
  j = header("tube");
  j["features"] = m.fm;
  j["w"] = m.w;
  j["t"] = m.t;
}

void from_json(const json& j, TubeModel& m) {
  check_header(j, "tube");
  m.fm = j.at("features").get<FeatureMap>();
  m.w = j.at("w").get<std::vector<double>>();
  m.t = j.at("t").get<double>();
  if (m.w.size() != m.fm.dim()) throw DataError("tube: w has the wrong length for its feature map");
}

void to_json(json& j, const MultiTubeModel& m) {
  j = header("multi_tube");
  j["features"] = m.fm;
  j["w"] = m.w;
  j["inc_minus"] = m.inc_minus;
  j["inc_plus"] = m.inc_plus;
}

void from_json(const json& j, MultiTubeModel& m) {
  check_header(j, "multi_tube");
  m.fm = j.at("features").get<FeatureMap>();
  m.w = j.at("w").get<std::vector<double>>();
  m.inc_minus = j.at("inc_minus").get<std::vector<double>>();
  m.inc_plus = j.at("inc_plus").get<std::vector<double>>();
  if (m.w.size() != m.fm.dim()) throw DataError("multi_tube: w has the wrong length for its feature map");
  if (m.inc_minus.size() != m.inc_plus.size()) throw DataError("multi_tube: increment lists differ in length");
}

void to_json(json& j, const BoundReport& r) {
  j = header("bound");
  j["kind"] = to_string(r.kind);
  j["epsilon"] = r.epsilon;
  j["delta"] = r.delta;
  j["n"] = r.n;
  j["D"] = r.D;
  j["counting_mode"] = to_string(r.counting_mode);
  j["alternative"] = r.alternative;
  j["alternative_label"] = r.alternative_label;
  j["note"] = r.note;
}

void from_json(const json& j, BoundReport& r) {
  check_header(j, "bound");
  r.kind = parse_bound_kind(j.at("kind").get<std::string>());
  r.epsilon = j.at("epsilon").get<double>();
  r.delta = j.at("delta").get<double>();
  r.n = j.at("n").get<std::size_t>();
  r.D = j.at("D").get<std::size_t>();
  r.counting_mode = parse_counting_mode(j.at("counting_mode").get<std::string>());
  r.alternative = j.at("alternative").get<double>();
  r.alternative_label = j.at("alternative_label").get<std::string>();
  r.note = j.at("note").get<std::string>();
}

void to_json(json& j, const MiReport& r) {
  j = header("mi");
  j["H_Y"] = r.H_Y;
  j["mean_log_width"] = r.mean_log_width;
  j["epsilon"] = r.epsilon;
  j["h_eps"] = r.h_eps;
  j["ce_upper"] = r.ce_upper;
  j["mi_lower"] = r.mi_lower;
  j["valid"] = r.valid;
  j["epsilon_source"] = r.epsilon_source;
  j["entropy_source"] = r.entropy_source;
}

void from_json(const json& j, MiReport& r) {
  check_header(j, "mi");
  r.H_Y = j.at("H_Y").get<double>();
  r.mean_log_width = j.at("mean_log_width").get<double>();
  r.epsilon = j.at("epsilon").get<double>();
  r.h_eps = j.at("h_eps").get<double>();
  r.ce_upper = j.at("ce_upper").get<double>();
  r.mi_lower = j.at("mi_lower").get<double>();
  r.valid = j.at("valid").get<bool>();
  r.epsilon_source = j.at("epsilon_source").get<std::string>();
  r.entropy_source = j.at("entropy_source").get<std::string>();
}

void to_json(json& j, const TrialConfig& c) {
  j = json{{"gen", c.gen.to_string()},   {"n_train", c.n_train},     {"n_eval", c.n_eval},
           {"trials", c.trials},         {"delta", c.delta},         {"features", c.features},
           {"bound", to_string(c.bound)}, {"mode", to_string(c.mode)}, {"base_seed", c.base_seed},
           {"C", c.C}};
}

void from_json(const json& j, TrialConfig& c) {
  c.gen = GeneratorSpec::parse(j.at("gen").get<std::string>());
  c.n_train = j.at("n_train").get<std::size_t>();
  c.n_eval = j.at("n_eval").get<std::size_t>();
  c.trials = j.at("trials").get<std::size_t>();
  c.delta = j.at("delta").get<double>();
  c.features = j.at("features").get<std::string>();
  c.bound = parse_bound_kind(j.at("bound").get<std::string>());
  c.mode = parse_counting_mode(j.at("mode").get<std::string>());
  c.base_seed = j.at("base_seed").get<std::uint64_t>();
  c.C = j.at("C").get<double>();
}

void to_json(json& j, const ValidationReport& r) {
  j = header("validation");
  j["config"] = r.config;
  j["bound_label"] = r.bound_label;
  j["alt_label"] = r.alt_label;
  j["violations"] = r.violations;
  j["violation_rate"] = r.violation_rate;
  j["ci"] = {r.ci_lo, r.ci_hi};
  j["cap"] = r.cap;
  j["within_cap"] = r.within_cap();
  j["alt_violations"] = r.alt_violations;
  j["alt_violation_rate"] = r.alt_violation_rate;
  json rows = json::array();
  for (const TrialRow& t : r.rows) {
    rows.push_back({{"trial", t.trial},
                    {"seed", t.seed},
                    {"true_risk", t.true_risk},
                    {"true_risk_se", t.true_risk_se},
                    {"empirical_risk", t.empirical_risk},
                    {"bound", t.bound},
                    {"violated", t.violated},
                    {"alt_bound", t.alt_bound},
                    {"alt_violated", t.alt_violated}});
  }
  j["trials"] = std::move(rows);
}

void from_json(const json& j, ValidationReport& r) {
  check_header(j, "validation");
  r.config = j.at("config").get<TrialConfig>();
  r.bound_label = j.at("bound_label").get<std::string>();
  r.alt_label = j.at("alt_label").get<std::string>();
  r.violations = j.at("violations").get<std::size_t>();
  r.violation_rate = j.at("violation_rate").get<double>();
  r.ci_lo = j.at("ci").at(0).get<double>();
  r.ci_hi = j.at("ci").at(1).get<double>();
  r.cap = j.at("cap").get<double>();
  r.alt_violations = j.at("alt_violations").get<std::size_t>();
  r.alt_violation_rate = j.at("alt_violation_rate").get<double>();
  r.rows.clear();
  for (const json& t : j.at("trials")) {
    TrialRow row;
    row.trial = t.at("trial").get<std::size_t>();
    row.seed = t.at("seed").get<std::uint64_t>();
    row.true_risk = t.at("true_risk").get<double>();
    row.true_risk_se = t.at("true_risk_se").get<double>();
    row.empirical_risk = t.at("empirical_risk").get<double>();
    row.bound = t.at("bound").get<double>();
    row.violated = t.at("violated").get<bool>();
    row.alt_bound = t.at("alt_bound").get<double>();
    row.alt_violated = t.at("alt_violated").get<bool>();
    r.rows.push_back(row);
  }
}

void to_json(json& j, const MiExperimentReport& r) {
  j = header("mi_experiment");
  j["config"] = r.config;
  j["analytic_I"] = r.analytic_I;
  j["violations"] = r.violations;
  j["violation_rate"] = r.violation_rate;
  json rows = json::array();
  for (const MiTrialRow& t : r.rows) {
    rows.push_back({{"trial", t.trial},
                    {"seed", t.seed},
                    {"H_Y", t.H_Y},
                    {"mean_log_width", t.mean_log_width},
                    {"epsilon", t.epsilon},
                    {"mi_lower", t.mi_lower},
                    {"valid", t.valid},
                    {"violated", t.violated}});
  }
  j["trials"] = std::move(rows);
  json gaps = json::array();
  for (const GapPoint& g : r.gap_trajectory) {
    gaps.push_back({{"n", g.n}, {"trials", g.trials}, {"median_gap", g.median_gap}, {"mean_gap", g.mean_gap}});
  }
  j["gap_trajectory"] = std::move(gaps);
}

void from_json(const json& j, MiExperimentReport& r) {
  check_header(j, "mi_experiment");
  r.config = j.at("config").get<TrialConfig>();
  r.analytic_I = j.at("analytic_I").get<double>();
  r.violations = j.at("violations").get<std::size_t>();
  r.violation_rate = j.at("violation_rate").get<double>();
  r.rows.clear();
  for (const json& t : j.at("trials")) {
    MiTrialRow row;
    row.trial = t.at("trial").get<std::size_t>();
    row.seed = t.at("seed").get<std::uint64_t>();
    row.H_Y = t.at("H_Y").get<double>();
    row.mean_log_width = t.at("mean_log_width").get<double>();
    row.epsilon = t.at("epsilon").get<double>();
    row.mi_lower = t.at("mi_lower").get<double>();
    row.valid = t.at("valid").get<bool>();
    row.violated = t.at("violated").get<bool>();
    r.rows.push_back(row);
  }
  r.gap_trajectory.clear();
  for (const json& g : j.at("gap_trajectory")) {
    r.gap_trajectory.push_back({g.at("n").get<std::size_t>(), g.at("trials").get<std::size_t>(),
                                g.at("median_gap").get<double>(), g.at("mean_gap").get<double>()});
  }
}

std::string format_trials_csv(const ValidationReport& r) {
  std::string out = "trial,seed,true_risk,true_risk_se,empirical_risk,bound,violated,alt_bound,alt_violated\n";
  for (const TrialRow& t : r.rows) {
    out += std::to_string(t.trial) + "," + std::to_string(t.seed) + "," + g17(t.true_risk) + "," +
           g17(t.true_risk_se) + "," + g17(t.empirical_risk) + "," + g17(t.bound) + "," + (t.violated ? "1" : "0") +
           "," + g17(t.alt_bound) + "," + (t.alt_violated ? "1" : "0") + "\n";
  }
  return out;
}

std::string format_trials_csv(const MiExperimentReport& r) {
  std::string out = "trial,seed,H_Y,mean_log_width,epsilon,mi_lower,valid,violated\n";
  for (const MiTrialRow& t : r.rows) {
    out += std::to_string(t.trial) + "," + std::to_string(t.seed) + "," + g17(t.H_Y) + "," + g17(t.mean_log_width) +
           "," + g17(t.epsilon) + "," + g17(t.mi_lower) + "," + (t.valid ? "1" : "0") + "," +
           (t.violated ? "1" : "0") + "\n";
  }
  return out;
}

}  // namespace qtube
