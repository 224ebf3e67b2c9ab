#pragma once

#include <string>

#include "json.hpp"
#include "qtube/bounds.hpp"
#include "qtube/features.hpp"
#include "qtube/harness.hpp"
#include "qtube/info.hpp"
#include "qtube/tubes.hpp"

// JSON forms of the public result types. Top-level documents carry "schema": 1 and a "type"
// tag; from_json rejects other schema versions with DataError. Doubles use the shortest
// representation that parses back to the same value.
namespace qtube {

inline constexpr int kSchemaVersion = 1;

void to_json(nlohmann::json& j, const FeatureMap& fm);
void from_json(const nlohmann::json& j, FeatureMap& fm);

void to_json(nlohmann::json& j, const TubeModel& m);
void from_json(const nlohmann::json& j, TubeModel& m);

void to_json(nlohmann::json& j, const MultiTubeModel& m);
void from_json(const nlohmann::json& j, MultiTubeModel& m);

void to_json(nlohmann::json& j, const BoundReport& r);
void from_json(const nlohmann::json& j, BoundReport& r);

void to_json(nlohmann::json& j, const MiReport& r);
void from_json(const nlohmann::json& j, MiReport& r);

void to_json(nlohmann::json& j, const TrialConfig& c);
void from_json(const nlohmann::json& j, TrialConfig& c);

void to_json(nlohmann::json& j, const ValidationReport& r);
void from_json(const nlohmann::json& j, ValidationReport& r);

void to_json(nlohmann::json& j, const MiExperimentReport& r);
void from_json(const nlohmann::json& j, MiExperimentReport& r);

/// One row per trial: trial,seed,true_risk,true_risk_se,empirical_risk,bound,violated,alt_bound,alt_violated
std::string format_trials_csv(const ValidationReport& r);
/// One row per trial: trial,seed,H_Y,mean_log_width,epsilon,mi_lower,valid,violated
std::string format_trials_csv(const MiExperimentReport& r);

}  // namespace qtube
