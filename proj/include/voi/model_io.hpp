#pragma once

// Model files are JSON documents:
//
// {
//   "schema_version": 1,
//   "prior": 0.3,
//   "utility": {"h_d": 1, "h_not_d": 0, "not_h_d": 0, "not_h_not_d": 1,
//               "risk": "linear" | "exponential", "risk_tolerance": 2.0},
//   "evidence": [{"id": "a", "outcomes": ["pos", "neg"],
//                 "p_given_h": [0.8, 0.2], "p_given_not_h": [0.2, 0.8],
//                 "cost": 0.05}],
//   "groups": [{"members": ["a", "b"], "joint_given_h": [...],
//               "joint_given_not_h": [...]}],
//   "set_costs": [{"members": ["a", "b"], "cost": 0.08}]
// }
//
// "groups", "set_costs", "cost" and "risk_tolerance" are optional. Unknown
// keys are rejected. Joint tables are row-major, first member slowest.

#include "voi/model.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace voi {

inline constexpr int kModelSchemaVersion = 1;

// Structural problems throw ErrorCode::invalid_model. The result is not
// validated; call validate_model for the semantic checks.
DiagnosisModel read_model(std::string_view text);
DiagnosisModel load_model(const std::filesystem::path& path);

std::string write_model(const DiagnosisModel& model);
void save_model(const DiagnosisModel& model, const std::filesystem::path& path);

} // namespace voi
