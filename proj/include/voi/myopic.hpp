#pragma once

// Single-test value of information under the assumption that the decision
// maker acts right after the observation.

#include "voi/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace voi {

enum class VoiMethod { myopic, exact, clt };

std::string_view method_name(VoiMethod m) noexcept;

struct VoiResult {
    double eu_phi = 0.0;  // act now
    double eu_obs = 0.0;  // observe, then act
    double ce_phi = 0.0;
    double ce_obs = 0.0;
    double vi = 0.0;
    double cost = 0.0;
    double nvi = 0.0;
    VoiMethod method = VoiMethod::myopic;
    // p(W > W* | H) and p(W > W* | not H); set-based methods only.
    std::optional<double> tail_h;
    std::optional<double> tail_not_h;
    std::vector<std::string> warnings;
};

struct RankedVariable {
    std::string id;
    VoiResult result;
};

double certain_equivalent(double eu, const RiskModel& risk);

double eu_act_now(const EvidenceState& state);
double eu_act_now(const DiagnosisModel& model, const Observations& observations);

double eu_observe(const EvidenceState& state, const EvidenceVariable& variable);
double eu_observe(const DiagnosisModel& model, const Observations& observations, const std::string& id);

VoiResult value_of_information(const EvidenceState& state, const EvidenceVariable& variable);
VoiResult value_of_information(const DiagnosisModel& model, const Observations& observations,
                               const std::string& id);

// Sorted by nvi descending, ties by id ascending.
std::vector<RankedVariable> myopic_ranking(const EvidenceState& state);
std::vector<RankedVariable> myopic_ranking(const DiagnosisModel& model, const Observations& observations);

// Expected utility of acting on the outcome of an evidence set, given the
// probabilities that the set drives the decision maker to act under H and
// under not H.
double eu_from_tails(const EvidenceState& state, double tail_h, double tail_not_h);

// Fills certain equivalents, vi and nvi from the two expected utilities.
VoiResult make_voi_result(const RiskModel& risk, double eu_phi, double eu_obs, double cost, VoiMethod method);

} // namespace voi
