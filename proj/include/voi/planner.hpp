#pragma once

// Test-selection procedures: the myopic rule and the nonmyopic prefix scan
// over NVI-ordered tests, plus a driver that runs a policy to completion.

#include "voi/model.hpp"
#include "voi/myopic.hpp"
#include "voi/subset.hpp"

#include <functional>
#include <string>
#include <vector>

namespace voi {

enum class SubsetMethod { exact, clt, automatic };
enum class Policy { act_now, myopic, nonmyopic };

std::string_view subset_method_name(SubsetMethod m) noexcept;
std::string_view policy_name(Policy p) noexcept;
SubsetMethod parse_subset_method(std::string_view text);  // "exact" | "clt" | "auto"
Policy parse_policy(std::string_view text);               // "act-now" | "myopic" | "nonmyopic"

struct PrefixRow {
    std::size_t m = 0;
    std::vector<std::string> set;
    VoiResult result;
};

struct Recommendation {
    enum class Action { observe, act_now };
    Action action = Action::act_now;
    std::string variable;                  // set when action == observe
    Decision decision = Decision::dont_act;  // decision taken now when action == act_now
    std::vector<RankedVariable> singletons;  // myopic ranking, best first
    std::vector<PrefixRow> prefix_scan;      // nonmyopic runs that reach the scan
};

struct PlannerSettings {
    SubsetMethod method = SubsetMethod::automatic;
    SubsetLimits limits;
};

// Set VOI by the requested method; automatic enumerates when affordable.
VoiResult subset_voi(const EvidenceState& state, std::span<const std::string> subset, const PlannerSettings& settings);

Recommendation myopic_step(const EvidenceState& state);
Recommendation myopic_step(const DiagnosisModel& model, const Observations& observations);

Recommendation nonmyopic_step(const EvidenceState& state, const PlannerSettings& settings = {});
Recommendation nonmyopic_step(const DiagnosisModel& model, const Observations& observations,
                              const PlannerSettings& settings = {});

struct TraceStep {
    std::string variable;
    std::string outcome;
    double log_odds_after = 0.0;
};

struct PolicyTrace {
    std::vector<TraceStep> steps;
    Decision action = Decision::dont_act;
    double observation_cost = 0.0;  // cost of the observed set
};

// Returns the outcome revealed when a variable is observed.
using OutcomeOracle = std::function<std::string(const std::string& variable)>;

PolicyTrace run_policy(const DiagnosisModel& model, Policy policy, const OutcomeOracle& oracle,
                       const PlannerSettings& settings = {});

} // namespace voi
