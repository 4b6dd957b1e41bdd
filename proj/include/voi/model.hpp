#pragma once

// Binary-hypothesis diagnosis model: a hypothesis H, a binary decision D,
// and evidence variables that are conditionally independent given H except
// inside declared dependency groups.
//
// Probabilities of H are carried as natural-log odds on the extended real
// line; +inf / -inf mean certainty of H / not-H.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace voi {

using Observations = std::map<std::string, std::string>;  // variable id -> outcome label

struct EvidenceVariable {
    std::string id;
    std::vector<std::string> outcomes;
    std::vector<double> likelihood_h;      // p(outcome | H)
    std::vector<double> likelihood_not_h;  // p(outcome | not H)
    double cost = 0.0;

    std::size_t outcome_count() const noexcept { return outcomes.size(); }
    std::optional<std::size_t> outcome_index(const std::string& label) const;
};

struct RiskModel {
    enum class Kind { linear, exponential };
    Kind kind = Kind::linear;
    double tolerance = 1.0;  // rho, only read for exponential

    static RiskModel linear() { return {}; }
    static RiskModel exponential(double rho) { return {Kind::exponential, rho}; }

    // Linear: u(x) = x.  Exponential: u(x) = -exp(-x / rho).
    double utility(double value) const;
    // Throws ErrorCode::domain_error when u is outside the range of utility().
    double inverse(double u) const;
};

struct UtilityModel {
    double value_h_d = 1.0;
    double value_h_not_d = 0.0;
    double value_not_h_d = 0.0;
    double value_not_h_not_d = 1.0;
    RiskModel risk;

    double u_h_d() const { return risk.utility(value_h_d); }
    double u_h_not_d() const { return risk.utility(value_h_not_d); }
    double u_not_h_d() const { return risk.utility(value_not_h_d); }
    double u_not_h_not_d() const { return risk.utility(value_not_h_not_d); }

    // B = U(H,D) - U(H,~D), measured in utility.
    double benefit() const { return u_h_d() - u_h_not_d(); }
    // C = U(~H,~D) - U(~H,D), measured in utility.
    double cost() const { return u_not_h_not_d() - u_not_h_d(); }
    double p_star() const { return cost() / (cost() + benefit()); }
};

// Joint tables are row-major over member outcome tuples; the first member
// varies slowest.
struct EvidenceGroup {
    std::vector<std::string> member_ids;
    std::vector<double> joint_h;
    std::vector<double> joint_not_h;
};

struct SetCost {
    std::vector<std::string> members;
    double cost = 0.0;
};

struct DiagnosisModel {
    double prior = 0.5;
    UtilityModel utility;
    std::vector<EvidenceVariable> evidence;
    std::vector<EvidenceGroup> groups;
    std::vector<SetCost> set_costs;

    const EvidenceVariable* find(const std::string& id) const;
    const EvidenceVariable& at(const std::string& id) const;  // throws unknown_variable
};

enum class Decision { act, dont_act };

std::string_view decision_name(Decision d) noexcept;

struct ThresholdSummary {
    double p_star = 0.5;
    double w_star = 0.0;  // extended real
};

struct WeightOfEvidence {
    std::vector<double> weights;  // ln p(o|H) - ln p(o|~H) per outcome, extended real
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const noexcept { return violations.empty(); }
};

inline constexpr double kNormalizationTolerance = 1e-12;
inline constexpr double kGroupMarginalTolerance = 1e-9;

// Log-odds gaps smaller than this are ties.
inline constexpr double kTieTolerance = 1e-11;

ValidationReport validate_model(const DiagnosisModel& model);
// Throws ErrorCode::invalid_model with every violation in the message.
void require_valid(const DiagnosisModel& model);

// Strict comparison with the tie convention: equal within kTieTolerance is
// not an exceedance.
bool exceeds(double log_value, double log_threshold) noexcept;

double log_odds_from_probability(double p) noexcept;
double probability_from_log_odds(double log_odds) noexcept;

// ln O(H | observations), summed in log space.
double posterior_log_odds(const DiagnosisModel& model, const Observations& observations);
double posterior_odds(const DiagnosisModel& model, const Observations& observations);

ThresholdSummary threshold(const DiagnosisModel& model, const Observations& observations = {});

// D iff odds strictly exceeds p*/(1-p*).
Decision act_decision(double odds, double p_star);
Decision act_decision_log(double log_odds, double p_star);

WeightOfEvidence weight_of_evidence(const EvidenceVariable& variable);
double weight_of_outcome(double likelihood_h, double likelihood_not_h) noexcept;

// Cost of observing a set: explicit override for exactly that member set,
// otherwise the sum of member costs.
double set_cost(const DiagnosisModel& model, std::span<const std::string> ids);

// The model after propagating observations: current log odds, the remaining
// unobserved variables with likelihoods conditioned through their groups,
// and the groups restricted to unobserved members.
struct EvidenceState {
    double log_odds = 0.0;
    UtilityModel utility;
    std::vector<EvidenceVariable> remaining;
    std::vector<EvidenceGroup> groups;
    std::vector<SetCost> set_costs;

    double probability_h() const noexcept { return probability_from_log_odds(log_odds); }
    const EvidenceVariable* find(const std::string& id) const;
    double set_cost(std::span<const std::string> ids) const;
    // Threshold on total weight relative to the current odds.
    double w_star() const;
};

EvidenceState propagate(const DiagnosisModel& model, const Observations& observations);

} // namespace voi
