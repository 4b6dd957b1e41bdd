#include "voi/myopic.hpp"

#include "voi/error.hpp"

#include <algorithm>

namespace voi {

namespace {

const EvidenceVariable& unobserved(const DiagnosisModel& model, const Observations& observations,
                                   const std::string& id) {
    const auto& var = model.at(id);
    if (observations.contains(id))
        throw Error(ErrorCode::already_observed, "variable '" + id + "' is already observed");
    return var;
}

} // namespace

std::string_view method_name(VoiMethod m) noexcept {
    switch (m) {
    case VoiMethod::myopic: return "myopic";
    case VoiMethod::exact: return "exact";
    case VoiMethod::clt: return "clt";
    }
    return "?";
}

double certain_equivalent(double eu, const RiskModel& risk) {
    return risk.inverse(eu);
}

double eu_act_now(const EvidenceState& state) {
    const auto& u = state.utility;
    const double p = state.probability_h();
    if (act_decision_log(state.log_odds, u.p_star()) == Decision::act)
        return p * u.u_h_d() + (1.0 - p) * u.u_not_h_d();
    return p * u.u_h_not_d() + (1.0 - p) * u.u_not_h_not_d();
}

double eu_act_now(const DiagnosisModel& model, const Observations& observations) {
    return eu_act_now(propagate(model, observations));
}

double eu_observe(const EvidenceState& state, const EvidenceVariable& variable) {
    const auto& u = state.utility;
    const double threshold = log_odds_from_probability(u.p_star());
    const auto w = weight_of_evidence(variable);

    // Per outcome: act iff the updated odds clear the threshold; then mix
    // over outcomes given H and given not H.
    double eu_h = 0.0, eu_not_h = 0.0;
    for (std::size_t k = 0; k < variable.outcome_count(); ++k) {
        const double a = variable.likelihood_h[k];
        const double b = variable.likelihood_not_h[k];
        if (a == 0.0 && b == 0.0) continue;
        const bool act = exceeds(state.log_odds + w.weights[k], threshold);
        eu_h += a * (act ? u.u_h_d() : u.u_h_not_d());
        eu_not_h += b * (act ? u.u_not_h_d() : u.u_not_h_not_d());
    }
    const double p = state.probability_h();
    return p * eu_h + (1.0 - p) * eu_not_h;
}

double eu_observe(const DiagnosisModel& model, const Observations& observations, const std::string& id) {
    unobserved(model, observations, id);
    const auto state = propagate(model, observations);
    return eu_observe(state, *state.find(id));
}

VoiResult make_voi_result(const RiskModel& risk, double eu_phi, double eu_obs, double cost, VoiMethod method) {
    VoiResult r;
    r.eu_phi = eu_phi;
    r.eu_obs = eu_obs;
    r.ce_phi = certain_equivalent(eu_phi, risk);
    r.ce_obs = certain_equivalent(eu_obs, risk);
    r.vi = r.ce_obs - r.ce_phi;
    r.cost = cost;
    r.nvi = r.vi - cost;
    r.method = method;
    return r;
}

double eu_from_tails(const EvidenceState& state, double tail_h, double tail_not_h) {
    const auto& u = state.utility;
    const double p = state.probability_h();
    const double eu_h = tail_h * u.u_h_d() + (1.0 - tail_h) * u.u_h_not_d();
    const double eu_not_h = tail_not_h * u.u_not_h_d() + (1.0 - tail_not_h) * u.u_not_h_not_d();
    return p * eu_h + (1.0 - p) * eu_not_h;
}

VoiResult value_of_information(const EvidenceState& state, const EvidenceVariable& variable) {
    const std::string ids[] = {variable.id};
    return make_voi_result(state.utility.risk, eu_act_now(state), eu_observe(state, variable),
                           state.set_cost(ids), VoiMethod::myopic);
}

VoiResult value_of_information(const DiagnosisModel& model, const Observations& observations,
                               const std::string& id) {
    unobserved(model, observations, id);
    const auto state = propagate(model, observations);
    return value_of_information(state, *state.find(id));
}

std::vector<RankedVariable> myopic_ranking(const EvidenceState& state) {
    std::vector<RankedVariable> ranking;
    ranking.reserve(state.remaining.size());
    for (const auto& var : state.remaining) ranking.push_back({var.id, value_of_information(state, var)});
    std::sort(ranking.begin(), ranking.end(), [](const RankedVariable& a, const RankedVariable& b) {
        if (a.result.nvi != b.result.nvi) return a.result.nvi > b.result.nvi;
        return a.id < b.id;
    });
    return ranking;
}

std::vector<RankedVariable> myopic_ranking(const DiagnosisModel& model, const Observations& observations) {
    return myopic_ranking(propagate(model, observations));
}

} // namespace voi
