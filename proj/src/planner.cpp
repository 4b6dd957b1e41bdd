#include "voi/planner.hpp"

#include "voi/error.hpp"

namespace voi {

std::string_view subset_method_name(SubsetMethod m) noexcept {
    switch (m) {
    case SubsetMethod::exact: return "exact";
    case SubsetMethod::clt: return "clt";
    case SubsetMethod::automatic: return "auto";
    }
    return "?";
}

std::string_view policy_name(Policy p) noexcept {
    switch (p) {
    case Policy::act_now: return "act-now";
    case Policy::myopic: return "myopic";
    case Policy::nonmyopic: return "nonmyopic";
    }
    return "?";
}

SubsetMethod parse_subset_method(std::string_view text) {
    if (text == "exact") return SubsetMethod::exact;
    if (text == "clt") return SubsetMethod::clt;
    if (text == "auto") return SubsetMethod::automatic;
    throw Error(ErrorCode::invalid_argument, "unknown method '" + std::string(text) + "' (expected exact, clt or auto)");
}

Policy parse_policy(std::string_view text) {
    if (text == "act-now") return Policy::act_now;
    if (text == "myopic") return Policy::myopic;
    if (text == "nonmyopic") return Policy::nonmyopic;
    throw Error(ErrorCode::invalid_argument,
                "unknown policy '" + std::string(text) + "' (expected act-now, myopic or nonmyopic)");
}

VoiResult subset_voi(const EvidenceState& state, std::span<const std::string> subset, const PlannerSettings& settings) {
    switch (settings.method) {
    case SubsetMethod::exact: return exact_subset_voi(state, subset, settings.limits);
    case SubsetMethod::clt: return clt_subset_voi(state, subset, settings.limits);
    case SubsetMethod::automatic: break;
    }
    if (enumeration_affordable(independent_factors(state, subset), settings.limits))
        return exact_subset_voi(state, subset, settings.limits);
    return clt_subset_voi(state, subset, settings.limits);
}

namespace {

Recommendation act_now(const EvidenceState& state, std::vector<RankedVariable> singletons) {
    Recommendation rec;
    rec.action = Recommendation::Action::act_now;
    rec.decision = act_decision_log(state.log_odds, state.utility.p_star());
    rec.singletons = std::move(singletons);
    return rec;
}

Recommendation observe(std::string id, std::vector<RankedVariable> singletons) {
    Recommendation rec;
    rec.action = Recommendation::Action::observe;
    rec.variable = std::move(id);
    rec.singletons = std::move(singletons);
    return rec;
}

} // namespace

Recommendation myopic_step(const EvidenceState& state) {
    auto ranking = myopic_ranking(state);
    if (!ranking.empty() && ranking.front().result.nvi > 0.0) {
        auto id = ranking.front().id;
        return observe(std::move(id), std::move(ranking));
    }
    return act_now(state, std::move(ranking));
}

Recommendation myopic_step(const DiagnosisModel& model, const Observations& observations) {
    return myopic_step(propagate(model, observations));
}

Recommendation nonmyopic_step(const EvidenceState& state, const PlannerSettings& settings) {
    auto ranking = myopic_ranking(state);
    if (ranking.empty()) return act_now(state, std::move(ranking));
    if (ranking.front().result.nvi > 0.0) {
        auto id = ranking.front().id;
        return observe(std::move(id), std::move(ranking));
    }

    // No single test pays for itself: scan the prefixes of the NVI ordering.
    std::vector<PrefixRow> scan;
    std::vector<std::string> prefix;
    bool any_positive = false;
    for (const auto& entry : ranking) {
        prefix.push_back(entry.id);
        PrefixRow row{prefix.size(), prefix, subset_voi(state, prefix, settings)};
        any_positive = any_positive || row.result.nvi > 0.0;
        scan.push_back(std::move(row));
    }

    auto first = ranking.front().id;
    Recommendation rec = any_positive ? observe(std::move(first), std::move(ranking))
                                      : act_now(state, std::move(ranking));
    rec.prefix_scan = std::move(scan);
    return rec;
}

Recommendation nonmyopic_step(const DiagnosisModel& model, const Observations& observations,
                              const PlannerSettings& settings) {
    return nonmyopic_step(propagate(model, observations), settings);
}

PolicyTrace run_policy(const DiagnosisModel& model, Policy policy, const OutcomeOracle& oracle,
                       const PlannerSettings& settings) {
    PolicyTrace trace;
    Observations observed;
    std::vector<std::string> order;
    auto state = propagate(model, observed);

    while (true) {
        Recommendation rec;
        switch (policy) {
        case Policy::act_now: rec = act_now(state, {}); break;
        case Policy::myopic: rec = myopic_step(state); break;
        case Policy::nonmyopic: rec = nonmyopic_step(state, settings); break;
        }
        if (rec.action == Recommendation::Action::act_now) {
            trace.action = rec.decision;
            break;
        }
        std::string outcome = oracle(rec.variable);
        observed[rec.variable] = outcome;
        order.push_back(rec.variable);
        state = propagate(model, observed);
        trace.steps.push_back({rec.variable, std::move(outcome), state.log_odds});
    }
    trace.observation_cost = order.empty() ? 0.0 : set_cost(model, order);
    return trace;
}

} // namespace voi
