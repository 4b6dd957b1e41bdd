#include "voi/model.hpp"

#include "voi/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

namespace voi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::size_t> strides_for(const std::vector<std::size_t>& radices) {
    std::vector<std::size_t> strides(radices.size(), 1);
    for (std::size_t i = radices.size(); i-- > 1;) strides[i - 1] = strides[i] * radices[i];
    return strides;
}

bool distribution_ok(std::span<const double> p) {
    double sum = 0.0;
    for (double x : p) {
        if (!std::isfinite(x) || x < 0.0 || x > 1.0) return false;
        sum += x;
    }
    return std::abs(sum - 1.0) <= kNormalizationTolerance;
}

std::vector<std::string> sorted_copy(std::span<const std::string> ids) {
    std::vector<std::string> out(ids.begin(), ids.end());
    std::sort(out.begin(), out.end());
    return out;
}

double lookup_set_cost(std::span<const SetCost> overrides,
                       std::span<const std::string> ids,
                       const auto& member_cost) {
    auto key = sorted_copy(ids);
    for (const auto& sc : overrides) {
        if (sorted_copy(sc.members) == key) return sc.cost;
    }
    double total = 0.0;
    for (const auto& id : ids) total += member_cost(id);
    return total;
}

} // namespace

std::string_view error_code_name(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::invalid_model: return "E_INVALID_MODEL";
    case ErrorCode::unknown_variable: return "E_UNKNOWN_VARIABLE";
    case ErrorCode::unknown_outcome: return "E_UNKNOWN_OUTCOME";
    case ErrorCode::already_observed: return "E_ALREADY_OBSERVED";
    case ErrorCode::invalid_argument: return "E_INVALID_ARGUMENT";
    case ErrorCode::impossible_evidence: return "E_IMPOSSIBLE_EVIDENCE";
    case ErrorCode::limit_exceeded: return "E_LIMIT_EXCEEDED";
    case ErrorCode::domain_error: return "E_DOMAIN";
    }
    return "E_UNKNOWN";
}

std::string_view decision_name(Decision d) noexcept {
    return d == Decision::act ? "D" : "not-D";
}

std::optional<std::size_t> EvidenceVariable::outcome_index(const std::string& label) const {
    auto it = std::find(outcomes.begin(), outcomes.end(), label);
    if (it == outcomes.end()) return std::nullopt;
    return static_cast<std::size_t>(it - outcomes.begin());
}

double RiskModel::utility(double value) const {
    if (kind == Kind::linear) return value;
    return -std::exp(-value / tolerance);
}

double RiskModel::inverse(double u) const {
    if (kind == Kind::linear) return u;
    if (!(u < 0.0)) {
        throw Error(ErrorCode::domain_error,
                    "expected utility " + std::to_string(u) + " is outside the range of the exponential utility");
    }
    return -tolerance * std::log(-u);
}

const EvidenceVariable* DiagnosisModel::find(const std::string& id) const {
    for (const auto& v : evidence)
        if (v.id == id) return &v;
    return nullptr;
}

const EvidenceVariable& DiagnosisModel::at(const std::string& id) const {
    if (const auto* v = find(id)) return *v;
    throw Error(ErrorCode::unknown_variable, "unknown evidence variable '" + id + "'");
}

ValidationReport validate_model(const DiagnosisModel& model) {
    ValidationReport report;
    auto violate = [&](std::string msg) { report.violations.push_back(std::move(msg)); };

    if (!(model.prior > 0.0 && model.prior < 1.0))
        violate("prior must lie strictly between 0 and 1");

    const auto& u = model.utility;
    for (double v : {u.value_h_d, u.value_h_not_d, u.value_not_h_d, u.value_not_h_not_d}) {
        if (!std::isfinite(v)) {
            violate("outcome values must be finite");
            break;
        }
    }
    if (u.risk.kind == RiskModel::Kind::exponential &&
        !(u.risk.tolerance > 0.0 && std::isfinite(u.risk.tolerance))) {
        violate("risk tolerance must be positive and finite");
    } else {
        if (!(u.benefit() > 0.0)) violate("benefit must be positive: U(H,D) > U(H,not D)");
        if (!(u.cost() > 0.0)) violate("cost of the decision must be positive: U(not H,not D) > U(not H,D)");
    }

    std::set<std::string> ids;
    for (const auto& var : model.evidence) {
        const std::string where = "evidence '" + var.id + "': ";
        if (var.id.empty()) violate("evidence id must not be empty");
        if (!ids.insert(var.id).second) violate("duplicate evidence id '" + var.id + "'");
        std::set<std::string> labels(var.outcomes.begin(), var.outcomes.end());
        if (var.outcomes.size() < 2 || labels.size() != var.outcomes.size())
            violate(where + "needs at least two distinct outcome labels");
        if (var.likelihood_h.size() != var.outcomes.size() ||
            var.likelihood_not_h.size() != var.outcomes.size()) {
            violate(where + "likelihood rows must have one entry per outcome");
            continue;
        }
        if (!distribution_ok(var.likelihood_h)) violate(where + "distribution not normalized (given H)");
        if (!distribution_ok(var.likelihood_not_h)) violate(where + "distribution not normalized (given not H)");
        for (std::size_t k = 0; k < var.outcomes.size(); ++k) {
            if (var.likelihood_h[k] == 0.0 && var.likelihood_not_h[k] == 0.0)
                violate(where + "outcome '" + var.outcomes[k] + "' has zero likelihood under both hypotheses");
        }
        if (!(var.cost >= 0.0 && std::isfinite(var.cost))) violate(where + "cost must be nonnegative");
    }

    std::set<std::string> grouped;
    for (std::size_t g = 0; g < model.groups.size(); ++g) {
        const auto& group = model.groups[g];
        const std::string where = "group " + std::to_string(g) + ": ";
        if (group.member_ids.empty()) {
            violate(where + "has no members");
            continue;
        }
        std::vector<const EvidenceVariable*> members;
        bool members_ok = true;
        for (const auto& id : group.member_ids) {
            const auto* v = model.find(id);
            if (!v) {
                violate(where + "unknown member '" + id + "'");
                members_ok = false;
            } else if (!grouped.insert(id).second) {
                violate(where + "variable '" + id + "' belongs to more than one group");
                members_ok = false;
            } else if (v->likelihood_h.size() != v->outcomes.size() ||
                       v->likelihood_not_h.size() != v->outcomes.size()) {
                members_ok = false;
            }
            members.push_back(v);
        }
        if (!members_ok) continue;

        std::vector<std::size_t> radices;
        for (const auto* v : members) radices.push_back(v->outcome_count());
        const std::size_t size = std::accumulate(radices.begin(), radices.end(), std::size_t{1}, std::multiplies<>());
        if (group.joint_h.size() != size || group.joint_not_h.size() != size) {
            violate(where + "joint table size does not match member outcome counts");
            continue;
        }
        if (!distribution_ok(group.joint_h)) violate(where + "joint distribution not normalized (given H)");
        if (!distribution_ok(group.joint_not_h)) violate(where + "joint distribution not normalized (given not H)");

        const auto strides = strides_for(radices);
        for (std::size_t m = 0; m < members.size(); ++m) {
            std::vector<double> marg_h(radices[m], 0.0), marg_n(radices[m], 0.0);
            for (std::size_t t = 0; t < size; ++t) {
                const std::size_t k = (t / strides[m]) % radices[m];
                marg_h[k] += group.joint_h[t];
                marg_n[k] += group.joint_not_h[t];
            }
            for (std::size_t k = 0; k < radices[m]; ++k) {
                if (std::abs(marg_h[k] - members[m]->likelihood_h[k]) > kGroupMarginalTolerance ||
                    std::abs(marg_n[k] - members[m]->likelihood_not_h[k]) > kGroupMarginalTolerance) {
                    violate(where + "joint marginal does not match likelihoods of '" + members[m]->id + "'");
                    break;
                }
            }
        }
    }

    for (const auto& sc : model.set_costs) {
        if (sc.members.empty()) violate("set cost override with no members");
        std::set<std::string> uniq(sc.members.begin(), sc.members.end());
        if (uniq.size() != sc.members.size()) violate("set cost override lists a member twice");
        for (const auto& id : sc.members)
            if (!model.find(id)) violate("set cost override names unknown variable '" + id + "'");
        if (!(sc.cost >= 0.0 && std::isfinite(sc.cost))) violate("set cost must be nonnegative");
    }
    return report;
}

void require_valid(const DiagnosisModel& model) {
    auto report = validate_model(model);
    if (report.ok()) return;
    std::ostringstream os;
    os << "invalid model:";
    for (const auto& v : report.violations) os << "\n  " << v;
    throw Error(ErrorCode::invalid_model, os.str());
}

bool exceeds(double log_value, double log_threshold) noexcept {
    if (std::isnan(log_value) || std::isnan(log_threshold)) return false;
    if (std::isinf(log_value) || std::isinf(log_threshold)) return log_value > log_threshold;
    return log_value - log_threshold > kTieTolerance;
}

double log_odds_from_probability(double p) noexcept {
    if (p <= 0.0) return -kInf;
    if (p >= 1.0) return kInf;
    return std::log(p) - std::log1p(-p);
}

double probability_from_log_odds(double log_odds) noexcept {
    if (log_odds == kInf) return 1.0;
    if (log_odds == -kInf) return 0.0;
    if (log_odds >= 0.0) return 1.0 / (1.0 + std::exp(-log_odds));
    const double e = std::exp(log_odds);
    return e / (1.0 + e);
}

double weight_of_outcome(double likelihood_h, double likelihood_not_h) noexcept {
    if (likelihood_h > 0.0 && likelihood_not_h > 0.0) return std::log(likelihood_h) - std::log(likelihood_not_h);
    if (likelihood_h > 0.0) return kInf;
    if (likelihood_not_h > 0.0) return -kInf;
    return 0.0;  // impossible outcome
}

WeightOfEvidence weight_of_evidence(const EvidenceVariable& variable) {
    WeightOfEvidence w;
    w.weights.reserve(variable.outcome_count());
    for (std::size_t k = 0; k < variable.outcome_count(); ++k)
        w.weights.push_back(weight_of_outcome(variable.likelihood_h[k], variable.likelihood_not_h[k]));
    return w;
}

EvidenceState propagate(const DiagnosisModel& model, const Observations& observations) {
    require_valid(model);

    std::vector<std::size_t> observed_index(model.evidence.size(), SIZE_MAX);
    for (const auto& [id, label] : observations) {
        const auto& var = model.at(id);
        auto k = var.outcome_index(label);
        if (!k) throw Error(ErrorCode::unknown_outcome, "variable '" + id + "' has no outcome '" + label + "'");
        observed_index[static_cast<std::size_t>(&var - model.evidence.data())] = *k;
    }
    auto index_of = [&](const std::string& id) {
        return static_cast<std::size_t>(&model.at(id) - model.evidence.data());
    };

    EvidenceState state;
    state.utility = model.utility;
    state.set_costs = model.set_costs;
    state.log_odds = log_odds_from_probability(model.prior);

    std::vector<bool> grouped(model.evidence.size(), false);
    std::map<std::string, EvidenceVariable> conditioned;

    for (const auto& group : model.groups) {
        std::vector<std::size_t> idx, radices;
        for (const auto& id : group.member_ids) {
            idx.push_back(index_of(id));
            grouped[idx.back()] = true;
            radices.push_back(model.evidence[idx.back()].outcome_count());
        }
        const auto strides = strides_for(radices);
        const std::size_t size = group.joint_h.size();

        std::vector<std::size_t> free_members;
        for (std::size_t m = 0; m < idx.size(); ++m)
            if (observed_index[idx[m]] == SIZE_MAX) free_members.push_back(m);
        if (free_members.size() == idx.size()) {
            state.groups.push_back(group);
            continue;
        }

        std::vector<std::size_t> free_radices;
        for (auto m : free_members) free_radices.push_back(radices[m]);
        const auto free_strides = strides_for(free_radices);
        const std::size_t free_size = std::accumulate(free_radices.begin(), free_radices.end(),
                                                      std::size_t{1}, std::multiplies<>());

        std::vector<double> cond_h(free_size, 0.0), cond_n(free_size, 0.0);
        std::vector<double> marg_h(free_size, 0.0), marg_n(free_size, 0.0);
        double mass_h = 0.0, mass_n = 0.0;
        for (std::size_t t = 0; t < size; ++t) {
            bool consistent = true;
            std::size_t ft = 0;
            for (std::size_t m = 0, f = 0; m < idx.size(); ++m) {
                const std::size_t k = (t / strides[m]) % radices[m];
                if (observed_index[idx[m]] == SIZE_MAX) {
                    ft += k * free_strides[f++];
                } else if (observed_index[idx[m]] != k) {
                    consistent = false;
                }
            }
            marg_h[ft] += group.joint_h[t];
            marg_n[ft] += group.joint_not_h[t];
            if (consistent) {
                cond_h[ft] += group.joint_h[t];
                cond_n[ft] += group.joint_not_h[t];
                mass_h += group.joint_h[t];
                mass_n += group.joint_not_h[t];
            }
        }
        if (mass_h == 0.0 && mass_n == 0.0)
            throw Error(ErrorCode::impossible_evidence, "observations have zero probability under both hypotheses");
        state.log_odds += weight_of_outcome(mass_h, mass_n);
        if (free_members.empty()) continue;

        // A hypothesis ruled out by the observations keeps its unconditioned
        // marginal; it carries zero posterior weight.
        if (mass_h > 0.0) {
            for (auto& x : cond_h) x /= mass_h;
        } else {
            cond_h = marg_h;
        }
        if (mass_n > 0.0) {
            for (auto& x : cond_n) x /= mass_n;
        } else {
            cond_n = marg_n;
        }

        EvidenceGroup reduced;
        for (std::size_t f = 0; f < free_members.size(); ++f) {
            const auto& base = model.evidence[idx[free_members[f]]];
            EvidenceVariable v = base;
            std::fill(v.likelihood_h.begin(), v.likelihood_h.end(), 0.0);
            std::fill(v.likelihood_not_h.begin(), v.likelihood_not_h.end(), 0.0);
            for (std::size_t ft = 0; ft < free_size; ++ft) {
                const std::size_t k = (ft / free_strides[f]) % free_radices[f];
                v.likelihood_h[k] += cond_h[ft];
                v.likelihood_not_h[k] += cond_n[ft];
            }
            reduced.member_ids.push_back(base.id);
            conditioned.emplace(base.id, std::move(v));
        }
        reduced.joint_h = std::move(cond_h);
        reduced.joint_not_h = std::move(cond_n);
        state.groups.push_back(std::move(reduced));
    }

    for (std::size_t i = 0; i < model.evidence.size(); ++i) {
        const auto& var = model.evidence[i];
        if (observed_index[i] != SIZE_MAX) {
            if (!grouped[i]) {
                const std::size_t k = observed_index[i];
                state.log_odds += weight_of_outcome(var.likelihood_h[k], var.likelihood_not_h[k]);
            }
            continue;
        }
        auto it = conditioned.find(var.id);
        state.remaining.push_back(it != conditioned.end() ? it->second : var);
    }
    if (std::isnan(state.log_odds))
        throw Error(ErrorCode::impossible_evidence, "observations have zero probability under both hypotheses");
    return state;
}

double posterior_log_odds(const DiagnosisModel& model, const Observations& observations) {
    return propagate(model, observations).log_odds;
}

double posterior_odds(const DiagnosisModel& model, const Observations& observations) {
    return std::exp(posterior_log_odds(model, observations));
}

ThresholdSummary threshold(const DiagnosisModel& model, const Observations& observations) {
    const auto state = propagate(model, observations);
    return {state.utility.p_star(), state.w_star()};
}

Decision act_decision_log(double log_odds, double p_star) {
    return exceeds(log_odds, log_odds_from_probability(p_star)) ? Decision::act : Decision::dont_act;
}

Decision act_decision(double odds, double p_star) {
    if (odds < 0.0 || std::isnan(odds)) throw Error(ErrorCode::invalid_argument, "odds must be nonnegative");
    return act_decision_log(std::log(odds), p_star);
}

double set_cost(const DiagnosisModel& model, std::span<const std::string> ids) {
    return lookup_set_cost(model.set_costs, ids, [&](const std::string& id) { return model.at(id).cost; });
}

const EvidenceVariable* EvidenceState::find(const std::string& id) const {
    for (const auto& v : remaining)
        if (v.id == id) return &v;
    return nullptr;
}

double EvidenceState::set_cost(std::span<const std::string> ids) const {
    return lookup_set_cost(set_costs, ids, [&](const std::string& id) {
        const auto* v = find(id);
        if (!v) throw Error(ErrorCode::unknown_variable, "unknown or observed variable '" + id + "'");
        return v->cost;
    });
}

double EvidenceState::w_star() const {
    return log_odds_from_probability(utility.p_star()) - log_odds;
}

} // namespace voi
