#include "voi/subset.hpp"

#include "voi/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <set>

namespace voi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Per-factor outcome data flattened for the enumeration loops.
struct FactorTable {
    std::vector<double> lik_h, lik_n, weight;
};

std::vector<FactorTable> tables_for(std::span<const EvidenceVariable> factors) {
    std::vector<FactorTable> tables;
    tables.reserve(factors.size());
    for (const auto& f : factors) {
        FactorTable t;
        for (std::size_t k = 0; k < f.outcome_count(); ++k) {
            if (f.likelihood_h[k] == 0.0 && f.likelihood_not_h[k] == 0.0) continue;
            t.lik_h.push_back(f.likelihood_h[k]);
            t.lik_n.push_back(f.likelihood_not_h[k]);
            t.weight.push_back(weight_of_outcome(f.likelihood_h[k], f.likelihood_not_h[k]));
        }
        tables.push_back(std::move(t));
    }
    return tables;
}

void accumulate_tail(const std::vector<FactorTable>& tables, std::size_t depth, double p_h, double p_n,
                     double weight, double w_star, TailPair& tail) {
    if (depth == tables.size()) {
        if (exceeds(weight, w_star)) {
            tail.h += p_h;
            tail.not_h += p_n;
        }
        return;
    }
    const auto& t = tables[depth];
    for (std::size_t k = 0; k < t.weight.size(); ++k) {
        const double next_h = p_h * t.lik_h[k];
        const double next_n = p_n * t.lik_n[k];
        if (next_h == 0.0 && next_n == 0.0) continue;
        accumulate_tail(tables, depth + 1, next_h, next_n, weight + t.weight[k], w_star, tail);
    }
}

void enumerate_branches(const std::vector<FactorTable>& tables, std::size_t depth, double p, double weight,
                        bool given_h, std::vector<DegenerateBranch>& out) {
    if (depth == tables.size()) {
        out.push_back({weight, p});
        return;
    }
    const auto& t = tables[depth];
    for (std::size_t k = 0; k < t.weight.size(); ++k) {
        const double lik = given_h ? t.lik_h[k] : t.lik_n[k];
        enumerate_branches(tables, depth + 1, p * lik, weight + t.weight[k], given_h, out);
    }
}

void check_subset(const DiagnosisModel& model, const Observations& observations,
                  std::span<const std::string> subset) {
    for (const auto& id : subset) {
        model.at(id);
        if (observations.contains(id))
            throw Error(ErrorCode::already_observed, "variable '" + id + "' is already observed");
    }
}

std::string join(std::span<const std::string> parts, char sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

} // namespace

WeightMoments weight_moments(const EvidenceVariable& variable) {
    const auto w = weight_of_evidence(variable);
    WeightMoments m;

    auto branch = [&](const std::vector<double>& lik, double& ev, double& var, bool& degenerate) {
        double mean = 0.0;
        for (std::size_t k = 0; k < lik.size(); ++k) {
            if (lik[k] == 0.0) continue;
            if (std::isinf(w.weights[k])) {
                degenerate = true;
                ev = w.weights[k];
                var = kInf;
                return;
            }
            mean += lik[k] * w.weights[k];
        }
        double spread = 0.0;
        for (std::size_t k = 0; k < lik.size(); ++k) {
            if (lik[k] == 0.0) continue;
            const double d = w.weights[k] - mean;
            spread += lik[k] * d * d;
        }
        ev = mean;
        var = spread;
    };
    branch(variable.likelihood_h, m.ev_h, m.var_h, m.degenerate_h);
    branch(variable.likelihood_not_h, m.ev_not_h, m.var_not_h, m.degenerate_not_h);
    return m;
}

AggregateWeight aggregate_moments(std::span<const WeightMoments> moments) {
    AggregateWeight agg;
    for (const auto& m : moments) {
        if (m.degenerate())
            throw Error(ErrorCode::invalid_argument, "degenerate weight moments must be split out before aggregation");
        agg.mu_h += m.ev_h;
        agg.var_h += m.var_h;
        agg.mu_not_h += m.ev_not_h;
        agg.var_not_h += m.var_not_h;
    }
    return agg;
}

double standard_normal_sf(double z) {
    return 0.5 * std::erfc(z / std::numbers::sqrt2);
}

double standard_normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double normal_tail(double mu, double variance, double w_star) {
    if (!(variance >= 0.0)) throw Error(ErrorCode::invalid_argument, "variance must be nonnegative");
    if (w_star == -kInf) return 1.0;
    if (w_star == kInf) return 0.0;
    if (variance == 0.0 || std::isinf(mu)) return exceeds(mu, w_star) ? 1.0 : 0.0;
    return standard_normal_sf((w_star - mu) / std::sqrt(variance));
}

EvidenceVariable cluster_group(const EvidenceGroup& group, std::span<const EvidenceVariable> members,
                               std::span<const std::string> subset) {
    if (members.size() != group.member_ids.size())
        throw Error(ErrorCode::invalid_argument, "cluster_group: member list does not match the group");

    std::vector<std::size_t> radices;
    std::vector<std::size_t> picked;
    for (std::size_t m = 0; m < members.size(); ++m) {
        radices.push_back(members[m].outcome_count());
        if (std::find(subset.begin(), subset.end(), members[m].id) != subset.end()) picked.push_back(m);
    }
    if (picked.empty()) throw Error(ErrorCode::invalid_argument, "cluster_group: subset does not intersect the group");

    const std::size_t size = std::accumulate(radices.begin(), radices.end(), std::size_t{1}, std::multiplies<>());
    if (group.joint_h.size() != size || group.joint_not_h.size() != size)
        throw Error(ErrorCode::invalid_model, "cluster_group: joint table size does not match member outcome counts");

    std::vector<std::size_t> strides(radices.size(), 1);
    for (std::size_t i = radices.size(); i-- > 1;) strides[i - 1] = strides[i] * radices[i];

    std::vector<std::size_t> picked_radices;
    for (auto m : picked) picked_radices.push_back(radices[m]);
    std::vector<std::size_t> picked_strides(picked.size(), 1);
    for (std::size_t i = picked.size(); i-- > 1;) picked_strides[i - 1] = picked_strides[i] * picked_radices[i];
    const std::size_t out_size = picked_strides.empty() ? 1 : picked_strides[0] * picked_radices[0];

    EvidenceVariable out;
    out.likelihood_h.assign(out_size, 0.0);
    out.likelihood_not_h.assign(out_size, 0.0);
    for (std::size_t t = 0; t < size; ++t) {
        std::size_t o = 0;
        for (std::size_t i = 0; i < picked.size(); ++i)
            o += ((t / strides[picked[i]]) % radices[picked[i]]) * picked_strides[i];
        out.likelihood_h[o] += group.joint_h[t];
        out.likelihood_not_h[o] += group.joint_not_h[t];
    }

    std::vector<std::string> ids;
    for (auto m : picked) {
        ids.push_back(members[m].id);
        out.cost += members[m].cost;
    }
    out.id = join(ids, '+');
    out.outcomes.resize(out_size);
    for (std::size_t o = 0; o < out_size; ++o) {
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < picked.size(); ++i)
            labels.push_back(members[picked[i]].outcomes[(o / picked_strides[i]) % picked_radices[i]]);
        out.outcomes[o] = join(labels, ',');
    }
    return out;
}

std::vector<EvidenceVariable> independent_factors(const EvidenceState& state, std::span<const std::string> subset) {
    std::set<std::string> seen;
    for (const auto& id : subset) {
        if (!state.find(id)) throw Error(ErrorCode::unknown_variable, "unknown or observed variable '" + id + "'");
        if (!seen.insert(id).second) throw Error(ErrorCode::invalid_argument, "variable '" + id + "' listed twice");
    }

    std::vector<EvidenceVariable> factors;
    std::vector<bool> group_done(state.groups.size(), false);
    for (const auto& id : subset) {
        std::size_t g = 0;
        for (; g < state.groups.size(); ++g) {
            const auto& ids = state.groups[g].member_ids;
            if (std::find(ids.begin(), ids.end(), id) != ids.end()) break;
        }
        if (g == state.groups.size()) {
            factors.push_back(*state.find(id));
            continue;
        }
        if (group_done[g]) continue;
        group_done[g] = true;
        std::vector<EvidenceVariable> members;
        for (const auto& member : state.groups[g].member_ids) members.push_back(*state.find(member));
        factors.push_back(cluster_group(state.groups[g], members, subset));
    }
    return factors;
}

std::size_t instantiation_count(std::span<const EvidenceVariable> factors) {
    std::size_t count = 1;
    for (const auto& f : factors) {
        const std::size_t k = f.outcome_count();
        if (k != 0 && count > std::numeric_limits<std::size_t>::max() / k) return std::numeric_limits<std::size_t>::max();
        count *= k;
    }
    return count;
}

bool enumeration_affordable(std::span<const EvidenceVariable> factors, const SubsetLimits& limits) {
    if (limits.enumeration_limit < 0) return false;
    if (limits.enumeration_limit >= 63) return true;
    return instantiation_count(factors) <= (std::size_t{1} << limits.enumeration_limit);
}

TailPair exact_weight_tail(std::span<const EvidenceVariable> factors, double w_star) {
    TailPair tail;
    accumulate_tail(tables_for(factors), 0, 1.0, 1.0, 0.0, w_star, tail);
    return tail;
}

DegenerateSplit degenerate_split(std::span<const EvidenceVariable> factors, const SubsetLimits& limits) {
    DegenerateSplit split;
    std::vector<EvidenceVariable> degenerate;
    for (const auto& f : factors) {
        if (weight_moments(f).degenerate()) {
            split.degenerate.push_back(f.id);
            degenerate.push_back(f);
        } else {
            split.residual.push_back(f.id);
        }
    }
    if (static_cast<int>(degenerate.size()) > limits.degenerate_limit) {
        throw Error(ErrorCode::limit_exceeded, std::to_string(degenerate.size()) +
                                                   " degenerate variables exceed the limit of " +
                                                   std::to_string(limits.degenerate_limit));
    }
    const auto tables = tables_for(degenerate);
    enumerate_branches(tables, 0, 1.0, 0.0, true, split.given_h);
    enumerate_branches(tables, 0, 1.0, 0.0, false, split.given_not_h);
    return split;
}

DegenerateSplit degenerate_split(const DiagnosisModel& model, const Observations& observations,
                                 std::span<const std::string> subset, const SubsetLimits& limits) {
    check_subset(model, observations, subset);
    const auto state = propagate(model, observations);
    return degenerate_split(independent_factors(state, subset), limits);
}

double combine_branches(std::span<const DegenerateBranch> branches,
                        const std::function<double(double)>& residual_tail) {
    double tail = 0.0;
    for (const auto& b : branches) {
        if (b.probability == 0.0) continue;
        if (b.fixed_weight == kInf) {
            tail += b.probability;
        } else if (b.fixed_weight != -kInf) {
            tail += b.probability * residual_tail(b.fixed_weight);
        }
    }
    return tail;
}

VoiResult exact_subset_voi(const EvidenceState& state, std::span<const std::string> subset,
                           const SubsetLimits& limits) {
    const auto factors = independent_factors(state, subset);
    if (!enumeration_affordable(factors, limits)) {
        throw Error(ErrorCode::limit_exceeded, "exact enumeration of " + std::to_string(subset.size()) +
                                                   " variables exceeds 2^" +
                                                   std::to_string(limits.enumeration_limit) + " instantiations");
    }
    const auto tail = exact_weight_tail(factors, state.w_star());
    auto r = make_voi_result(state.utility.risk, eu_act_now(state), eu_from_tails(state, tail.h, tail.not_h),
                             state.set_cost(subset), VoiMethod::exact);
    r.tail_h = tail.h;
    r.tail_not_h = tail.not_h;
    return r;
}

VoiResult exact_subset_voi(const DiagnosisModel& model, const Observations& observations,
                           std::span<const std::string> subset, const SubsetLimits& limits) {
    check_subset(model, observations, subset);
    return exact_subset_voi(propagate(model, observations), subset, limits);
}

VoiResult clt_subset_voi(const EvidenceState& state, std::span<const std::string> subset,
                         const SubsetLimits& limits) {
    const auto factors = independent_factors(state, subset);
    if (factors.empty()) throw Error(ErrorCode::invalid_argument, "normal approximation needs a nonempty evidence set");

    const auto split = degenerate_split(factors, limits);
    std::vector<WeightMoments> moments;
    std::vector<std::string> residual_ids;
    for (const auto& f : factors) {
        auto m = weight_moments(f);
        if (m.degenerate()) continue;
        moments.push_back(m);
        residual_ids.push_back(f.id);
    }
    const auto agg = aggregate_moments(moments);
    const double w_star = state.w_star();

    TailPair tail;
    tail.h = combine_branches(split.given_h, [&](double fixed) { return normal_tail(agg.mu_h + fixed, agg.var_h, w_star); });
    tail.not_h = combine_branches(split.given_not_h, [&](double fixed) {
        return normal_tail(agg.mu_not_h + fixed, agg.var_not_h, w_star);
    });

    auto r = make_voi_result(state.utility.risk, eu_act_now(state), eu_from_tails(state, tail.h, tail.not_h),
                             state.set_cost(subset), VoiMethod::clt);
    r.tail_h = tail.h;
    r.tail_not_h = tail.not_h;

    if (static_cast<int>(moments.size()) < limits.clt_min_size) {
        r.warnings.push_back("normal approximation over " + std::to_string(moments.size()) +
                             " variables is below the validity floor of " + std::to_string(limits.clt_min_size));
    }
    for (std::size_t i = 0; i < moments.size(); ++i) {
        const bool dominant_h = agg.var_h > 0.0 && moments[i].var_h > limits.clt_max_variance_share * agg.var_h;
        const bool dominant_n =
            agg.var_not_h > 0.0 && moments[i].var_not_h > limits.clt_max_variance_share * agg.var_not_h;
        if (dominant_h || dominant_n) {
            r.warnings.push_back("variable '" + residual_ids[i] + "' contributes more than " +
                                 std::to_string(static_cast<int>(limits.clt_max_variance_share * 100)) +
                                 "% of the weight variance");
        }
    }
    return r;
}

VoiResult clt_subset_voi(const DiagnosisModel& model, const Observations& observations,
                         std::span<const std::string> subset, const SubsetLimits& limits) {
    check_subset(model, observations, subset);
    return clt_subset_voi(propagate(model, observations), subset, limits);
}

} // namespace voi
