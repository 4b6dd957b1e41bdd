#include "voi/sim.hpp"

#include "voi/error.hpp"
#include "voi/model_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

namespace voi {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

class CaseRng {
public:
    CaseRng(std::uint64_t seed, std::uint64_t index) : engine_(splitmix64(seed ^ splitmix64(index))) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::size_t categorical(std::span<const double> p) {
        const double u = uniform();
        double cumulative = 0.0;
        std::size_t last = 0;
        for (std::size_t k = 0; k < p.size(); ++k) {
            if (p[k] <= 0.0) continue;
            cumulative += p[k];
            last = k;
            if (u < cumulative) return k;
        }
        return last;  // rounding slack in the cumulative sum
    }

private:
    std::mt19937_64 engine_;
};

} // namespace

SampledCase sample_case(const DiagnosisModel& model, std::uint64_t seed, std::uint64_t index) {
    CaseRng rng(seed, index);
    SampledCase c;
    c.truth = rng.uniform() < model.prior ? Truth::h : Truth::not_h;
    const bool h = c.truth == Truth::h;

    for (const auto& var : model.evidence) {
        if (c.outcomes.contains(var.id)) continue;
        const EvidenceGroup* group = nullptr;
        for (const auto& g : model.groups) {
            if (std::find(g.member_ids.begin(), g.member_ids.end(), var.id) != g.member_ids.end()) {
                group = &g;
                break;
            }
        }
        if (!group) {
            const std::size_t k = rng.categorical(h ? var.likelihood_h : var.likelihood_not_h);
            c.outcomes[var.id] = var.outcomes[k];
            continue;
        }
        std::size_t t = rng.categorical(h ? group->joint_h : group->joint_not_h);
        // Decode the row-major tuple index, last member fastest.
        for (std::size_t m = group->member_ids.size(); m-- > 0;) {
            const auto& member = model.at(group->member_ids[m]);
            c.outcomes[member.id] = member.outcomes[t % member.outcome_count()];
            t /= member.outcome_count();
        }
    }
    return c;
}

double outcome_value(const UtilityModel& utility, Truth truth, Decision action) {
    if (truth == Truth::h) return action == Decision::act ? utility.value_h_d : utility.value_h_not_d;
    return action == Decision::act ? utility.value_not_h_d : utility.value_not_h_not_d;
}

SimulationReport simulate(const DiagnosisModel& model, const std::vector<Policy>& policies, std::size_t trials,
                          std::uint64_t seed, const PlannerSettings& settings) {
    if (trials < 1) throw Error(ErrorCode::invalid_argument, "trials must be at least 1");
    if (policies.empty()) throw Error(ErrorCode::invalid_argument, "at least one policy is required");
    require_valid(model);

    SimulationReport report;
    report.seed = seed;
    report.model_digest = model_digest(model);
    report.trials = trials;
    report.net_values.assign(policies.size(), std::vector<double>(trials, 0.0));
    std::vector<double> observations(policies.size(), 0.0), costs(policies.size(), 0.0);

    for (std::size_t t = 0; t < trials; ++t) {
        const auto c = sample_case(model, seed, t);
        const OutcomeOracle oracle = [&c](const std::string& id) { return c.outcomes.at(id); };
        for (std::size_t p = 0; p < policies.size(); ++p) {
            const auto trace = run_policy(model, policies[p], oracle, settings);
            report.net_values[p][t] = outcome_value(model.utility, c.truth, trace.action) - trace.observation_cost;
            observations[p] += static_cast<double>(trace.steps.size());
            costs[p] += trace.observation_cost;
        }
    }

    const double n = static_cast<double>(trials);
    for (std::size_t p = 0; p < policies.size(); ++p) {
        const auto& v = report.net_values[p];
        double sum = 0.0;
        for (double x : v) sum += x;
        const double mean = sum / n;
        double ss = 0.0;
        for (double x : v) ss += (x - mean) * (x - mean);
        PolicyStats s;
        s.policy = policies[p];
        s.trials = trials;
        s.mean_net_value = mean;
        s.sd = trials > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
        s.standard_error = s.sd / std::sqrt(n);
        s.mean_observations = observations[p] / n;
        s.mean_observation_cost = costs[p] / n;
        report.policies.push_back(s);
    }
    return report;
}

PairedDifference paired_difference(const SimulationReport& report, std::size_t a, std::size_t b) {
    const auto& va = report.net_values.at(a);
    const auto& vb = report.net_values.at(b);
    const double n = static_cast<double>(va.size());
    double sum = 0.0;
    for (std::size_t t = 0; t < va.size(); ++t) sum += va[t] - vb[t];
    const double mean = sum / n;
    double ss = 0.0;
    for (std::size_t t = 0; t < va.size(); ++t) {
        const double d = va[t] - vb[t] - mean;
        ss += d * d;
    }
    const double sd = va.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    return {mean, sd / std::sqrt(n)};
}

std::string model_digest(const DiagnosisModel& model) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char ch : write_model(model)) {
        hash ^= ch;
        hash *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

} // namespace voi
