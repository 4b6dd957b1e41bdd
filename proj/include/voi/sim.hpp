#pragma once

// Paired Monte Carlo comparison of information-gathering policies.
//
// Random numbers: each case uses its own std::mt19937_64 seeded with
// splitmix64(seed ^ splitmix64(index)), and uniforms are the top 53 bits of
// a draw scaled to [0, 1). Cases are therefore a pure function of
// (seed, index) and independent of evaluation order.

#include "voi/model.hpp"
#include "voi/planner.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace voi {

enum class Truth { h, not_h };

struct SampledCase {
    Truth truth = Truth::h;
    Observations outcomes;  // every variable's outcome
};

SampledCase sample_case(const DiagnosisModel& model, std::uint64_t seed, std::uint64_t index);

struct PolicyStats {
    Policy policy = Policy::act_now;
    std::size_t trials = 0;
    double mean_net_value = 0.0;
    double sd = 0.0;  // sample standard deviation
    double standard_error = 0.0;
    double mean_observations = 0.0;
    double mean_observation_cost = 0.0;
};

struct SimulationReport {
    std::uint64_t seed = 0;
    std::string model_digest;
    std::size_t trials = 0;
    std::vector<PolicyStats> policies;
    // net_values[p][t]: realized value of policy p on case t.
    std::vector<std::vector<double>> net_values;
};

struct PairedDifference {
    double mean = 0.0;            // mean of (a - b)
    double standard_error = 0.0;  // of the paired differences
};

PairedDifference paired_difference(const SimulationReport& report, std::size_t a, std::size_t b);

// Value of the realized outcome for the given truth and decision.
double outcome_value(const UtilityModel& utility, Truth truth, Decision action);

SimulationReport simulate(const DiagnosisModel& model, const std::vector<Policy>& policies, std::size_t trials,
                          std::uint64_t seed, const PlannerSettings& settings = {});

// FNV-1a over the canonical model file text.
std::string model_digest(const DiagnosisModel& model);

} // namespace voi
