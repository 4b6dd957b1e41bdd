#pragma once

// Value of information for a set of evidence: exact enumeration of all
// instantiations, and the central-limit approximation that models the total
// weight of evidence as normal under each hypothesis.

#include "voi/model.hpp"
#include "voi/myopic.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace voi {

struct SubsetLimits {
    int enumeration_limit = 20;   // max instantiations = 2^enumeration_limit
    int degenerate_limit = 10;    // max degenerate variables split by enumeration
    int clt_min_size = 10;        // below this the normal approximation is flagged
    double clt_max_variance_share = 0.5;
};

/// Mean and variance of a variable's weight of evidence under H and not H.
/// An outcome with infinite weight and positive probability under a
/// hypothesis makes that branch degenerate; its mean and variance are then
/// reported as infinite and it must be handled by degenerate_split.
struct WeightMoments {
    double ev_h = 0.0;
    double var_h = 0.0;
    double ev_not_h = 0.0;
    double var_not_h = 0.0;
    bool degenerate_h = false;
    bool degenerate_not_h = false;

    bool degenerate() const noexcept { return degenerate_h || degenerate_not_h; }
};

struct AggregateWeight {
    double mu_h = 0.0;
    double var_h = 0.0;
    double mu_not_h = 0.0;
    double var_not_h = 0.0;
};

struct TailPair {
    double h = 0.0;      // p(W > W* | H)
    double not_h = 0.0;  // p(W > W* | not H)
};

struct DegenerateBranch {
    double fixed_weight = 0.0;  // extended real
    double probability = 1.0;
};

struct DegenerateSplit {
    std::vector<std::string> residual;  // ids of non-degenerate factors
    std::vector<std::string> degenerate;
    std::vector<DegenerateBranch> given_h;
    std::vector<DegenerateBranch> given_not_h;
};

WeightMoments weight_moments(const EvidenceVariable& variable);

// Throws invalid_argument if any input is degenerate.
AggregateWeight aggregate_moments(std::span<const WeightMoments> moments);

// p(W > w_star) for W ~ N(mu, variance); variance 0 is a point mass.
double normal_tail(double mu, double variance, double w_star);

// Upper tail of the standard normal, 1 - Phi(z).
double standard_normal_sf(double z);
double standard_normal_cdf(double z);

// Collapses each dependency group's members in S into one multi-valued
// variable whose likelihoods are the group's joint tables with members
// outside S summed out. Outcome labels join member labels with ','.
EvidenceVariable cluster_group(const EvidenceGroup& group, std::span<const EvidenceVariable> members,
                               std::span<const std::string> subset);

// S rewritten as variables that are conditionally independent given H:
// ungrouped members stay as they are, group members are clustered.
std::vector<EvidenceVariable> independent_factors(const EvidenceState& state, std::span<const std::string> subset);

// Exact p(W > w_star | H) and p(W > w_star | not H) by enumerating every
// outcome tuple of the factors.
TailPair exact_weight_tail(std::span<const EvidenceVariable> factors, double w_star);

// Enumerates every outcome combination of the degenerate factors under each
// hypothesis; probabilities multiply across factors. Combinations impossible
// under a hypothesis stay in its list with probability zero.
DegenerateSplit degenerate_split(std::span<const EvidenceVariable> factors, const SubsetLimits& limits = {});
DegenerateSplit degenerate_split(const DiagnosisModel& model, const Observations& observations,
                                 std::span<const std::string> subset, const SubsetLimits& limits = {});

// Sum over branches of probability * tail, where a +inf fixed weight
// contributes tail 1 and -inf contributes 0; finite branches call
// residual_tail(fixed_weight).
double combine_branches(std::span<const DegenerateBranch> branches,
                        const std::function<double(double)>& residual_tail);

VoiResult exact_subset_voi(const EvidenceState& state, std::span<const std::string> subset,
                           const SubsetLimits& limits = {});
VoiResult exact_subset_voi(const DiagnosisModel& model, const Observations& observations,
                           std::span<const std::string> subset, const SubsetLimits& limits = {});

VoiResult clt_subset_voi(const EvidenceState& state, std::span<const std::string> subset,
                         const SubsetLimits& limits = {});
VoiResult clt_subset_voi(const DiagnosisModel& model, const Observations& observations,
                         std::span<const std::string> subset, const SubsetLimits& limits = {});

// Number of outcome tuples of the factors, saturating at SIZE_MAX.
std::size_t instantiation_count(std::span<const EvidenceVariable> factors);
bool enumeration_affordable(std::span<const EvidenceVariable> factors, const SubsetLimits& limits);

} // namespace voi
