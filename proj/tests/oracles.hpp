#pragma once

// Test-only reference computations. Nothing here calls into the library's
// evaluation paths; they rebuild the quantities from first principles so the
// comparisons in the suites are independent checks.

#include "voi/model.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace voi::testing {

struct RollbackResult {
    double eu_phi = 0.0;
    double eu_obs = 0.0;
    double vi = 0.0;
};

inline double oracle_utility(const RiskModel& risk, double v) {
    return risk.kind == RiskModel::Kind::linear ? v : -std::exp(-v / risk.tolerance);
}

inline double oracle_inverse(const RiskModel& risk, double u) {
    return risk.kind == RiskModel::Kind::linear ? u : -risk.tolerance * std::log(-u);
}

// Decision-tree rollback for independent variables: at every leaf of the
// observation tree pick the action with the larger joint expected utility,
// then sum. Works directly in probabilities, never in weights or odds.
inline RollbackResult rollback(double p_h, const UtilityModel& u, const std::vector<EvidenceVariable>& vars) {
    const double uhd = oracle_utility(u.risk, u.value_h_d);
    const double uhn = oracle_utility(u.risk, u.value_h_not_d);
    const double und = oracle_utility(u.risk, u.value_not_h_d);
    const double unn = oracle_utility(u.risk, u.value_not_h_not_d);

    auto best = [&](double joint_h, double joint_n) {
        return std::max(joint_h * uhd + joint_n * und, joint_h * uhn + joint_n * unn);
    };

    RollbackResult r;
    r.eu_phi = best(p_h, 1.0 - p_h);

    std::vector<std::size_t> idx(vars.size(), 0);
    double total = 0.0;
    while (true) {
        double jh = p_h, jn = 1.0 - p_h;
        for (std::size_t i = 0; i < vars.size(); ++i) {
            jh *= vars[i].likelihood_h[idx[i]];
            jn *= vars[i].likelihood_not_h[idx[i]];
        }
        total += best(jh, jn);
        std::size_t i = 0;
        for (; i < vars.size(); ++i) {
            if (++idx[i] < vars[i].outcome_count()) break;
            idx[i] = 0;
        }
        if (i == vars.size()) break;
    }
    r.eu_obs = total;
    r.vi = oracle_inverse(u.risk, r.eu_obs) - oracle_inverse(u.risk, r.eu_phi);
    return r;
}

// p(H | instantiation) > p* evaluated from per-instantiation likelihood
// ratios: returns the mass of {W > W*} under H and under not H.
struct OracleTails {
    double h = 0.0;
    double not_h = 0.0;
};

inline OracleTails weight_event_mass(double p_h, double p_star, const std::vector<EvidenceVariable>& vars) {
    const double w_star = std::log(p_star / (1.0 - p_star)) - std::log(p_h / (1.0 - p_h));
    std::vector<std::size_t> idx(vars.size(), 0);
    OracleTails t;
    while (true) {
        double lh = 1.0, ln = 1.0;
        for (std::size_t i = 0; i < vars.size(); ++i) {
            lh *= vars[i].likelihood_h[idx[i]];
            ln *= vars[i].likelihood_not_h[idx[i]];
        }
        if (std::log(lh / ln) > w_star) {
            t.h += lh;
            t.not_h += ln;
        }
        std::size_t i = 0;
        for (; i < vars.size(); ++i) {
            if (++idx[i] < vars[i].outcome_count()) break;
            idx[i] = 0;
        }
        if (i == vars.size()) break;
    }
    return t;
}

// 1 - Phi(z) from the Maclaurin series of erf evaluated at 320 bits.
inline double normal_sf_series(double z) {
    constexpr mpfr_prec_t prec = 320;
    mpfr_t x, x2, term, sum, tmp, pi;
    mpfr_inits2(prec, x, x2, term, sum, tmp, pi, (mpfr_ptr)nullptr);

    mpfr_set_d(x, z, MPFR_RNDN);
    mpfr_sqrt_ui(tmp, 2, MPFR_RNDN);
    mpfr_div(x, x, tmp, MPFR_RNDN);  // x = z / sqrt(2)
    mpfr_sqr(x2, x, MPFR_RNDN);

    // erf(x) = 2/sqrt(pi) * sum_n (-1)^n x^(2n+1) / (n! (2n+1))
    mpfr_set(term, x, MPFR_RNDN);  // x^(2n+1)/n! with sign
    mpfr_set(sum, x, MPFR_RNDN);
    for (unsigned long n = 1; n < 4000; ++n) {
        mpfr_mul(term, term, x2, MPFR_RNDN);
        mpfr_div_ui(term, term, n, MPFR_RNDN);
        mpfr_neg(term, term, MPFR_RNDN);
        mpfr_div_ui(tmp, term, 2 * n + 1, MPFR_RNDN);
        mpfr_add(sum, sum, tmp, MPFR_RNDN);
        if (mpfr_cmp_ui(x2, n) < 0 && mpfr_get_exp(tmp) < mpfr_get_exp(sum) - static_cast<mpfr_exp_t>(prec))
            break;
    }
    mpfr_const_pi(pi, MPFR_RNDN);
    mpfr_sqrt(pi, pi, MPFR_RNDN);
    mpfr_mul_ui(sum, sum, 2, MPFR_RNDN);
    mpfr_div(sum, sum, pi, MPFR_RNDN);  // erf(x)

    // sf = (1 - erf) / 2
    mpfr_ui_sub(sum, 1, sum, MPFR_RNDN);
    mpfr_div_ui(sum, sum, 2, MPFR_RNDN);
    const double out = mpfr_get_d(sum, MPFR_RNDN);
    mpfr_clears(x, x2, term, sum, tmp, pi, (mpfr_ptr)nullptr);
    return out;
}

inline EvidenceVariable binary(std::string id, double alpha, double beta, double cost = 0.0) {
    return EvidenceVariable{std::move(id), {"pos", "neg"}, {alpha, 1.0 - alpha}, {beta, 1.0 - beta}, cost};
}

inline UtilityModel symmetric_utility() {
    return UtilityModel{1.0, 0.0, 0.0, 1.0, RiskModel::linear()};
}

inline DiagnosisModel make_model(double prior, UtilityModel u, std::vector<EvidenceVariable> vars) {
    DiagnosisModel m;
    m.prior = prior;
    m.utility = u;
    m.evidence = std::move(vars);
    return m;
}

// Two equal tests: each alone is not worth its cost, the pair is. Found by a
// grid search over prior, likelihoods and cost against the rollback oracle
// (singleton vi 0.005, pair vi 0.15875, cost 0.04 each).
inline DiagnosisModel synergy_fixture() {
    return make_model(0.7, symmetric_utility(), {binary("a", 0.6, 0.05, 0.04), binary("b", 0.6, 0.05, 0.04)});
}

// Random model with n binary variables; likelihoods in [0.05, 0.95],
// outcome values that keep B, C > 0, and linear or exponential risk.
inline DiagnosisModel random_model(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> lik(0.05, 0.95), prior(0.05, 0.95), val(0.0, 10.0), cost(0.0, 0.5);
    DiagnosisModel m;
    m.prior = prior(rng);
    const double lo_h = val(rng), lo_n = val(rng);
    m.utility.value_h_d = lo_h + 0.5 + val(rng);
    m.utility.value_h_not_d = lo_h;
    m.utility.value_not_h_not_d = lo_n + 0.5 + val(rng);
    m.utility.value_not_h_d = lo_n;
    m.utility.risk = (rng() % 3 == 0) ? RiskModel::exponential(2.0 + val(rng)) : RiskModel::linear();
    for (std::size_t i = 0; i < n; ++i) m.evidence.push_back(binary("e" + std::to_string(i), lik(rng), lik(rng), cost(rng)));
    return m;
}

} // namespace voi::testing
