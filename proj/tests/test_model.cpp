#include "oracles.hpp"

#include "voi/error.hpp"
#include "voi/model.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace voi;
using namespace voi::testing;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool has_violation(const ValidationReport& r, std::string_view needle) {
    for (const auto& v : r.violations)
        if (v.find(needle) != std::string::npos) return true;
    return false;
}

} // namespace

TEST_CASE("validate_model accepts a well-formed two-test model") {
    auto m = make_model(0.3, symmetric_utility(), {binary("a", 0.8, 0.2, 0.1), binary("b", 0.6, 0.3, 0.05)});
    CHECK(validate_model(m).ok());
}

TEST_CASE("validate_model reports each violated invariant") {
    auto m = make_model(0.3, symmetric_utility(), {binary("a", 0.8, 0.2)});

    SUBCASE("zero benefit") {
        m.utility.value_h_d = m.utility.value_h_not_d;
        CHECK(has_violation(validate_model(m), "benefit must be positive"));
    }
    SUBCASE("non-positive decision cost") {
        m.utility.value_not_h_d = 2.0;
        CHECK(has_violation(validate_model(m), "cost of the decision must be positive"));
    }
    SUBCASE("unnormalized likelihoods") {
        m.evidence[0].likelihood_h = {0.6, 0.3};
        CHECK(has_violation(validate_model(m), "distribution not normalized"));
    }
    SUBCASE("prior on the boundary") {
        m.prior = 1.0;
        CHECK(has_violation(validate_model(m), "prior"));
        m.prior = 0.0;
        CHECK(has_violation(validate_model(m), "prior"));
    }
    SUBCASE("duplicate ids") {
        m.evidence.push_back(binary("a", 0.5, 0.5));
        CHECK(has_violation(validate_model(m), "duplicate evidence id"));
    }
    SUBCASE("outcome impossible under both hypotheses") {
        m.evidence[0] = EvidenceVariable{"a", {"x", "y", "z"}, {0.5, 0.5, 0.0}, {0.5, 0.5, 0.0}, 0.0};
        CHECK(has_violation(validate_model(m), "zero likelihood under both"));
    }
    SUBCASE("single outcome label") {
        m.evidence[0] = EvidenceVariable{"a", {"x"}, {1.0}, {1.0}, 0.0};
        CHECK(has_violation(validate_model(m), "two distinct outcome labels"));
    }
    SUBCASE("negative cost") {
        m.evidence[0].cost = -1.0;
        CHECK(has_violation(validate_model(m), "cost must be nonnegative"));
    }
    SUBCASE("group member that does not exist") {
        m.groups.push_back({{"a", "ghost"}, {}, {}});
        CHECK(has_violation(validate_model(m), "unknown member"));
    }
    SUBCASE("group marginal mismatch") {
        m.evidence.push_back(binary("b", 0.5, 0.5));
        // Product of a's and b's likelihoods except H marginal of b is 0.6/0.4.
        m.groups.push_back({{"a", "b"}, {0.48, 0.32, 0.12, 0.08}, {0.1, 0.1, 0.4, 0.4}});
        CHECK(has_violation(validate_model(m), "joint marginal does not match"));
    }
    SUBCASE("exponential risk with a bad tolerance") {
        m.utility.risk = RiskModel::exponential(0.0);
        CHECK(has_violation(validate_model(m), "risk tolerance"));
    }
}

TEST_CASE("posterior_odds") {
    SUBCASE("no observations returns the prior odds") {
        auto m = make_model(0.5, symmetric_utility(), {binary("a", 0.8, 0.2)});
        CHECK(posterior_odds(m, {}) == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("one observation multiplies by the likelihood ratio") {
        auto m = make_model(0.5, symmetric_utility(), {binary("a", 0.8, 0.2)});
        CHECK(posterior_odds(m, {{"a", "pos"}}) == doctest::Approx(4.0).epsilon(1e-14));
    }
    SUBCASE("zero likelihood under not-H gives infinite odds") {
        auto m = make_model(0.5, symmetric_utility(),
                            {EvidenceVariable{"a", {"pos", "neg"}, {0.3, 0.7}, {0.0, 1.0}, 0.0}});
        CHECK(posterior_odds(m, {{"a", "pos"}}) == kInf);
        CHECK(posterior_log_odds(m, {{"a", "neg"}}) == doctest::Approx(std::log(0.7)));
    }
    SUBCASE("zero likelihood under H gives zero odds") {
        auto m = make_model(0.5, symmetric_utility(),
                            {EvidenceVariable{"a", {"pos", "neg"}, {0.0, 1.0}, {0.3, 0.7}, 0.0}});
        CHECK(posterior_odds(m, {{"a", "pos"}}) == 0.0);
    }
    SUBCASE("errors") {
        auto m = make_model(0.5, symmetric_utility(), {binary("a", 0.8, 0.2)});
        CHECK_THROWS_AS(posterior_odds(m, {{"zz", "pos"}}), Error);
        try {
            posterior_odds(m, {{"a", "maybe"}});
            FAIL("expected unknown_outcome");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::unknown_outcome);
        }
        try {
            posterior_odds(m, {{"zz", "pos"}});
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::unknown_variable);
        }
    }
    SUBCASE("contradictory certain observations are impossible") {
        auto m = make_model(0.5, symmetric_utility(),
                            {EvidenceVariable{"a", {"pos", "neg"}, {0.3, 0.7}, {0.0, 1.0}, 0.0},
                             EvidenceVariable{"b", {"pos", "neg"}, {0.0, 1.0}, {0.3, 0.7}, 0.0}});
        try {
            posterior_odds(m, {{"a", "pos"}, {"b", "pos"}});
            FAIL("expected impossible_evidence");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::impossible_evidence);
        }
    }
}

TEST_CASE("posterior odds properties on random models") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        auto m = random_model(rng, 4);
        Observations a, b, all;
        for (std::size_t i = 0; i < 4; ++i) {
            const auto& v = m.evidence[i];
            const std::string label = v.outcomes[rng() % 2];
            all[v.id] = label;
            (i % 2 ? a : b)[v.id] = label;
        }
        // Disjoint sets compose: log odds(A u B) + log odds(empty) = log odds(A) + log odds(B).
        const double lhs = posterior_log_odds(m, all) + posterior_log_odds(m, {});
        const double rhs = posterior_log_odds(m, a) + posterior_log_odds(m, b);
        CHECK(std::abs(lhs - rhs) <= 1e-12);

        // Observation order invariance: the same set entered in reverse order
        // through a sequence of single-observation updates.
        double forward = log_odds_from_probability(m.prior);
        double backward = forward;
        for (auto it = all.begin(); it != all.end(); ++it) {
            const auto& v = m.at(it->first);
            const auto k = *v.outcome_index(it->second);
            forward += weight_of_outcome(v.likelihood_h[k], v.likelihood_not_h[k]);
        }
        for (auto it = all.rbegin(); it != all.rend(); ++it) {
            const auto& v = m.at(it->first);
            const auto k = *v.outcome_index(it->second);
            backward += weight_of_outcome(v.likelihood_h[k], v.likelihood_not_h[k]);
        }
        CHECK(std::abs(forward - backward) <= 1e-12);
        CHECK(std::abs(forward - posterior_log_odds(m, all)) <= 1e-12);
    }
}

TEST_CASE("threshold") {
    auto m = make_model(0.5, symmetric_utility(), {binary("a", 0.8, 0.2)});
    SUBCASE("symmetric utilities") {
        auto t = threshold(m);
        CHECK(t.p_star == 0.5);
        CHECK(t.w_star == 0.0);
    }
    SUBCASE("C = 1, B = 3") {
        m.utility = UtilityModel{3.0, 0.0, 0.0, 1.0, RiskModel::linear()};
        CHECK(threshold(m).p_star == doctest::Approx(0.25).epsilon(1e-15));
    }
    SUBCASE("w_star is relative to the current odds") {
        auto t = threshold(m, {{"a", "pos"}});
        CHECK(t.w_star == doctest::Approx(-std::log(4.0)).epsilon(1e-14));
    }
    SUBCASE("exponential risk computes p* in utility space") {
        m.utility = UtilityModel{3.0, 0.0, 0.0, 1.0, RiskModel::exponential(1.0)};
        const double b = -std::exp(-3.0) + 1.0;
        const double c = -std::exp(-1.0) + 1.0;
        CHECK(threshold(m).p_star == doctest::Approx(c / (c + b)).epsilon(1e-14));
    }
}

TEST_CASE("p_star lies strictly inside (0,1) for random valid models") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 500; ++i) {
        auto m = random_model(rng, 1);
        REQUIRE(validate_model(m).ok());
        const double p = threshold(m).p_star;
        CHECK(p > 0.0);
        CHECK(p < 1.0);
    }
}

TEST_CASE("act_decision") {
    CHECK(act_decision(4.0, 0.5) == Decision::act);
    CHECK(act_decision(1.0, 0.5) == Decision::dont_act);
    CHECK(act_decision(kInf, 0.99) == Decision::act);
    CHECK(act_decision(0.0, 0.01) == Decision::dont_act);
    CHECK_THROWS_AS(act_decision(-1.0, 0.5), Error);
}

TEST_CASE("act_decision agrees with the weight threshold") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> w(-6.0, 6.0), p(0.02, 0.98);
    for (int i = 0; i < 2000; ++i) {
        const double prior_log_odds = w(rng);
        const double p_star = p(rng);
        const double total = w(rng);
        const double w_star = log_odds_from_probability(p_star) - prior_log_odds;
        const bool by_weight = total > w_star;
        CHECK((act_decision(std::exp(prior_log_odds + total), p_star) == Decision::act) == by_weight);
    }
}

TEST_CASE("linear rescaling of outcome values leaves decisions unchanged") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> scale(0.01, 100.0);
    for (int i = 0; i < 200; ++i) {
        auto m = random_model(rng, 2);
        m.utility.risk = RiskModel::linear();
        auto scaled = m;
        const double s = scale(rng);
        scaled.utility.value_h_d *= s;
        scaled.utility.value_h_not_d *= s;
        scaled.utility.value_not_h_d *= s;
        scaled.utility.value_not_h_not_d *= s;
        for (double odds : {0.1, 0.5, 1.0, 2.0, 7.5}) {
            CHECK(act_decision(odds, threshold(m).p_star) == act_decision(odds, threshold(scaled).p_star));
        }
        CHECK(threshold(m).p_star == doctest::Approx(threshold(scaled).p_star).epsilon(1e-12));
    }
}

TEST_CASE("weight_of_evidence") {
    SUBCASE("uninformative") {
        auto w = weight_of_evidence(binary("a", 0.5, 0.5));
        CHECK(w.weights[0] == 0.0);
        CHECK(w.weights[1] == 0.0);
    }
    SUBCASE("alpha 0.8, beta 0.2") {
        auto w = weight_of_evidence(binary("a", 0.8, 0.2));
        CHECK(w.weights[0] == doctest::Approx(std::log(0.8 / 0.2)).epsilon(1e-14));
        CHECK(w.weights[1] == doctest::Approx(std::log(0.2 / 0.8)).epsilon(1e-14));
        CHECK(w.weights[0] == doctest::Approx(1.386294).epsilon(1e-6));
    }
    SUBCASE("beta = 1 makes the negative outcome conclusive") {
        auto w = weight_of_evidence(binary("a", 0.5, 1.0));
        CHECK(w.weights[0] == doctest::Approx(std::log(0.5)).epsilon(1e-15));
        CHECK(w.weights[1] == kInf);
    }
}

TEST_CASE("groups: conditioning on an observed member") {
    // a and b correlated within a group; c independent.
    auto m = make_model(0.4, symmetric_utility(), {binary("a", 0.7, 0.2), binary("b", 0.6, 0.3), binary("c", 0.8, 0.4)});
    // Joint over (a, b), a slowest: H marginals a=(0.7,0.3), b=(0.6,0.4).
    m.groups.push_back({{"a", "b"}, {0.5, 0.2, 0.1, 0.2}, {0.1, 0.1, 0.2, 0.6}});
    REQUIRE(validate_model(m).ok());

    // Observing a alone uses its marginal likelihood ratio.
    CHECK(posterior_log_odds(m, {{"a", "pos"}}) ==
          doctest::Approx(log_odds_from_probability(0.4) + std::log(0.7 / 0.2)).epsilon(1e-13));
    // Observing both uses the joint cell.
    CHECK(posterior_log_odds(m, {{"a", "pos"}, {"b", "neg"}}) ==
          doctest::Approx(log_odds_from_probability(0.4) + std::log(0.2 / 0.1)).epsilon(1e-13));

    // After observing a = pos, b's likelihoods are the conditional rows.
    const auto state = propagate(m, {{"a", "pos"}});
    const auto* b = state.find("b");
    REQUIRE(b != nullptr);
    CHECK(b->likelihood_h[0] == doctest::Approx(0.5 / 0.7).epsilon(1e-14));
    CHECK(b->likelihood_not_h[0] == doctest::Approx(0.1 / 0.2).epsilon(1e-14));
    CHECK(state.find("a") == nullptr);
    CHECK(state.find("c") != nullptr);
}

TEST_CASE("set_cost uses overrides, otherwise sums") {
    auto m = make_model(0.4, symmetric_utility(), {binary("a", 0.7, 0.2, 0.1), binary("b", 0.6, 0.3, 0.2)});
    const std::vector<std::string> ab{"b", "a"};
    CHECK(set_cost(m, ab) == doctest::Approx(0.3));
    m.set_costs.push_back({{"a", "b"}, 0.25});
    CHECK(set_cost(m, ab) == 0.25);
    const std::vector<std::string> a{"a"};
    CHECK(set_cost(m, a) == 0.1);
}
