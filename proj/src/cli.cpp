#include "voi/cli.hpp"

#include "voi/error.hpp"
#include "voi/model.hpp"
#include "voi/model_io.hpp"
#include "voi/myopic.hpp"
#include "voi/planner.hpp"
#include "voi/report.hpp"
#include "voi/sim.hpp"
#include "voi/subset.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <ostream>

namespace voi {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    for (char ch : text) {
        if (ch == ',') {
            if (!item.empty()) out.push_back(item);
            item.clear();
        } else {
            item += ch;
        }
    }
    if (!item.empty()) out.push_back(item);
    return out;
}

Observations parse_observations(const std::vector<std::string>& flags) {
    Observations obs;
    for (const auto& f : flags) {
        const auto eq = f.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == f.size())
            throw UsageError("--observe expects id=outcome, got '" + f + "'");
        if (!obs.emplace(f.substr(0, eq), f.substr(eq + 1)).second)
            throw UsageError("variable '" + f.substr(0, eq) + "' observed twice");
    }
    return obs;
}

int exit_code_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::invalid_model: return exit_invalid_model;
    case ErrorCode::unknown_variable:
    case ErrorCode::unknown_outcome:
    case ErrorCode::already_observed:
    case ErrorCode::invalid_argument: return exit_usage;
    case ErrorCode::impossible_evidence:
    case ErrorCode::limit_exceeded:
    case ErrorCode::domain_error: return exit_computation;
    }
    return exit_computation;
}

struct Options {
    std::string model_path;
    std::vector<std::string> observe;
    std::string set;
    std::string method = "auto";
    std::string policies = "act-now,myopic,nonmyopic";
    std::size_t trials = 10000;
    std::uint64_t seed = 1;
    std::string csv_path;
    std::size_t max_m = 0;
    SubsetLimits limits;
};

DiagnosisModel load_valid(const Options& opt) {
    auto model = load_model(opt.model_path);
    require_valid(model);
    return model;
}

void add_limits(CLI::App* cmd, Options& opt) {
    cmd->add_option("--enum-limit", opt.limits.enumeration_limit, "Exact enumeration limit (log2 instantiations)");
    cmd->add_option("--degenerate-limit", opt.limits.degenerate_limit, "Max degenerate variables");
    cmd->add_option("--clt-min-size", opt.limits.clt_min_size, "Normal-approximation size floor for warnings");
}

void print_state(std::ostream& out, const EvidenceState& state) {
    out << "# p_h: " << format_number(state.probability_h()) << '\n'
        << "# p_star: " << format_number(state.utility.p_star()) << '\n'
        << "# w_star: " << format_number(state.w_star()) << '\n'
        << "# decision_now: " << decision_name(act_decision_log(state.log_odds, state.utility.p_star())) << '\n';
}

int cmd_validate(const Options& opt, std::ostream& out, std::ostream& err) {
    const auto model = load_model(opt.model_path);
    const auto report = validate_model(model);
    if (report.ok()) {
        out << "valid\n";
        return exit_ok;
    }
    out << "invalid\n";
    for (const auto& v : report.violations) out << "  - " << v << '\n';
    err << "error[" << error_code_name(ErrorCode::invalid_model) << "]: " << report.violations.size()
        << " violation(s)\n";
    return exit_invalid_model;
}

int cmd_myopic(const Options& opt, std::ostream& out) {
    const auto model = load_valid(opt);
    const auto state = propagate(model, parse_observations(opt.observe));
    print_state(out, state);
    out << ranking_csv(myopic_ranking(state));
    return exit_ok;
}

int cmd_subset(const Options& opt, std::ostream& out) {
    const auto model = load_valid(opt);
    const auto obs = parse_observations(opt.observe);
    const auto ids = split_list(opt.set);
    for (const auto& id : ids) {
        model.at(id);
        if (obs.contains(id)) throw Error(ErrorCode::already_observed, "variable '" + id + "' is already observed");
    }
    const auto state = propagate(model, obs);
    const PlannerSettings settings{parse_subset_method(opt.method), opt.limits};
    out << "set: ";
    for (std::size_t i = 0; i < ids.size(); ++i) out << (i ? "," : "") << ids[i];
    out << '\n' << describe(subset_voi(state, ids, settings));
    return exit_ok;
}

int cmd_plan(const Options& opt, std::ostream& out) {
    const auto model = load_valid(opt);
    const auto state = propagate(model, parse_observations(opt.observe));
    const PlannerSettings settings{parse_subset_method(opt.method), opt.limits};
    const auto rec = nonmyopic_step(state, settings);
    print_state(out, state);
    out << "# singletons\n" << ranking_csv(rec.singletons);
    if (!rec.prefix_scan.empty()) out << "# prefix scan\n" << prefix_csv(rec.prefix_scan);
    for (const auto& row : rec.prefix_scan)
        for (const auto& w : row.result.warnings) out << "warning: m=" << row.m << ": " << w << '\n';
    if (rec.action == Recommendation::Action::observe)
        out << "recommendation: observe " << rec.variable << '\n';
    else
        out << "recommendation: act now (" << decision_name(rec.decision) << ")\n";
    return exit_ok;
}

int cmd_compare(const Options& opt, std::ostream& out) {
    const auto model = load_valid(opt);
    const auto obs = parse_observations(opt.observe);
    const auto ids = split_list(opt.set);
    if (ids.empty()) throw UsageError("--set must name at least one variable");
    const auto state = propagate(model, obs);
    const std::size_t max_m = opt.max_m == 0 ? ids.size() : std::min(opt.max_m, ids.size());
    std::vector<CompareRow> rows;
    for (std::size_t m = 1; m <= max_m; ++m) {
        std::vector<std::string> prefix(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(m));
        rows.push_back({m, prefix, exact_subset_voi(state, prefix, opt.limits), clt_subset_voi(state, prefix, opt.limits)});
    }
    out << compare_csv(rows);
    return exit_ok;
}

int cmd_simulate(const Options& opt, std::ostream& out) {
    const auto model = load_valid(opt);
    std::vector<Policy> policies;
    for (const auto& p : split_list(opt.policies)) policies.push_back(parse_policy(p));
    if (policies.empty()) throw UsageError("--policies must name at least one policy");
    if (opt.trials < 1) throw UsageError("--trials must be at least 1");
    const PlannerSettings settings{parse_subset_method(opt.method), opt.limits};
    const auto csv = simulation_csv(simulate(model, policies, opt.trials, opt.seed, settings));
    out << csv;
    if (!opt.csv_path.empty()) {
        std::ofstream file(opt.csv_path, std::ios::binary);
        if (!file) throw Error(ErrorCode::invalid_argument, "cannot write '" + opt.csv_path + "'");
        file << csv;
    }
    return exit_ok;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Value-of-information analysis for binary-hypothesis diagnosis models", "voi"};
    app.require_subcommand(1);
    Options opt;

    auto model_arg = [&](CLI::App* cmd) { cmd->add_option("model", opt.model_path, "Model file (JSON)")->required(); };
    auto observe_arg = [&](CLI::App* cmd) {
        cmd->add_option("--observe", opt.observe, "Observed evidence as id=outcome (repeatable)");
    };

    auto* validate = app.add_subcommand("validate", "Check a model file");
    model_arg(validate);

    auto* myopic = app.add_subcommand("myopic", "Rank single tests by net value of information");
    model_arg(myopic);
    observe_arg(myopic);

    auto* subset = app.add_subcommand("subset", "Value of information of a set of tests");
    model_arg(subset);
    observe_arg(subset);
    subset->add_option("--set", opt.set, "Comma-separated variable ids")->required();
    subset->add_option("--method", opt.method, "exact, clt or auto");
    add_limits(subset, opt);

    auto* plan = app.add_subcommand("plan", "Nonmyopic recommendation with the prefix-scan table");
    model_arg(plan);
    observe_arg(plan);
    plan->add_option("--method", opt.method, "exact, clt or auto");
    add_limits(plan, opt);

    auto* compare = app.add_subcommand("compare", "Exact vs normal-approximation tails for growing prefixes");
    model_arg(compare);
    observe_arg(compare);
    compare->add_option("--set", opt.set, "Comma-separated variable ids")->required();
    compare->add_option("--max-m", opt.max_m, "Largest prefix size (default: whole set)");
    add_limits(compare, opt);

    auto* sim = app.add_subcommand("simulate", "Paired Monte Carlo comparison of policies");
    model_arg(sim);
    sim->add_option("--policies", opt.policies, "Comma-separated: act-now, myopic, nonmyopic");
    sim->add_option("--trials", opt.trials, "Number of sampled cases");
    sim->add_option("--seed", opt.seed, "RNG seed");
    sim->add_option("--csv", opt.csv_path, "Also write the report CSV to this path");
    sim->add_option("--method", opt.method, "Set-VOI method for the nonmyopic policy");
    add_limits(sim, opt);

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error[E_USAGE]: " << e.what() << '\n';
        return exit_usage;
    }

    try {
        if (*validate) return cmd_validate(opt, out, err);
        if (*myopic) return cmd_myopic(opt, out);
        if (*subset) return cmd_subset(opt, out);
        if (*plan) return cmd_plan(opt, out);
        if (*compare) return cmd_compare(opt, out);
        if (*sim) return cmd_simulate(opt, out);
    } catch (const UsageError& e) {
        err << "error[E_USAGE]: " << e.what() << '\n';
        return exit_usage;
    } catch (const Error& e) {
        err << "error[" << error_code_name(e.code()) << "]: " << e.what() << '\n';
        return exit_code_for(e.code());
    }
    return exit_usage;
}

} // namespace voi
