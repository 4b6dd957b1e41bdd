#include "voi/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace voi {

namespace {

std::string join_set(const std::vector<std::string>& ids) {
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) out += ';';
        out += ids[i];
    }
    return out;
}

std::string optional_number(const std::optional<double>& x) {
    return x ? format_number(*x) : std::string();
}

} // namespace

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, end);
}

std::string simulation_csv(const SimulationReport& report) {
    std::ostringstream os;
    os << "policy,trials,mean_net_value,sd,standard_error,mean_observations,mean_observation_cost,seed,model_digest\n";
    for (const auto& s : report.policies) {
        os << policy_name(s.policy) << ',' << s.trials << ',' << format_number(s.mean_net_value) << ','
           << format_number(s.sd) << ',' << format_number(s.standard_error) << ','
           << format_number(s.mean_observations) << ',' << format_number(s.mean_observation_cost) << ','
           << report.seed << ',' << report.model_digest << '\n';
    }
    return os.str();
}

std::string ranking_csv(const std::vector<RankedVariable>& ranking) {
    std::ostringstream os;
    os << "id,vi,cost,nvi\n";
    for (const auto& r : ranking)
        os << r.id << ',' << format_number(r.result.vi) << ',' << format_number(r.result.cost) << ','
           << format_number(r.result.nvi) << '\n';
    return os.str();
}

std::string prefix_csv(const std::vector<PrefixRow>& scan) {
    std::ostringstream os;
    os << "m,set,method,vi,cost,nvi,tail_h,tail_not_h\n";
    for (const auto& row : scan) {
        os << row.m << ',' << join_set(row.set) << ',' << method_name(row.result.method) << ','
           << format_number(row.result.vi) << ',' << format_number(row.result.cost) << ','
           << format_number(row.result.nvi) << ',' << optional_number(row.result.tail_h) << ','
           << optional_number(row.result.tail_not_h) << '\n';
    }
    return os.str();
}

std::string compare_csv(const std::vector<CompareRow>& rows) {
    std::ostringstream os;
    os << "m,set,exact_tail_h,clt_tail_h,exact_tail_not_h,clt_tail_not_h,exact_vi,clt_vi\n";
    for (const auto& row : rows) {
        os << row.m << ',' << join_set(row.set) << ',' << optional_number(row.exact.tail_h) << ','
           << optional_number(row.clt.tail_h) << ',' << optional_number(row.exact.tail_not_h) << ','
           << optional_number(row.clt.tail_not_h) << ',' << format_number(row.exact.vi) << ','
           << format_number(row.clt.vi) << '\n';
    }
    return os.str();
}

std::string describe(const VoiResult& r) {
    std::ostringstream os;
    os << "method: " << method_name(r.method) << '\n'
       << "eu_phi: " << format_number(r.eu_phi) << '\n'
       << "eu_obs: " << format_number(r.eu_obs) << '\n'
       << "ce_phi: " << format_number(r.ce_phi) << '\n'
       << "ce_obs: " << format_number(r.ce_obs) << '\n'
       << "vi: " << format_number(r.vi) << '\n'
       << "cost: " << format_number(r.cost) << '\n'
       << "nvi: " << format_number(r.nvi) << '\n';
    if (r.tail_h) os << "tail_h: " << format_number(*r.tail_h) << '\n';
    if (r.tail_not_h) os << "tail_not_h: " << format_number(*r.tail_not_h) << '\n';
    for (const auto& w : r.warnings) os << "warning: " << w << '\n';
    return os.str();
}

} // namespace voi
