#pragma once

// CSV and text rendering. Numbers use the shortest decimal form that reads
// back to the same double. Column orders are fixed:
//
//   simulation: policy,trials,mean_net_value,sd,standard_error,
//               mean_observations,mean_observation_cost,seed,model_digest
//   ranking:    id,vi,cost,nvi
//   prefix:     m,set,method,vi,cost,nvi,tail_h,tail_not_h
//   compare:    m,set,exact_tail_h,clt_tail_h,exact_tail_not_h,
//               clt_tail_not_h,exact_vi,clt_vi
//
// Sets inside a CSV field are joined with ';'.

#include "voi/myopic.hpp"
#include "voi/planner.hpp"
#include "voi/sim.hpp"

#include <string>
#include <vector>

namespace voi {

std::string format_number(double x);

std::string simulation_csv(const SimulationReport& report);
std::string ranking_csv(const std::vector<RankedVariable>& ranking);
std::string prefix_csv(const std::vector<PrefixRow>& scan);

struct CompareRow {
    std::size_t m = 0;
    std::vector<std::string> set;
    VoiResult exact;
    VoiResult clt;
};

std::string compare_csv(const std::vector<CompareRow>& rows);

// "key: value" lines for one result, warnings last.
std::string describe(const VoiResult& result);

} // namespace voi
