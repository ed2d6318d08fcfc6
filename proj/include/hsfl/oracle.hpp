#pragma once

#include <cstdint>
#include <vector>

#include "hsfl/delay_model.hpp"
#include "hsfl/plan.hpp"
#include "hsfl/planner.hpp"
#include "hsfl/scenario.hpp"

namespace hsfl {

struct OracleBudget {
  int max_clients = 8;
  int max_aggregator_set_size = 3;
  long long enumeration_cap = 50'000'000;
};

struct OracleResult {
  Plan plan;
  DelayBreakdown delay;
  long long evaluated = 0;
};

// Total configurations the exhaustive search would visit:
// sum over v, h of sum_{k=1}^{min(cap, N-1)} C(N,k) * k^(N-k).
long long estimate_configurations(const Scenario& s,
                                  const std::vector<int>& candidates,
                                  const OracleBudget& b);

// Global minimum t_round over all candidate cut layers, aggregator layers,
// aggregator subsets (sizes 1..min(cap, N-1)) and total assignments.
// Throws BudgetError (with the estimate) before enumerating anything when
// the space exceeds the cap. Deterministic tie-break: the planner's
// ordering extended by aggregator-set and assignment lexicographic order.
OracleResult exhaustive_best(const Scenario& s, const std::vector<int>& candidates,
                             const OracleBudget& b, int jobs = 1);

struct CompareReport {
  std::uint64_t seed = 0;
  int n = 0;
  double oracle_t = 0.0;
  double heuristic_t = 0.0;
  double suboptimality_pct = 0.0;
  double oracle_ms = 0.0;
  double heuristic_ms = 0.0;
  double speedup = 0.0;
};

// Runs oracle and planner on the same instance and measures both on
// identical single-threaded runs (the planner is repeated until the total
// is long enough to time reliably).
CompareReport compare(const Scenario& s, const std::vector<int>& candidates,
                      const PlannerConfig& cfg, const OracleBudget& b,
                      std::uint64_t seed = 0);

}  // namespace hsfl
