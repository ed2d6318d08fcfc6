#pragma once

#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "hsfl/delay_model.hpp"
#include "hsfl/plan.hpp"
#include "hsfl/scenario.hpp"

namespace hsfl {

struct PlannerConfig {
  // Balance-loop stop threshold. Compared against T_aggr - T_clients in a
  // scenario-intrinsic time unit (delays divided by the strongest client's
  // full-model FP time), which keeps the selected plan invariant under
  // uniform scaling of throughputs and rates.
  double delta = 0.5;
  double lambda_step = 0.01;  // beta
  int max_h_iterations = 0;   // 0 -> ceil(log2 L) + 1
  int jobs = 1;               // parallel cut-layer branches; 0 -> all cores
  // Pins the aggregator count to ceil(lambda*N), bypassing the maxAggr
  // bound; used by lambda sweeps.
  std::optional<double> pinned_lambda;
};

struct PlanDecision {
  Plan plan;
  DelayBreakdown delay;
  double lambda = 0.0;  // |aggregators| / N
  long long iterations = 0;         // balance-loop iterations over all v
  long long evaluated_configs = 0;  // (v, h, K) evaluations
  long long pair_evaluations = 0;   // greedy client-aggregator delay probes
};

// floor((gamma-1) * sum_{l<=h} f_l / sum_{h<=l<=v} f_l), clamped to
// [1, N-1].
int max_aggregators(const Scenario& s, int h, int v);

// Non-aggregators in descending throughput order each go to the aggregator
// minimizing the pair's FP+BP path with the candidate added to its pool;
// ties break to the lowest aggregator id. pair_evaluations, when given,
// accumulates the number of (client, aggregator) probes.
Plan greedy_assign(const Scenario& s, int h, int v,
                   const std::vector<int>& aggregators,
                   long long* pair_evaluations = nullptr);

// Joint selection of (h, v, aggregator set, assignment) minimizing t_round
// over the candidate cut layers. Deterministic: ties break to lower
// t_round, then lower v, then lower h, then lower lambda.
PlanDecision plan(const Scenario& s, const std::vector<int>& candidates,
                  const PlannerConfig& cfg);

// Single-threaded reference with the identical contract; plan() must agree
// with it exactly.
PlanDecision plan_serial(const Scenario& s, const std::vector<int>& candidates,
                         const PlannerConfig& cfg);

// Applies the changes in order and replans from scratch on the changed
// scenario.
PlanDecision replan(const Scenario& s, std::span<const SystemChange> changes,
                    const std::vector<int>& candidates, const PlannerConfig& cfg);

nlohmann::json decision_to_json(const PlanDecision& d);

}  // namespace hsfl
