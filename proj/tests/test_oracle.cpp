#include <doctest.h>

#include <algorithm>

#include "hsfl/errors.hpp"
#include "hsfl/oracle.hpp"
#include "test_helpers.hpp"

using namespace hsfl;
using namespace hsfl::testing;

TEST_CASE("tiny oracle agrees with the planner") {
  const Scenario s = tiny_scenario();
  OracleBudget budget;
  const OracleResult r = exhaustive_best(s, {3}, budget);
  CHECK(r.delay.t_round == 132.0);
  CHECK(r.plan.aggregators == std::vector<int>{1});
  CHECK(r.plan.assignment == std::vector<int>{1, 1});
  // N=2: subsets {c0} and {c1}, each with one total assignment
  CHECK(r.evaluated == 2);
}

TEST_CASE("budget guards") {
  Rng rng(11);
  RandomInstance inst = random_instance(rng, 12, 12);
  OracleBudget budget;
  budget.max_clients = 8;
  if (inst.scenario.n() > 8) {
    CHECK_THROWS_AS(
        exhaustive_best(inst.scenario, {3}, budget), BudgetError);
  }
  const Scenario s = tiny_scenario();
  budget = OracleBudget{};
  budget.enumeration_cap = 1;
  try {
    exhaustive_best(s, {3}, budget);
    CHECK(false);
  } catch (const BudgetError& e) {
    CHECK(e.estimated_configurations == 2);
  }
}

TEST_CASE("estimate matches the enumeration count") {
  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    RandomInstance inst = random_instance(rng, 6, 10);
    const int layer_count = inst.scenario.model().layer_count();
    std::vector<int> candidates{3, layer_count - 1};
    OracleBudget budget;
    budget.max_clients = 8;
    const long long estimate = estimate_configurations(inst.scenario, candidates, budget);
    const OracleResult r = exhaustive_best(inst.scenario, candidates, budget);
    CHECK(r.evaluated == estimate);
  }
}

TEST_CASE("oracle result is a true lower bound over enumerated points") {
  Rng rng(37);
  RandomInstance inst = random_instance(rng, 6, 10);
  const int layer_count = inst.scenario.model().layer_count();
  std::vector<int> candidates;
  for (int v = 3; v < layer_count; ++v) candidates.push_back(v);
  OracleBudget budget;
  budget.max_aggregator_set_size = inst.scenario.n() - 1;
  const OracleResult r = exhaustive_best(inst.scenario, candidates, budget);

  for (int probe = 0; probe < 1000; ++probe) {
    Plan p = random_valid_plan(rng, inst.scenario);
    // clamp the random plan into the oracle's space: subset size <= N-1
    if (static_cast<int>(p.aggregators.size()) > inst.scenario.n() - 1) continue;
    if (std::find(candidates.begin(), candidates.end(), p.cut_layer) == candidates.end())
      continue;
    CHECK(detail::evaluate_unchecked(inst.scenario, p).t_round >= r.delay.t_round);
  }
}

TEST_CASE("restricting the subset-size cap never lowers the optimum") {
  Rng rng(53);
  for (int trial = 0; trial < 10; ++trial) {
    RandomInstance inst = random_instance(rng, 6, 10);
    const int layer_count = inst.scenario.model().layer_count();
    std::vector<int> candidates{3, layer_count - 1};
    OracleBudget budget;
    double prev = 1e300;
    for (int cap = 1; cap < inst.scenario.n(); ++cap) {
      budget.max_aggregator_set_size = cap;
      const OracleResult r = exhaustive_best(inst.scenario, candidates, budget);
      CHECK(r.delay.t_round <= prev);
      prev = r.delay.t_round;
    }
  }
}

TEST_CASE("parallel enumeration matches serial") {
  Rng rng(67);
  for (int trial = 0; trial < 8; ++trial) {
    RandomInstance inst = random_instance(rng, 7, 10);
    const int layer_count = inst.scenario.model().layer_count();
    std::vector<int> candidates{3, (3 + layer_count) / 2};
    OracleBudget budget;
    const OracleResult serial = exhaustive_best(inst.scenario, candidates, budget, 1);
    const OracleResult parallel = exhaustive_best(inst.scenario, candidates, budget, 0);
    CHECK(serial.delay.t_round == parallel.delay.t_round);
    CHECK(serial.plan.aggregators == parallel.plan.aggregators);
    CHECK(serial.plan.assignment == parallel.plan.assignment);
    CHECK(serial.plan.aggregator_layer == parallel.plan.aggregator_layer);
    CHECK(serial.plan.cut_layer == parallel.plan.cut_layer);
    CHECK(serial.evaluated == parallel.evaluated);
  }
}

TEST_CASE("planner never beats the oracle") {
  Rng rng(79);
  PlannerConfig cfg;
  OracleBudget budget;
  for (int trial = 0; trial < 15; ++trial) {
    RandomInstance inst = random_instance(rng, 7, 10);
    budget.max_aggregator_set_size = inst.scenario.n() - 1;  // full oracle space
    const int layer_count = inst.scenario.model().layer_count();
    std::vector<int> candidates{3, layer_count - 1};
    const OracleResult oracle = exhaustive_best(inst.scenario, candidates, budget);
    const PlanDecision heuristic = plan_serial(inst.scenario, candidates, cfg);
    CHECK(heuristic.delay.t_round >= oracle.delay.t_round);
  }
}

TEST_CASE("compare report fields") {
  const Scenario s = tiny_scenario();
  PlannerConfig cfg;
  OracleBudget budget;
  const CompareReport r = compare(s, {3}, cfg, budget, 99);
  CHECK(r.seed == 99);
  CHECK(r.n == 2);
  CHECK(r.oracle_t == 132.0);
  CHECK(r.heuristic_t == 132.0);
  CHECK(r.suboptimality_pct == 0.0);
  CHECK(r.oracle_ms >= 0.0);
  CHECK(r.heuristic_ms > 0.0);
}
