#include "hsfl/planner.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <nlohmann/json.hpp>

#include "hsfl/errors.hpp"

namespace hsfl {

namespace {

// Candidate configuration with the deterministic tie-break order: lower
// t_round, then lower v, then lower h, then fewer aggregators.
struct Candidate {
  bool valid = false;
  double t_round = 0.0;
  int v = 0, h = 0, k = 0;
  Plan plan;
  DelayBreakdown delay;

  bool better_than(const Candidate& other) const {
    if (!other.valid) return valid;
    if (!valid) return false;
    if (t_round != other.t_round) return t_round < other.t_round;
    if (v != other.v) return v < other.v;
    if (h != other.h) return h < other.h;
    return k < other.k;
  }
};

struct BranchCounters {
  long long iterations = 0;
  long long evaluated_configs = 0;
  long long pair_evaluations = 0;
};

std::vector<int> clients_by_throughput(const Scenario& s) {
  std::vector<int> order(static_cast<size_t>(s.n()));
  for (int i = 0; i < s.n(); ++i) order[static_cast<size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (s.client(a).throughput != s.client(b).throughput)
      return s.client(a).throughput > s.client(b).throughput;
    return a < b;
  });
  return order;
}

int aggregator_count_for(double lambda, int n) {
  const int k = static_cast<int>(std::ceil(lambda * n - 1e-9));
  return std::clamp(k, 1, n - 1);
}

// Distinct aggregator counts visited by the lambda grid
// {beta, 2*beta, ...} up to lambda_max, ascending.
std::vector<int> aggregator_counts(double lambda_max, double beta, int n) {
  std::vector<int> counts;
  const long long steps = static_cast<long long>(std::floor(lambda_max / beta + 1e-9));
  for (long long i = 1; i <= steps; ++i) {
    const int k = aggregator_count_for(static_cast<double>(i) * beta, n);
    if (counts.empty() || counts.back() != k) counts.push_back(k);
  }
  if (counts.empty()) counts.push_back(1);  // degenerate grid (beta > lambda_max)
  return counts;
}

// One balance-loop run for a fixed cut layer (Algorithm 2's inner while).
// The delta test runs in a scenario-intrinsic time unit so the trajectory
// is invariant under uniform scaling of throughputs and rates.
Candidate balance_loop(const Scenario& s, int v, const PlannerConfig& cfg,
                       const std::vector<int>& throughput_order,
                       BranchCounters& counters) {
  const int n = s.n();
  const double t_scale =
      s.model().total_flops() / s.client(throughput_order.front()).throughput;
  const int max_iterations =
      cfg.max_h_iterations > 0
          ? cfg.max_h_iterations
          : static_cast<int>(std::ceil(std::log2(s.model().layer_count()))) + 1;

  Candidate best;
  std::set<int> visited;
  int h = 2;
  for (int iteration = 0; iteration < max_iterations; ++iteration) {
    if (visited.count(h)) break;
    visited.insert(h);
    ++counters.iterations;

    std::vector<int> counts;
    if (cfg.pinned_lambda) {
      counts.push_back(aggregator_count_for(*cfg.pinned_lambda, n));
    } else {
      const int max_aggr = max_aggregators(s, h, v);
      counts = aggregator_counts(static_cast<double>(max_aggr) / n, cfg.lambda_step, n);
    }

    Candidate best_at_h;
    for (int k : counts) {
      std::vector<int> aggregators(throughput_order.begin(), throughput_order.begin() + k);
      std::sort(aggregators.begin(), aggregators.end());
      Plan plan = greedy_assign(s, h, v, aggregators, &counters.pair_evaluations);
      const DelayBreakdown delay = detail::evaluate_unchecked(s, plan);
      ++counters.evaluated_configs;
      Candidate c{true, delay.t_round, v, h, k, std::move(plan), delay};
      if (c.better_than(best_at_h)) best_at_h = std::move(c);
    }
    if (best_at_h.better_than(best)) best = best_at_h;

    // Steps 19-20 on the best assignment found at this h.
    const double mid_flops = s.model().prefix_flops(h + 1, v);
    const double weak_flops = s.model().prefix_flops(1, h);
    std::vector<int> pool(static_cast<size_t>(n), 0);
    for (int cl = 0; cl < n; ++cl)
      ++pool[static_cast<size_t>(best_at_h.plan.assignment[static_cast<size_t>(cl)])];
    double t_aggr = 0.0;
    for (int k : best_at_h.plan.aggregators)
      t_aggr = std::max(t_aggr, pool[static_cast<size_t>(k)] * mid_flops /
                                    s.client(k).throughput);
    double t_clients = 0.0;
    for (int cl = 0; cl < n; ++cl)
      t_clients = std::max(t_clients, weak_flops / s.client(cl).throughput);

    if ((t_aggr - t_clients) / t_scale <= cfg.delta) break;
    const int next = t_aggr > t_clients ? (h + (v - 1) + 1) / 2 : (h + 1) / 2;
    h = std::clamp(next, 2, v - 1);
  }
  return best;
}

PlanDecision run(const Scenario& s, const std::vector<int>& candidates,
                 const PlannerConfig& cfg, bool parallel) {
  if (s.n() < 2) throw InfeasibleError("planner needs at least 2 clients");
  if (candidates.empty()) throw InfeasibleError("planner needs a nonempty candidate set");
  if (!(cfg.delta > 0)) throw InfeasibleError("planner delta must be > 0");
  if (!(cfg.lambda_step > 0) || cfg.lambda_step > 1)
    throw InfeasibleError("planner lambda_step must lie in (0,1]");

  const int layer_count = s.model().layer_count();
  std::vector<int> feasible;
  for (int v : candidates)
    if (v > 2 && v < layer_count) feasible.push_back(v);
  std::sort(feasible.begin(), feasible.end());
  feasible.erase(std::unique(feasible.begin(), feasible.end()), feasible.end());
  if (feasible.empty())
    throw InfeasibleError("no candidate cut layer satisfies 2 < v < L=" +
                          std::to_string(layer_count));

  const std::vector<int> throughput_order = clients_by_throughput(s);
  const int branches = static_cast<int>(feasible.size());
  std::vector<Candidate> branch_best(static_cast<size_t>(branches));
  std::vector<BranchCounters> branch_counters(static_cast<size_t>(branches));

  if (parallel) {
#ifdef _OPENMP
    const int jobs = cfg.jobs > 0 ? cfg.jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
    for (int i = 0; i < branches; ++i)
      branch_best[static_cast<size_t>(i)] =
          balance_loop(s, feasible[static_cast<size_t>(i)], cfg, throughput_order,
                       branch_counters[static_cast<size_t>(i)]);
#else
    parallel = false;
#endif
  }
  if (!parallel) {
    for (int i = 0; i < branches; ++i)
      branch_best[static_cast<size_t>(i)] =
          balance_loop(s, feasible[static_cast<size_t>(i)], cfg, throughput_order,
                       branch_counters[static_cast<size_t>(i)]);
  }

  Candidate best;
  PlanDecision out;
  for (int i = 0; i < branches; ++i) {
    if (branch_best[static_cast<size_t>(i)].better_than(best))
      best = branch_best[static_cast<size_t>(i)];
    out.iterations += branch_counters[static_cast<size_t>(i)].iterations;
    out.evaluated_configs += branch_counters[static_cast<size_t>(i)].evaluated_configs;
    out.pair_evaluations += branch_counters[static_cast<size_t>(i)].pair_evaluations;
  }
  if (!best.valid) throw InfeasibleError("planner found no feasible (h, v) pair");
  out.plan = std::move(best.plan);
  out.delay = best.delay;
  out.lambda = static_cast<double>(best.k) / s.n();
  return out;
}

}  // namespace

int max_aggregators(const Scenario& s, int h, int v) {
  if (!(1 < h && h < v))
    throw InfeasibleError("max_aggregators requires 1 < h < v");
  const double gamma = s.heterogeneity();
  const double ratio = s.model().prefix_flops(1, h) / s.model().prefix_flops(h, v);
  const int raw = static_cast<int>(std::floor((gamma - 1.0) * ratio));
  return std::clamp(raw, 1, std::max(1, s.n() - 1));
}

Plan greedy_assign(const Scenario& s, int h, int v, const std::vector<int>& aggregators,
                   long long* pair_evaluations) {
  if (aggregators.empty()) throw InfeasibleError("greedy_assign: no aggregators");
  const int n = s.n();
  const int server = s.server_endpoint();
  const ModelProfile& m = s.model();
  const double weak_flops = m.prefix_flops(1, h);
  const double mid_flops = m.prefix_flops(h + 1, v);
  const double g_h = m.act_bytes_at(h);
  const double g_v = m.act_bytes_at(v);

  Plan plan;
  plan.aggregator_layer = h;
  plan.cut_layer = v;
  plan.aggregators = aggregators;
  std::sort(plan.aggregators.begin(), plan.aggregators.end());
  plan.assignment.assign(static_cast<size_t>(n), -1);

  std::vector<int> pool(static_cast<size_t>(n), 0);
  for (int k : plan.aggregators) {
    if (k < 0 || k >= n)
      throw InfeasibleError("greedy_assign: aggregator " + std::to_string(k) +
                            " not in scenario");
    plan.assignment[static_cast<size_t>(k)] = k;
    pool[static_cast<size_t>(k)] = 1;  // own aggregator-side model
  }

  for (int cl : clients_by_throughput(s)) {
    if (plan.assignment[static_cast<size_t>(cl)] >= 0) continue;
    int best_k = -1;
    double best_delay = 0.0;
    for (int k : plan.aggregators) {
      const double pooled =
          (pool[static_cast<size_t>(k)] + 1) * mid_flops / s.client(k).throughput;
      const double fp_path = weak_flops / s.client(cl).throughput + g_h / s.rate(cl, k) +
                             pooled + g_v / s.rate(k, server);
      const double bp_path = 2.0 * pooled + g_h / s.rate(k, cl) +
                             2.0 * weak_flops / s.client(cl).throughput;
      const double pair_delay = fp_path + bp_path;
      if (pair_evaluations) ++*pair_evaluations;
      if (best_k < 0 || pair_delay < best_delay) {  // ties keep the lower id
        best_k = k;
        best_delay = pair_delay;
      }
    }
    plan.assignment[static_cast<size_t>(cl)] = best_k;
    ++pool[static_cast<size_t>(best_k)];
  }
  return plan;
}

PlanDecision plan(const Scenario& s, const std::vector<int>& candidates,
                  const PlannerConfig& cfg) {
  return run(s, candidates, cfg, true);
}

PlanDecision plan_serial(const Scenario& s, const std::vector<int>& candidates,
                         const PlannerConfig& cfg) {
  return run(s, candidates, cfg, false);
}

PlanDecision replan(const Scenario& s, std::span<const SystemChange> changes,
                    const std::vector<int>& candidates, const PlannerConfig& cfg) {
  const Scenario changed = apply_changes(s, changes);
  return plan(changed, candidates, cfg);
}

nlohmann::json decision_to_json(const PlanDecision& d) {
  return {{"h", d.plan.aggregator_layer},
          {"v", d.plan.cut_layer},
          {"lambda", d.lambda},
          {"aggregators", d.plan.aggregators},
          {"assignment", d.plan.assignment},
          {"delay_breakdown", breakdown_to_json(d.delay)},
          {"iterations", d.iterations},
          {"evaluated_configs", d.evaluated_configs},
          {"pair_evaluations", d.pair_evaluations}};
}

}  // namespace hsfl
