#include "hsfl/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hsfl/errors.hpp"

namespace hsfl {

namespace {

// Full tie-break over enumerated configurations: the planner's order
// (t_round, v, h, K) extended by aggregator-set and assignment
// lexicographic order so equal-cost plans resolve identically everywhere.
struct OracleCandidate {
  bool valid = false;
  double t_round = 0.0;
  int v = 0, h = 0, k = 0;
  Plan plan;
  DelayBreakdown delay;

  bool better_than(const OracleCandidate& other) const {
    if (!other.valid) return valid;
    if (!valid) return false;
    if (t_round != other.t_round) return t_round < other.t_round;
    if (v != other.v) return v < other.v;
    if (h != other.h) return h < other.h;
    if (k != other.k) return k < other.k;
    if (plan.aggregators != other.plan.aggregators)
      return plan.aggregators < other.plan.aggregators;
    return plan.assignment < other.plan.assignment;
  }
};

std::vector<int> feasible_candidates(const Scenario& s, const std::vector<int>& candidates) {
  std::vector<int> out;
  for (int v : candidates)
    if (v > 2 && v < s.model().layer_count()) out.push_back(v);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::vector<int>> all_subsets(int n, int max_size) {
  std::vector<std::vector<int>> subsets;
  std::vector<int> current;
  // sizes ascending, members in lexicographic order
  for (int size = 1; size <= max_size; ++size) {
    current.assign(static_cast<size_t>(size), 0);
    for (int i = 0; i < size; ++i) current[static_cast<size_t>(i)] = i;
    while (true) {
      subsets.push_back(current);
      int pos = size - 1;
      while (pos >= 0 && current[static_cast<size_t>(pos)] == n - size + pos) --pos;
      if (pos < 0) break;
      ++current[static_cast<size_t>(pos)];
      for (int i = pos + 1; i < size; ++i)
        current[static_cast<size_t>(i)] = current[static_cast<size_t>(i) - 1] + 1;
    }
  }
  return subsets;
}

// Best assignment for a fixed (h, v, subset) by walking all |K|^(N-K)
// total assignments with an odometer.
OracleCandidate enumerate_subset(const Scenario& s, int h, int v,
                                 const std::vector<int>& subset, long long* evaluated) {
  const int n = s.n();
  Plan plan;
  plan.aggregator_layer = h;
  plan.cut_layer = v;
  plan.aggregators = subset;
  plan.assignment.assign(static_cast<size_t>(n), -1);
  for (int k : subset) plan.assignment[static_cast<size_t>(k)] = k;

  std::vector<int> free_clients;
  for (int cl = 0; cl < n; ++cl)
    if (plan.assignment[static_cast<size_t>(cl)] < 0) free_clients.push_back(cl);

  const int choices = static_cast<int>(subset.size());
  std::vector<int> digits(free_clients.size(), 0);
  OracleCandidate best;
  while (true) {
    for (size_t i = 0; i < free_clients.size(); ++i)
      plan.assignment[static_cast<size_t>(free_clients[i])] =
          subset[static_cast<size_t>(digits[i])];
    const DelayBreakdown delay = detail::evaluate_unchecked(s, plan);
    ++*evaluated;
    OracleCandidate c{true, delay.t_round, v, h, choices, plan, delay};
    if (c.better_than(best)) best = std::move(c);

    size_t pos = 0;
    while (pos < digits.size() && digits[pos] == choices - 1) digits[pos++] = 0;
    if (pos == digits.size()) break;
    ++digits[pos];
  }
  return best;
}

double pow_ll(int base, int exp) {
  double out = 1.0;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

double binomial(int n, int k) {
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

}  // namespace

long long estimate_configurations(const Scenario& s, const std::vector<int>& candidates,
                                  const OracleBudget& b) {
  const int n = s.n();
  const std::vector<int> feasible = feasible_candidates(s, candidates);
  long long hv_pairs = 0;
  for (int v : feasible) hv_pairs += v - 2;  // h in [2, v-1]
  const int max_size = std::min(b.max_aggregator_set_size, n - 1);
  double per_pair = 0.0;
  for (int size = 1; size <= max_size; ++size)
    per_pair += binomial(n, size) * pow_ll(size, n - size);
  const double total = per_pair * static_cast<double>(hv_pairs);
  if (total > 9e18) return 9'000'000'000'000'000'000LL;
  return static_cast<long long>(total);
}

OracleResult exhaustive_best(const Scenario& s, const std::vector<int>& candidates,
                             const OracleBudget& b, int jobs) {
  if (s.n() < 2) throw InfeasibleError("oracle needs at least 2 clients");
  if (s.n() > b.max_clients)
    throw BudgetError("oracle: N=" + std::to_string(s.n()) + " exceeds max_clients=" +
                          std::to_string(b.max_clients),
                      estimate_configurations(s, candidates, b));
  const long long estimate = estimate_configurations(s, candidates, b);
  if (estimate > b.enumeration_cap)
    throw BudgetError("oracle: estimated " + std::to_string(estimate) +
                          " configurations exceed the cap of " +
                          std::to_string(b.enumeration_cap),
                      estimate);

  const std::vector<int> feasible = feasible_candidates(s, candidates);
  if (feasible.empty())
    throw InfeasibleError("oracle: no candidate cut layer satisfies 2 < v < L");

  const int max_size = std::min(b.max_aggregator_set_size, s.n() - 1);
  const std::vector<std::vector<int>> subsets = all_subsets(s.n(), max_size);

  struct Task {
    int v, h;
    const std::vector<int>* subset;
  };
  std::vector<Task> tasks;
  for (int v : feasible)
    for (int h = 2; h < v; ++h)
      for (const auto& subset : subsets) tasks.push_back({v, h, &subset});

  const int task_count = static_cast<int>(tasks.size());
  OracleCandidate best;
  long long evaluated = 0;

#ifdef _OPENMP
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#else
  const int threads = 1;
#endif
  if (threads > 1) {
#ifdef _OPENMP
    std::vector<OracleCandidate> local_best(static_cast<size_t>(threads));
    std::vector<long long> local_evaluated(static_cast<size_t>(threads), 0);
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
    for (int t = 0; t < task_count; ++t) {
      const int tid = omp_get_thread_num();
      OracleCandidate c = enumerate_subset(s, tasks[static_cast<size_t>(t)].h,
                                           tasks[static_cast<size_t>(t)].v,
                                           *tasks[static_cast<size_t>(t)].subset,
                                           &local_evaluated[static_cast<size_t>(tid)]);
      if (c.better_than(local_best[static_cast<size_t>(tid)]))
        local_best[static_cast<size_t>(tid)] = std::move(c);
    }
    for (int t = 0; t < threads; ++t) {
      if (local_best[static_cast<size_t>(t)].better_than(best))
        best = local_best[static_cast<size_t>(t)];
      evaluated += local_evaluated[static_cast<size_t>(t)];
    }
#endif
  } else {
    for (int t = 0; t < task_count; ++t) {
      OracleCandidate c = enumerate_subset(s, tasks[static_cast<size_t>(t)].h,
                                           tasks[static_cast<size_t>(t)].v,
                                           *tasks[static_cast<size_t>(t)].subset, &evaluated);
      if (c.better_than(best)) best = std::move(c);
    }
  }

  if (!best.valid) throw InfeasibleError("oracle enumerated no configuration");
  OracleResult out;
  out.plan = std::move(best.plan);
  out.delay = best.delay;
  out.evaluated = evaluated;
  return out;
}

CompareReport compare(const Scenario& s, const std::vector<int>& candidates,
                      const PlannerConfig& cfg, const OracleBudget& b,
                      std::uint64_t seed) {
  using clock = std::chrono::steady_clock;

  const auto oracle_start = clock::now();
  const OracleResult oracle = exhaustive_best(s, candidates, b, /*jobs=*/1);
  const double oracle_ms =
      std::chrono::duration<double, std::milli>(clock::now() - oracle_start).count();

  PlannerConfig serial_cfg = cfg;
  serial_cfg.jobs = 1;
  PlanDecision heuristic = plan_serial(s, candidates, serial_cfg);
  // repeat the (much faster) heuristic until the total is long enough to time
  int reps = 1;
  auto heur_start = clock::now();
  heuristic = plan_serial(s, candidates, serial_cfg);
  double heur_ms = std::chrono::duration<double, std::milli>(clock::now() - heur_start).count();
  while (heur_ms < 5.0 && reps < 4096) {
    reps *= 4;
    heur_start = clock::now();
    for (int i = 0; i < reps; ++i) heuristic = plan_serial(s, candidates, serial_cfg);
    heur_ms = std::chrono::duration<double, std::milli>(clock::now() - heur_start).count();
  }
  heur_ms /= reps;

  CompareReport r;
  r.seed = seed;
  r.n = s.n();
  r.oracle_t = oracle.delay.t_round;
  r.heuristic_t = heuristic.delay.t_round;
  r.suboptimality_pct = (heuristic.delay.t_round - oracle.delay.t_round) /
                        oracle.delay.t_round * 100.0;
  r.oracle_ms = oracle_ms;
  r.heuristic_ms = heur_ms;
  r.speedup = heur_ms > 0 ? oracle_ms / heur_ms : 0.0;
  return r;
}

}  // namespace hsfl
