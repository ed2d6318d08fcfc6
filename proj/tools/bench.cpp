// Benchmark comparing the serial reference implementations against the
// OpenMP-parallel entry points on growing instances. Informational only;
// correctness equivalence is asserted in the test suite.

#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hsfl/cut_selector.hpp"
#include "hsfl/model_profile.hpp"
#include "hsfl/oracle.hpp"
#include "hsfl/planner.hpp"
#include "hsfl/scenario.hpp"

using namespace hsfl;

namespace {

ModelProfilePtr bench_model(int layer_count) {
  std::vector<LayerProfile> layers;
  for (int i = 1; i <= layer_count; ++i) {
    LayerProfile l;
    l.index = i;
    l.flops_fp = 2e8 + 3e7 * (i % 5);
    l.weight_bytes = 1e5 * i;
    l.act_bytes = 4e5 + 1e5 * ((layer_count - i) % 4);
    layers.push_back(l);
  }
  return std::make_shared<ModelProfile>("bench", 32, std::move(layers));
}

template <typename F>
double time_ms(F&& fn, int reps) {
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  const auto end = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(end - start).count() / reps;
}

}  // namespace

int main() {
#ifdef _OPENMP
  const int threads = omp_get_max_threads();
#else
  const int threads = 1;
#endif
  std::printf("threads available: %d\n\n", threads);

  ModelProfilePtr model = bench_model(19);
  std::vector<int> candidates;
  for (int v = 4; v <= 18; ++v) candidates.push_back(v);

  std::printf("planner: serial vs parallel over %zu cut-layer branches\n",
              candidates.size());
  std::printf("%8s %14s %14s %10s\n", "N", "serial ms", "parallel ms", "speedup");
  for (int n : {20, 40, 80, 160}) {
    ScenarioGenParams params;
    params.n_clients = n;
    params.seed = 11;
    const Scenario s = generate_scenario(params, model);
    PlannerConfig cfg;
    const int reps = n <= 40 ? 20 : 5;
    const double serial = time_ms([&] { (void)plan_serial(s, candidates, cfg); }, reps);
    PlannerConfig par = cfg;
    par.jobs = 0;
    const double parallel = time_ms([&] { (void)plan(s, candidates, par); }, reps);
    std::printf("%8d %14.3f %14.3f %9.2fx\n", n, serial, parallel, serial / parallel);
  }

  std::printf("\noracle: serial vs parallel subset enumeration (K <= 3)\n");
  std::printf("%8s %14s %14s %10s %14s\n", "N", "serial ms", "parallel ms", "speedup",
              "configs");
  for (int n : {6, 7, 8}) {
    ScenarioGenParams params;
    params.n_clients = n;
    params.seed = 11;
    const Scenario s = generate_scenario(params, model);
    OracleBudget budget;
    budget.max_clients = n;
    std::vector<int> cands{6, 10, 14};
    OracleResult r = exhaustive_best(s, cands, budget, 1);
    const double serial = time_ms([&] { (void)exhaustive_best(s, cands, budget, 1); }, 3);
    const double parallel = time_ms([&] { (void)exhaustive_best(s, cands, budget, 0); }, 3);
    std::printf("%8d %14.3f %14.3f %9.2fx %14lld\n", n, serial, parallel,
                serial / parallel, r.evaluated);
  }
  return 0;
}
