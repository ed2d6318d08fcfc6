#pragma once

// Test-only delay evaluator written straight from the round-delay formulas
// before the main implementation, over the expanded x[n][k][l] variables
// and with every sum spelled out. Deliberately slow and independent of the
// library's evaluation path; unit and acceptance tests compare the two.

#include <algorithm>
#include <vector>

#include "hsfl/delay_model.hpp"
#include "hsfl/plan.hpp"
#include "hsfl/scenario.hpp"

namespace hsfl::testing {

struct FormulaDelays {
  double t1 = 0, t_fp = 0, t_s = 0, t_bp = 0, t2 = 0, t3 = 0, t_round = 0;
  double overhead_bytes = 0;
};

inline FormulaDelays formula_round_delay(const Scenario& s, const Plan& p) {
  const ModelProfile& m = s.model();
  const int n_clients = s.n();
  const int layer_count = m.layer_count();
  const int h = p.aggregator_layer;
  const int v = p.cut_layer;
  const int server = s.server_endpoint();
  const AssignmentTensor x = expand_plan(p, n_clients, layer_count);

  auto sum_a = [&](int lo, int hi) {
    double acc = 0;
    for (int l = lo; l <= hi; ++l) acc += m.layer(l).weight_bytes;
    return acc;
  };
  auto sum_f = [&](int lo, int hi) {
    double acc = 0;
    for (int l = lo; l <= hi; ++l) acc += m.layer(l).flops_fp;
    return acc;
  };
  const double g_h = m.layer(h).act_bytes;
  const double g_v = m.layer(v).act_bytes;

  // T1: max download over all clients (weak-side model) and all aggregators
  // (weak- plus aggregator-side models).
  double t1 = 0;
  for (int n = 0; n < n_clients; ++n)
    t1 = std::max(t1, sum_a(1, h) / s.rate(server, n));
  for (int k : p.aggregators)
    t1 = std::max(t1, sum_a(1, v) / s.rate(server, k));

  // Pooled aggregator-side FP workload seen from aggregator k.
  auto pooled_flops = [&](int k) {
    double acc = 0;
    for (int mcl = 0; mcl < n_clients; ++mcl)
      for (int l = h + 1; l <= v; ++l)
        if (x.at(mcl, k, l)) acc += m.layer(l).flops_fp;
    return acc;
  };

  double t_fp = 0;
  for (int n = 0; n < n_clients; ++n) {
    double path = sum_f(1, h) / s.client(n).throughput;
    for (int k = 0; k < n_clients; ++k) {
      if (!x.at(n, k, h + 1)) continue;
      path += g_h / s.rate(n, k);
      path += pooled_flops(k) / s.client(k).throughput;
      path += g_v / s.rate(k, server);
    }
    t_fp = std::max(t_fp, path);
  }

  double t_s = 0;
  for (int n = 0; n < n_clients; ++n) t_s += 3.0 * sum_f(v + 1, layer_count);
  t_s /= s.server_throughput();

  double t_bp = t_s;
  for (int n = 0; n < n_clients; ++n) {
    double path = 2.0 * sum_f(1, h) / s.client(n).throughput;
    for (int k = 0; k < n_clients; ++k) {
      if (!x.at(n, k, h + 1)) continue;
      path += 2.0 * pooled_flops(k) / s.client(k).throughput;
      path += g_h / s.rate(k, n);
    }
    t_bp = std::max(t_bp, path);
  }

  const double t2 = t_fp + t_bp;
  const double t3 = t1;
  const double eq = static_cast<double>(s.epochs_per_round()) *
                    static_cast<double>(s.batch_executions());
  const double t_round = t1 + eq * t2 + t3;

  // Overhead: phase-1 and phase-3 model bytes plus per-batch g_h/g_v
  // payloads; self links carry nothing.
  double model_bytes = 0;
  for (int n = 0; n < n_clients; ++n)
    model_bytes += p.is_aggregator(n) ? sum_a(1, v) : sum_a(1, h);
  double batch_bytes = 0;
  for (int n = 0; n < n_clients; ++n) {
    if (p.assignment[static_cast<size_t>(n)] != n) batch_bytes += 2.0 * g_h;
    batch_bytes += g_v;
  }
  const double overhead = 2.0 * model_bytes + eq * batch_bytes;

  FormulaDelays out;
  out.t1 = t1;
  out.t_fp = t_fp;
  out.t_s = t_s;
  out.t_bp = t_bp;
  out.t2 = t2;
  out.t3 = t3;
  out.t_round = t_round;
  out.overhead_bytes = overhead;
  return out;
}

}  // namespace hsfl::testing
