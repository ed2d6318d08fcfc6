#include "hsfl/delay_model.hpp"

#include <algorithm>
#include <vector>

#include <nlohmann/json.hpp>

#include "hsfl/errors.hpp"

namespace hsfl {

namespace {

// Per-plan quantities every term reuses. Pool sizes count the aggregator's
// own model, so the pooled FP workload is pool_count[k] * mid_flops.
struct PlanView {
  int h, v, server;
  double weak_flops;       // sum_{l<=h} f_l
  double mid_flops;        // sum_{h<l<=v} f_l
  double tail_flops;       // sum_{v<l<=L} f_l
  double weak_weights;     // sum_{l<=h} a_l
  double aggr_weights;     // sum_{l<=v} a_l
  double g_h, g_v;
  std::vector<int> pool_count;  // indexed by client id, nonzero only for aggregators

  PlanView(const Scenario& s, const Plan& p) {
    const ModelProfile& m = s.model();
    h = p.aggregator_layer;
    v = p.cut_layer;
    server = s.server_endpoint();
    weak_flops = m.prefix_flops(1, h);
    mid_flops = m.prefix_flops(h + 1, v);
    tail_flops = m.prefix_flops(v + 1, m.layer_count());
    weak_weights = m.prefix_weight_bytes(1, h);
    aggr_weights = m.prefix_weight_bytes(1, v);
    g_h = m.act_bytes_at(h);
    g_v = m.act_bytes_at(v);
    pool_count.assign(static_cast<size_t>(s.n()), 0);
    for (int n = 0; n < s.n(); ++n)
      ++pool_count[static_cast<size_t>(p.assignment[static_cast<size_t>(n)])];
  }

  double pooled_fp_delay(const Scenario& s, int k) const {
    return pool_count[static_cast<size_t>(k)] * mid_flops / s.client(k).throughput;
  }
};

double compute_t1(const Scenario& s, const Plan& p, const PlanView& pv) {
  double worst = 0.0;
  for (int n = 0; n < s.n(); ++n)
    worst = std::max(worst, pv.weak_weights / s.rate(pv.server, n));
  for (int k : p.aggregators)
    worst = std::max(worst, pv.aggr_weights / s.rate(pv.server, k));
  return worst;
}

double compute_t_fp(const Scenario& s, const Plan& p, const PlanView& pv) {
  double worst = 0.0;
  for (int n = 0; n < s.n(); ++n) {
    const int k = p.assignment[static_cast<size_t>(n)];
    const double path = pv.weak_flops / s.client(n).throughput + pv.g_h / s.rate(n, k) +
                        pv.pooled_fp_delay(s, k) + pv.g_v / s.rate(k, pv.server);
    worst = std::max(worst, path);
  }
  return worst;
}

double compute_t_s(const Scenario& s, const PlanView& pv) {
  return 3.0 * s.n() * pv.tail_flops / s.server_throughput();
}

double compute_t_bp(const Scenario& s, const Plan& p, const PlanView& pv) {
  double worst = compute_t_s(s, pv);
  for (int n = 0; n < s.n(); ++n) {
    const int k = p.assignment[static_cast<size_t>(n)];
    const double path = 2.0 * pv.pooled_fp_delay(s, k) + pv.g_h / s.rate(k, n) +
                        2.0 * pv.weak_flops / s.client(n).throughput;
    worst = std::max(worst, path);
  }
  return worst;
}

double compute_overhead(const Scenario& s, const Plan& p, const PlanView& pv) {
  double model_bytes = 0.0;
  for (int n = 0; n < s.n(); ++n)
    model_bytes += p.is_aggregator(n) ? pv.aggr_weights : pv.weak_weights;
  double batch_bytes = 0.0;
  for (int n = 0; n < s.n(); ++n) {
    if (p.assignment[static_cast<size_t>(n)] != n) batch_bytes += 2.0 * pv.g_h;
    batch_bytes += pv.g_v;
  }
  const double eq = static_cast<double>(s.epochs_per_round()) *
                    static_cast<double>(s.batch_executions());
  return 2.0 * model_bytes + eq * batch_bytes;
}

DelayBreakdown assemble(const Scenario& s, const Plan& p) {
  const PlanView pv(s, p);
  DelayBreakdown b;
  b.t1 = compute_t1(s, p, pv);
  b.t_fp = compute_t_fp(s, p, pv);
  b.t_s = compute_t_s(s, pv);
  b.t_bp = compute_t_bp(s, p, pv);
  b.t2 = b.t_fp + b.t_bp;
  b.t3 = b.t1;
  const double eq = static_cast<double>(s.epochs_per_round()) *
                    static_cast<double>(s.batch_executions());
  b.t_round = b.t1 + eq * b.t2 + b.t3;
  b.overhead_bytes = compute_overhead(s, p, pv);
  return b;
}

}  // namespace

double t1(const Scenario& s, const Plan& p) {
  validate_plan(s, p);
  return compute_t1(s, p, PlanView(s, p));
}

double t_fp(const Scenario& s, const Plan& p) {
  validate_plan(s, p);
  return compute_t_fp(s, p, PlanView(s, p));
}

double t_s(const Scenario& s, const Plan& p) {
  validate_plan(s, p);
  return compute_t_s(s, PlanView(s, p));
}

double t_bp(const Scenario& s, const Plan& p) {
  validate_plan(s, p);
  return compute_t_bp(s, p, PlanView(s, p));
}

double round_overhead(const Scenario& s, const Plan& p) {
  validate_plan(s, p);
  return compute_overhead(s, p, PlanView(s, p));
}

DelayBreakdown round_delay(const Scenario& s, const Plan& p) {
  validate_plan(s, p);
  return assemble(s, p);
}

namespace detail {
DelayBreakdown evaluate_unchecked(const Scenario& s, const Plan& p) {
  return assemble(s, p);
}
}  // namespace detail

nlohmann::json breakdown_to_json(const DelayBreakdown& b) {
  return {{"t1", b.t1},           {"t_fp", b.t_fp},
          {"t_s", b.t_s},         {"t_bp", b.t_bp},
          {"t2", b.t2},           {"t3", b.t3},
          {"t_round", b.t_round}, {"overhead_bytes", b.overhead_bytes}};
}

}  // namespace hsfl
