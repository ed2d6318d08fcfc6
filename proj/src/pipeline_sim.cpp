#include "hsfl/pipeline_sim.hpp"

#include <algorithm>
#include <tuple>

#include <nlohmann/json.hpp>

#include "hsfl/errors.hpp"
#include "hsfl/report.hpp"

namespace hsfl {

const char* task_kind_name(TaskKind k) {
  switch (k) {
    case TaskKind::model_download: return "model_download";
    case TaskKind::weak_fp: return "weak_fp";
    case TaskKind::act_upload: return "act_upload";
    case TaskKind::aggr_fp: return "aggr_fp";
    case TaskKind::cut_upload: return "cut_upload";
    case TaskKind::server_fp_bp: return "server_fp_bp";
    case TaskKind::aggr_bp: return "aggr_bp";
    case TaskKind::grad_download: return "grad_download";
    case TaskKind::weak_bp: return "weak_bp";
    case TaskKind::model_upload: return "model_upload";
  }
  return "unknown";
}

TaskTrace simulate_round(const Scenario& s, const Plan& p) {
  validate_plan(s, p);
  const ModelProfile& m = s.model();
  const int n = s.n();
  const int server = s.server_endpoint();
  const int h = p.aggregator_layer;
  const int v = p.cut_layer;

  const double weak_flops = m.prefix_flops(1, h);
  const double mid_flops = m.prefix_flops(h + 1, v);
  const double tail_flops = m.prefix_flops(v + 1, m.layer_count());
  const double weak_weights = m.prefix_weight_bytes(1, h);
  const double aggr_weights = m.prefix_weight_bytes(1, v);
  const double g_h = m.act_bytes_at(h);
  const double g_v = m.act_bytes_at(v);

  std::vector<int> pool_count(static_cast<size_t>(n), 0);
  for (int cl = 0; cl < n; ++cl)
    ++pool_count[static_cast<size_t>(p.assignment[static_cast<size_t>(cl)])];

  TaskTrace trace;
  auto emit = [&](int actor, TaskKind kind, double start, double duration,
                  long long batch, int client) {
    trace.tasks.push_back({actor, kind, start, start + duration, batch, client});
    return start + duration;
  };

  // phase 1: per-recipient downloads, independent links
  double phase2_start = 0.0;
  for (int cl = 0; cl < n; ++cl) {
    const double bytes = p.is_aggregator(cl) ? aggr_weights : weak_weights;
    const double end = emit(server, TaskKind::model_download, 0.0,
                            bytes / s.rate(server, cl), -1, cl);
    phase2_start = std::max(phase2_start, end);
  }

  const long long batches = static_cast<long long>(s.epochs_per_round()) *
                            s.batch_executions();
  double barrier = phase2_start;
  for (long long batch = 0; batch < batches; ++batch) {
    // FP stage: weak FP -> g_h to aggregator -> pooled aggregator FP
    // (waits for the whole pool) -> per-client g_v to the server
    std::vector<double> gh_arrival(static_cast<size_t>(n), 0.0);
    for (int cl = 0; cl < n; ++cl) {
      const int k = p.assignment[static_cast<size_t>(cl)];
      const double fp_end = emit(cl, TaskKind::weak_fp, barrier,
                                 weak_flops / s.client(cl).throughput, batch, cl);
      gh_arrival[static_cast<size_t>(cl)] =
          emit(cl, TaskKind::act_upload, fp_end, g_h / s.rate(cl, k), batch, cl);
    }
    std::vector<double> aggr_fp_end(static_cast<size_t>(n), 0.0);
    for (int k : p.aggregators) {
      double ready = 0.0;
      for (int cl = 0; cl < n; ++cl)
        if (p.assignment[static_cast<size_t>(cl)] == k)
          ready = std::max(ready, gh_arrival[static_cast<size_t>(cl)]);
      aggr_fp_end[static_cast<size_t>(k)] =
          emit(k, TaskKind::aggr_fp, ready,
               pool_count[static_cast<size_t>(k)] * mid_flops / s.client(k).throughput,
               batch, -1);
    }
    double fp_barrier = 0.0;
    for (int cl = 0; cl < n; ++cl) {
      const int k = p.assignment[static_cast<size_t>(cl)];
      const double end = emit(k, TaskKind::cut_upload, aggr_fp_end[static_cast<size_t>(k)],
                              g_v / s.rate(k, server), batch, cl);
      fp_barrier = std::max(fp_barrier, end);
    }

    // BP stage, from the global FP barrier: the pooled server task runs in
    // parallel with each aggregator's local-loss BP chain
    double bp_barrier = emit(server, TaskKind::server_fp_bp, fp_barrier,
                             3.0 * n * tail_flops / s.server_throughput(), batch, -1);
    std::vector<double> aggr_bp_end(static_cast<size_t>(n), 0.0);
    for (int k : p.aggregators)
      aggr_bp_end[static_cast<size_t>(k)] =
          emit(k, TaskKind::aggr_bp, fp_barrier,
               2.0 * pool_count[static_cast<size_t>(k)] * mid_flops /
                   s.client(k).throughput,
               batch, -1);
    for (int cl = 0; cl < n; ++cl) {
      const int k = p.assignment[static_cast<size_t>(cl)];
      const double grad_end = emit(k, TaskKind::grad_download,
                                   aggr_bp_end[static_cast<size_t>(k)],
                                   g_h / s.rate(k, cl), batch, cl);
      const double end = emit(cl, TaskKind::weak_bp, grad_end,
                              2.0 * weak_flops / s.client(cl).throughput, batch, cl);
      bp_barrier = std::max(bp_barrier, end);
    }
    barrier = bp_barrier;  // lockstep batches
  }

  // phase 3 mirrors phase 1 over symmetric links
  double makespan = barrier;
  for (int cl = 0; cl < n; ++cl) {
    const double bytes = p.is_aggregator(cl) ? aggr_weights : weak_weights;
    const double end = emit(cl, TaskKind::model_upload, barrier,
                            bytes / s.rate(cl, server), -1, cl);
    makespan = std::max(makespan, end);
  }
  trace.makespan = makespan;

  std::sort(trace.tasks.begin(), trace.tasks.end(),
            [](const TaskRecord& a, const TaskRecord& b) {
              return std::tie(a.start, a.actor, a.kind, a.batch, a.client) <
                     std::tie(b.start, b.actor, b.kind, b.batch, b.client);
            });
  return trace;
}

nlohmann::json trace_to_json(const TaskTrace& t) {
  nlohmann::json tasks = nlohmann::json::array();
  for (const TaskRecord& r : t.tasks)
    tasks.push_back({{"actor", r.actor},
                     {"kind", task_kind_name(r.kind)},
                     {"start", r.start},
                     {"end", r.end},
                     {"batch", r.batch},
                     {"client", r.client}});
  return {{"makespan", t.makespan}, {"tasks", tasks}};
}

std::string trace_to_csv(const TaskTrace& t) {
  std::string out = "actor,kind,start,end,batch,client\n";
  for (const TaskRecord& r : t.tasks) {
    out += std::to_string(r.actor);
    out += ',';
    out += task_kind_name(r.kind);
    out += ',';
    out += format_double(r.start);
    out += ',';
    out += format_double(r.end);
    out += ',';
    out += std::to_string(r.batch);
    out += ',';
    out += std::to_string(r.client);
    out += '\n';
  }
  return out;
}

}  // namespace hsfl
