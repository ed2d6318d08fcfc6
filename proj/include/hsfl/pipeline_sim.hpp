#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "hsfl/plan.hpp"
#include "hsfl/scenario.hpp"

namespace hsfl {

enum class TaskKind {
  model_download,  // phase 1, server -> recipient
  weak_fp,
  act_upload,    // g_h, client -> aggregator
  aggr_fp,       // pooled, one task per aggregator per batch
  cut_upload,    // g_v, aggregator -> server, one per assigned client
  server_fp_bp,  // pooled server-side FP+BP
  aggr_bp,       // pooled, 2x FP workload
  grad_download,  // g_h, aggregator -> client
  weak_bp,
  model_upload,  // phase 3, recipient -> server
};

const char* task_kind_name(TaskKind k);

struct TaskRecord {
  int actor = 0;  // executing/sending endpoint (server = N)
  TaskKind kind = TaskKind::weak_fp;
  double start = 0.0;
  double end = 0.0;
  long long batch = -1;  // -1 for phase 1/3 transfers
  int client = -1;       // whose model the task belongs to (-1 = pooled)
};

struct TaskTrace {
  std::vector<TaskRecord> tasks;  // ordered by (start, actor, kind, batch, client)
  double makespan = 0.0;
};

// One round under the equations' synchronization semantics: E*Q lockstep
// batch executions bracketed by the phase-1/3 model transfers. Within a
// batch, an aggregator's pooled FP waits for every assigned client's g_h;
// the BP stage starts at the global FP barrier, with the server task
// running in parallel with the aggregator-side BP chains. The makespan is
// an independent check of round_delay.t_round.
TaskTrace simulate_round(const Scenario& s, const Plan& p);

nlohmann::json trace_to_json(const TaskTrace& t);
std::string trace_to_csv(const TaskTrace& t);

}  // namespace hsfl
