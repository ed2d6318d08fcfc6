#pragma once

#include <nlohmann/json_fwd.hpp>

#include "hsfl/plan.hpp"
#include "hsfl/scenario.hpp"

namespace hsfl {

struct DelayBreakdown {
  double t1 = 0.0;
  double t_fp = 0.0;
  double t_s = 0.0;
  double t_bp = 0.0;
  double t2 = 0.0;         // t_fp + t_bp
  double t3 = 0.0;         // == t1 (symmetric links)
  double t_round = 0.0;    // t1 + E*Q*t2 + t3
  double overhead_bytes = 0.0;  // payload bytes per round
};

// Phase-1 model download: max over weak clients of (sum_{l<=h} a_l)/r_{s,n}
// and over aggregators of (sum_{l<=v} a_l)/r_{s,k}.
double t1(const Scenario& s, const Plan& p);

// Worst client FP path: own weak-side FP, g_h upload, the assigned
// aggregator's pooled FP workload, g_v upload to the server.
double t_fp(const Scenario& s, const Plan& p);

// Server-side FP+BP over all clients' tail models: 3*N*sum_{l>v} f_l / p_s.
double t_s(const Scenario& s, const Plan& p);

// max(t_s, worst client BP path): pooled aggregator BP (2x FP), g_h
// download, own weak-side BP (2x FP).
double t_bp(const Scenario& s, const Plan& p);

double round_overhead(const Scenario& s, const Plan& p);

DelayBreakdown round_delay(const Scenario& s, const Plan& p);

namespace detail {
// Same math as round_delay without plan validation; planner and oracle hot
// loops call this with plans they constructed themselves.
DelayBreakdown evaluate_unchecked(const Scenario& s, const Plan& p);
}  // namespace detail

nlohmann::json breakdown_to_json(const DelayBreakdown& b);

}  // namespace hsfl
