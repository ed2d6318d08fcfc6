#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hsfl/oracle.hpp"
#include "hsfl/planner.hpp"

namespace hsfl::cli {

// Options shared by the subcommands; each run_* consumes what it needs.
// The functions throw ParseError / InfeasibleError / BudgetError, which the
// binary maps to exit codes 1 / 2 / 3.
struct Options {
  std::string scenario_path;
  std::string profile_path;   // overrides the scenario's model_profile field
  std::string accuracy_path;  // source of candidate cut layers ...
  std::vector<int> candidates;  // ... or an explicit set
  double thr = 0.02;

  PlannerConfig planner;
  OracleBudget budget;
  std::optional<std::uint64_t> seed;  // overrides generator-block seed
  int jobs = 0;                       // 0 -> all cores

  std::string out_dir = ".";
  std::string format = "json";  // stdout format: json | csv

  // sweep
  std::string sweep_dimension;  // lambda | gamma | n_clients
  std::vector<double> sweep_values;

  // replan
  std::string changes_path;

  // compare
  int batch = 1;

  // simulate
  std::string plan_path;  // evaluate a stored plan instead of planning
};

int run_plan(const Options& opt, std::ostream& out);
int run_sweep(const Options& opt, std::ostream& out);
int run_compare(const Options& opt, std::ostream& out);
int run_replan(const Options& opt, std::ostream& out);
int run_simulate(const Options& opt, std::ostream& out);
int run_validate(const Options& opt, std::ostream& out);

}  // namespace hsfl::cli
