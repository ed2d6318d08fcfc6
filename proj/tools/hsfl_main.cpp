#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hsfl/cli.hpp"
#include "hsfl/errors.hpp"

namespace {

void add_common_flags(CLI::App* cmd, hsfl::cli::Options& opt, bool needs_candidates) {
  cmd->add_option("--scenario", opt.scenario_path, "scenario JSON document")->required();
  cmd->add_option("--profile", opt.profile_path,
                  "model profile JSON (overrides the scenario's model_profile)");
  if (needs_candidates) {
    cmd->add_option("--accuracy", opt.accuracy_path, "accuracy profile JSON");
    cmd->add_option("--candidates", opt.candidates, "explicit candidate cut layers")
        ->delimiter(',');
    cmd->add_option("--thr", opt.thr, "accuracy tolerance for candidate selection");
  }
  cmd->add_option("--seed", opt.seed, "overrides the scenario generator seed");
  cmd->add_option("--jobs", opt.jobs, "worker threads (0 = all cores)");
  cmd->add_option("--out-dir", opt.out_dir, "report directory");
  cmd->add_option("--format", opt.format, "stdout format")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--delta", opt.planner.delta, "balance-loop stop threshold");
  cmd->add_option("--lambda-step", opt.planner.lambda_step, "aggregator-fraction step");
}

void add_budget_flags(CLI::App* cmd, hsfl::cli::Options& opt) {
  cmd->add_option("--max-clients", opt.budget.max_clients, "oracle client cap");
  cmd->add_option("--max-aggr-set", opt.budget.max_aggregator_set_size,
                  "oracle aggregator-subset size cap");
  cmd->add_option("--enum-cap", opt.budget.enumeration_cap,
                  "oracle configuration-count guard");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"planning toolkit for hierarchical split federated learning"};
  app.require_subcommand(1);

  hsfl::cli::Options opt;

  CLI::App* plan = app.add_subcommand("plan", "select (h, v, aggregators, assignment)");
  add_common_flags(plan, opt, true);

  CLI::App* sweep = app.add_subcommand("sweep", "sweep lambda, gamma or n_clients");
  add_common_flags(sweep, opt, true);
  sweep->add_option("--dimension", opt.sweep_dimension, "lambda | gamma | n_clients")
      ->required();
  sweep->add_option("--values", opt.sweep_values, "sweep points")->delimiter(',');

  CLI::App* compare = app.add_subcommand("compare", "heuristic vs exhaustive oracle");
  add_common_flags(compare, opt, true);
  add_budget_flags(compare, opt);
  compare->add_option("--batch", opt.batch, "seeded instances (generator scenarios)");

  CLI::App* replan = app.add_subcommand("replan", "replanning under system changes");
  add_common_flags(replan, opt, true);
  replan->add_option("--changes", opt.changes_path, "system-change JSON document")
      ->required();

  CLI::App* simulate = app.add_subcommand("simulate", "event-driven round simulation");
  add_common_flags(simulate, opt, true);
  simulate->add_option("--plan", opt.plan_path, "stored plan JSON (skips planning)");

  CLI::App* validate = app.add_subcommand("validate", "check documents and plans");
  add_common_flags(validate, opt, true);
  validate->add_option("--plan", opt.plan_path, "plan JSON to validate");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(plan)) return hsfl::cli::run_plan(opt, std::cout);
    if (app.got_subcommand(sweep)) return hsfl::cli::run_sweep(opt, std::cout);
    if (app.got_subcommand(compare)) return hsfl::cli::run_compare(opt, std::cout);
    if (app.got_subcommand(replan)) return hsfl::cli::run_replan(opt, std::cout);
    if (app.got_subcommand(simulate)) return hsfl::cli::run_simulate(opt, std::cout);
    if (app.got_subcommand(validate)) return hsfl::cli::run_validate(opt, std::cout);
  } catch (const hsfl::BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const hsfl::InfeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const hsfl::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
