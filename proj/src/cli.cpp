#include "hsfl/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hsfl/cut_selector.hpp"
#include "hsfl/errors.hpp"
#include "hsfl/pipeline_sim.hpp"
#include "hsfl/report.hpp"

namespace hsfl::cli {

namespace {

nlohmann::json read_json_file(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw ParseError(std::string("cannot open ") + what + " file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string(what) + " file " + path + ": " + e.what());
  }
  return doc;
}

std::string resolve_sibling(const std::string& path, const std::string& anchor_file) {
  namespace fs = std::filesystem;
  if (fs::exists(path) || anchor_file.empty()) return path;
  const fs::path sibling = fs::path(anchor_file).parent_path() / path;
  if (fs::exists(sibling)) return sibling.string();
  return path;
}

struct LoadedInputs {
  nlohmann::json scenario_doc;
  ModelProfilePtr model;
  Scenario scenario;
};

LoadedInputs load_inputs(const Options& opt) {
  if (opt.scenario_path.empty()) throw ParseError("missing --scenario");
  nlohmann::json doc = read_json_file(opt.scenario_path, "scenario");

  std::string profile_path = opt.profile_path;
  if (profile_path.empty() && doc.is_object() && doc.contains("model_profile"))
    profile_path = doc["model_profile"].get<std::string>();
  if (profile_path.empty())
    throw ParseError("no model profile: pass --profile or set model_profile in the scenario");
  profile_path = resolve_sibling(profile_path, opt.scenario_path);
  auto model = std::make_shared<ModelProfile>(load_profile_file(profile_path));

  if (opt.seed) {
    if (doc.is_object() && doc.contains("generator")) doc["generator"]["seed"] = *opt.seed;
    if (doc.is_object() && doc.contains("links") && doc["links"].is_object() &&
        doc["links"].contains("lo"))
      doc["links"]["seed"] = *opt.seed;
  }

  Scenario scenario = load_scenario(doc, model);
  return {std::move(doc), std::move(model), std::move(scenario)};
}

std::vector<int> resolve_candidates(const Options& opt, const ModelProfile& model) {
  const int layer_count = model.layer_count();
  if (!opt.candidates.empty()) {
    for (int v : opt.candidates)
      if (v < 2 || v > layer_count - 1)
        throw ParseError("--candidates layer " + std::to_string(v) +
                         " outside the model's cut range 2.." + std::to_string(layer_count - 1));
    return opt.candidates;
  }
  if (opt.accuracy_path.empty())
    throw ParseError("candidate cut layers unavailable: pass --accuracy or --candidates");
  const AccuracyProfile acc = load_accuracy_profile_file(opt.accuracy_path);
  if (acc.layer_lo() < 2 || acc.layer_hi() > layer_count - 1)
    throw ParseError("accuracy profile layers " + std::to_string(acc.layer_lo()) + ".." +
                     std::to_string(acc.layer_hi()) + " are inconsistent with model L=" +
                     std::to_string(layer_count));
  return acc.candidate_cut_layers(opt.thr);
}

PlannerConfig planner_config(const Options& opt) {
  PlannerConfig cfg = opt.planner;
  cfg.jobs = opt.jobs;
  return cfg;
}

nlohmann::json config_json(const Options& opt) {
  nlohmann::json cfg{{"delta", opt.planner.delta},
                     {"lambda_step", opt.planner.lambda_step},
                     {"thr", opt.thr},
                     {"jobs", opt.jobs},
                     {"format", opt.format}};
  if (opt.seed) cfg["seed"] = *opt.seed;
  return cfg;
}

void write_file(const std::string& out_dir, const std::string& name,
                const std::string& content) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const fs::path path = fs::path(out_dir) / name;
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << content;
}

std::string json_text(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

}  // namespace

int run_plan(const Options& opt, std::ostream& out) {
  LoadedInputs in = load_inputs(opt);
  const std::vector<int> candidates = resolve_candidates(opt, *in.model);
  const PlanDecision decision = plan(in.scenario, candidates, planner_config(opt));

  nlohmann::json report{{"command", "plan"},
                        {"scenario_digest", scenario_digest(in.scenario)},
                        {"model", in.model->name()},
                        {"n_clients", in.scenario.n()},
                        {"candidates", candidates},
                        {"config", config_json(opt)},
                        {"decision", decision_to_json(decision)}};
  const std::string csv =
      std::string(kDecisionCsvHeader) + "\n" +
      decision_csv_row(decision.plan.aggregator_layer, decision.plan.cut_layer,
                       decision.lambda, decision.delay) +
      "\n";
  write_file(opt.out_dir, "report.json", json_text(report));
  write_file(opt.out_dir, "decision.csv", csv);
  out << (opt.format == "csv" ? csv : json_text(report));
  return 0;
}

namespace {

Scenario with_heterogeneity(const Scenario& s, double gamma) {
  if (!(gamma >= 1.0)) throw ParseError("gamma sweep values must be >= 1");
  std::vector<ClientSpec> clients = s.clients();
  double pmax = 0.0;
  for (const ClientSpec& c : clients) pmax = std::max(pmax, c.throughput);
  for (ClientSpec& c : clients)
    if (c.throughput < pmax) c.throughput = pmax / gamma;
  return Scenario(std::move(clients), s.server_throughput(), s.epochs_per_round(),
                  s.model_ptr(), s.rate_table());
}

}  // namespace

int run_sweep(const Options& opt, std::ostream& out) {
  if (opt.sweep_dimension != "lambda" && opt.sweep_dimension != "gamma" &&
      opt.sweep_dimension != "n_clients")
    throw ParseError("--sweep must be lambda, gamma or n_clients");
  LoadedInputs in = load_inputs(opt);
  const std::vector<int> candidates = resolve_candidates(opt, *in.model);

  struct Row {
    double value;
    PlanDecision decision;
  };
  std::vector<Row> rows;
  for (double value : opt.sweep_values) {
    PlannerConfig cfg = planner_config(opt);
    if (opt.sweep_dimension == "lambda") {
      if (!(value > 0.0) || value > 1.0)
        throw ParseError("lambda sweep values must lie in (0,1]");
      cfg.pinned_lambda = value;
      rows.push_back({value, plan(in.scenario, candidates, cfg)});
    } else if (opt.sweep_dimension == "gamma") {
      rows.push_back({value, plan(with_heterogeneity(in.scenario, value), candidates, cfg)});
    } else {
      if (!in.scenario_doc.is_object() || !in.scenario_doc.contains("generator"))
        throw ParseError("n_clients sweep needs a generator-based scenario document");
      nlohmann::json doc = in.scenario_doc;
      doc["generator"]["n_clients"] = static_cast<int>(value);
      rows.push_back({value, plan(load_scenario(doc, in.model), candidates, cfg)});
    }
  }

  std::string csv = opt.sweep_dimension + "," + kDecisionCsvHeader + "\n";
  nlohmann::json json_rows = nlohmann::json::array();
  for (const Row& r : rows) {
    csv += format_double(r.value) + "," +
           decision_csv_row(r.decision.plan.aggregator_layer, r.decision.plan.cut_layer,
                            r.decision.lambda, r.decision.delay) +
           "\n";
    nlohmann::json jr = decision_to_json(r.decision);
    jr[opt.sweep_dimension] = r.value;
    json_rows.push_back(jr);
  }
  write_file(opt.out_dir, "sweep.csv", csv);
  nlohmann::json report{{"command", "sweep"},
                        {"dimension", opt.sweep_dimension},
                        {"scenario_digest", scenario_digest(in.scenario)},
                        {"config", config_json(opt)},
                        {"rows", json_rows}};
  write_file(opt.out_dir, "sweep.json", json_text(report));
  out << (opt.format == "csv" ? csv : json_text(report));
  return 0;
}

int run_compare(const Options& opt, std::ostream& out) {
  LoadedInputs in = load_inputs(opt);
  const std::vector<int> candidates = resolve_candidates(opt, *in.model);
  if (opt.batch < 1) throw ParseError("--batch must be >= 1");
  if (opt.batch > 1 &&
      (!in.scenario_doc.is_object() || !in.scenario_doc.contains("generator")))
    throw ParseError("batched compare needs a generator-based scenario document");

  const std::uint64_t base_seed =
      opt.seed ? *opt.seed
               : (in.scenario_doc.is_object() && in.scenario_doc.contains("generator")
                      ? in.scenario_doc["generator"].value("seed", 0ULL)
                      : 0ULL);

  std::string csv = "seed,N,oracle_t,heuristic_t,suboptimality_pct,oracle_ms,heuristic_ms,speedup\n";
  nlohmann::json json_rows = nlohmann::json::array();
  for (int i = 0; i < opt.batch; ++i) {
    Scenario instance = in.scenario;
    std::uint64_t seed = base_seed;
    if (i > 0) {
      nlohmann::json doc = in.scenario_doc;
      seed = base_seed + static_cast<std::uint64_t>(i);
      doc["generator"]["seed"] = seed;
      instance = load_scenario(doc, in.model);
    }
    const CompareReport r = compare(instance, candidates, planner_config(opt), opt.budget, seed);
    csv += std::to_string(r.seed) + "," + std::to_string(r.n) + "," + format_double(r.oracle_t) +
           "," + format_double(r.heuristic_t) + "," + format_double(r.suboptimality_pct) + "," +
           format_double(r.oracle_ms) + "," + format_double(r.heuristic_ms) + "," +
           format_double(r.speedup) + "\n";
    json_rows.push_back({{"seed", r.seed},
                         {"N", r.n},
                         {"oracle_t", r.oracle_t},
                         {"heuristic_t", r.heuristic_t},
                         {"suboptimality_pct", r.suboptimality_pct},
                         {"oracle_ms", r.oracle_ms},
                         {"heuristic_ms", r.heuristic_ms},
                         {"speedup", r.speedup}});
  }
  write_file(opt.out_dir, "compare.csv", csv);
  nlohmann::json report{{"command", "compare"},
                        {"scenario_digest", scenario_digest(in.scenario)},
                        {"config", config_json(opt)},
                        {"rows", json_rows}};
  write_file(opt.out_dir, "compare.json", json_text(report));
  out << (opt.format == "json" ? json_text(report) : csv);
  return 0;
}

int run_replan(const Options& opt, std::ostream& out) {
  LoadedInputs in = load_inputs(opt);
  const std::vector<int> candidates = resolve_candidates(opt, *in.model);
  if (opt.changes_path.empty()) throw ParseError("missing --changes");
  const nlohmann::json changes_doc = read_json_file(opt.changes_path, "changes");
  std::vector<std::vector<SystemChange>> experiments = load_change_experiments(changes_doc);

  const PlannerConfig cfg = planner_config(opt);
  const PlanDecision baseline = plan(in.scenario, candidates, cfg);
  const double base_t = baseline.delay.t_round;

  auto change_label = [](const std::vector<SystemChange>& group) {
    if (group.empty()) return std::string("none");
    std::string label;
    for (const SystemChange& c : group) {
      if (!label.empty()) label += "+";
      label += c.kind == SystemChange::Kind::throughput_scale ? "throughput_scale"
                                                              : "link_rate_override";
    }
    return label;
  };

  std::string csv = "change,fixed_delta_pct,replanned_delta_pct\n";
  nlohmann::json json_rows = nlohmann::json::array();
  if (experiments.empty()) experiments.push_back({});
  for (const auto& group : experiments) {
    const Scenario changed = apply_changes(in.scenario, group);
    const double fixed_t = detail::evaluate_unchecked(changed, baseline.plan).t_round;
    const PlanDecision replanned = plan(changed, candidates, cfg);
    const double fixed_delta = (fixed_t - base_t) / base_t * 100.0;
    const double replanned_delta = (replanned.delay.t_round - base_t) / base_t * 100.0;
    csv += change_label(group) + "," + format_double(fixed_delta) + "," +
           format_double(replanned_delta) + "\n";
    json_rows.push_back({{"change", change_label(group)},
                         {"fixed_delta_pct", fixed_delta},
                         {"replanned_delta_pct", replanned_delta}});
  }
  write_file(opt.out_dir, "replan.csv", csv);
  nlohmann::json report{{"command", "replan"},
                        {"scenario_digest", scenario_digest(in.scenario)},
                        {"baseline", decision_to_json(baseline)},
                        {"config", config_json(opt)},
                        {"rows", json_rows}};
  write_file(opt.out_dir, "replan.json", json_text(report));
  out << (opt.format == "json" ? json_text(report) : csv);
  return 0;
}

int run_simulate(const Options& opt, std::ostream& out) {
  LoadedInputs in = load_inputs(opt);
  Plan p;
  if (!opt.plan_path.empty()) {
    p = plan_from_json(read_json_file(opt.plan_path, "plan"));
    validate_plan(in.scenario, p);
  } else {
    const std::vector<int> candidates = resolve_candidates(opt, *in.model);
    p = plan(in.scenario, candidates, planner_config(opt)).plan;
  }
  const TaskTrace trace = simulate_round(in.scenario, p);
  const DelayBreakdown analytic = round_delay(in.scenario, p);
  const double rel = std::abs(trace.makespan - analytic.t_round) /
                     std::max(1.0, std::abs(analytic.t_round));

  write_file(opt.out_dir, "trace.json", json_text(trace_to_json(trace)));
  write_file(opt.out_dir, "trace.csv", trace_to_csv(trace));
  nlohmann::json report{{"command", "simulate"},
                        {"scenario_digest", scenario_digest(in.scenario)},
                        {"plan", plan_to_json(p)},
                        {"makespan", trace.makespan},
                        {"analytic_t_round", analytic.t_round},
                        {"relative_difference", rel},
                        {"tasks", trace.tasks.size()}};
  out << json_text(report);
  return 0;
}

int run_validate(const Options& opt, std::ostream& out) {
  LoadedInputs in = load_inputs(opt);
  out << "scenario OK: N=" << in.scenario.n() << " E=" << in.scenario.epochs_per_round()
      << " Q=" << in.scenario.batch_executions()
      << " gamma=" << format_double(in.scenario.heterogeneity()) << "\n";
  out << "model OK: " << in.model->name() << " L=" << in.model->layer_count()
      << " batch=" << in.model->batch_size() << "\n";
  if (!opt.accuracy_path.empty()) {
    const AccuracyProfile acc = load_accuracy_profile_file(opt.accuracy_path);
    if (acc.layer_lo() < 2 || acc.layer_hi() > in.model->layer_count() - 1)
      throw ParseError("accuracy profile layers " + std::to_string(acc.layer_lo()) + ".." +
                       std::to_string(acc.layer_hi()) + " are inconsistent with model L=" +
                       std::to_string(in.model->layer_count()));
    const std::vector<int> candidates = acc.candidate_cut_layers(opt.thr);
    out << "accuracy OK: layers " << acc.layer_lo() << ".." << acc.layer_hi()
        << " candidates={";
    for (size_t i = 0; i < candidates.size(); ++i)
      out << (i ? "," : "") << candidates[i];
    out << "}\n";
  }
  if (!opt.plan_path.empty()) {
    const Plan p = plan_from_json(read_json_file(opt.plan_path, "plan"));
    validate_plan(in.scenario, p);
    out << "plan OK: h=" << p.aggregator_layer << " v=" << p.cut_layer
        << " aggregators=" << p.aggregators.size() << "\n";
  }
  return 0;
}

}  // namespace hsfl::cli
