#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "hsfl/model_profile.hpp"

namespace hsfl {

struct ClientSpec {
  int id = 0;                  // contiguous 0..N-1
  double throughput = 0.0;     // p_n, FLOPS/sec
  long long dataset_size = 1;  // D_n, samples
};

// One system-change event. Link endpoints use client ids; kServerEndpoint
// stands for the server.
struct SystemChange {
  enum class Kind { throughput_scale, link_rate_override };
  static constexpr int kServerEndpoint = -1;

  Kind kind = Kind::throughput_scale;
  bool all_targets = true;
  std::vector<int> client_targets;                   // throughput_scale
  std::vector<std::pair<int, int>> link_targets;     // link_rate_override
  double factor = 1.0;    // in (0, 1]
  double new_rate = 0.0;  // bytes/sec, > 0
};

// Immutable network + hyperparameter description. Endpoints are indexed
// 0..N-1 for clients and N for the server; the rate table is symmetric and
// self links carry infinite rate (an aggregator exchanging tensors with
// itself pays no network delay).
class Scenario {
public:
  Scenario(std::vector<ClientSpec> clients, double server_throughput,
           int epochs_per_round, ModelProfilePtr model,
           std::vector<double> rate_table);

  int n() const { return static_cast<int>(clients_.size()); }
  int server_endpoint() const { return n(); }
  const std::vector<ClientSpec>& clients() const { return clients_; }
  const ClientSpec& client(int id) const { return clients_.at(static_cast<size_t>(id)); }
  double server_throughput() const { return server_throughput_; }
  int epochs_per_round() const { return epochs_per_round_; }
  const ModelProfile& model() const { return *model_; }
  ModelProfilePtr model_ptr() const { return model_; }

  double rate(int i, int j) const {
    return rates_[static_cast<size_t>(i) * static_cast<size_t>(n() + 1) +
                  static_cast<size_t>(j)];
  }
  const std::vector<double>& rate_table() const { return rates_; }

  // gamma = max(p_n) / min(p_n)
  double heterogeneity() const;

  // Q for Eq-style round accounting: max over clients of ceil(D_n / B).
  long long batch_executions() const;

private:
  std::vector<ClientSpec> clients_;
  double server_throughput_ = 0.0;
  int epochs_per_round_ = 1;
  ModelProfilePtr model_;
  std::vector<double> rates_;  // (N+1)^2 row-major, symmetric, self = +inf
};

struct ScenarioGenParams {
  int n_clients = 0;
  double strong_fraction = 0.3;
  double strong_p = 17.6e9;
  double weak_p = 2.4e9;
  double server_p = 100e9;
  double rate_lo = 2.5e6;   // bytes/sec
  double rate_hi = 3.125e6;
  std::uint64_t seed = 0;
  int epochs_per_round = 3;
  long long dataset_size = 512;
};

// Strong clients get ids 0..S-1 with S = ceil(strong_fraction * N); link
// rates for (server,n) then (i,j), i<j, are drawn uniformly from
// [rate_lo, rate_hi] in that fixed order, so a seed pins the scenario.
Scenario generate_scenario(const ScenarioGenParams& params, ModelProfilePtr model);

Scenario apply_change(const Scenario& s, const SystemChange& c);
Scenario apply_changes(const Scenario& s, std::span<const SystemChange> changes);

// Documents. A scenario document either lists an explicit symmetric rate
// matrix (server last) or a {"lo","hi","seed"} generator block; rate values
// are bytes/sec numbers or strings with an explicit unit suffix
// ("20Mbps", "4.5Gbps", "250kbps").
Scenario load_scenario(const nlohmann::json& doc, ModelProfilePtr model);
Scenario load_scenario_file(const std::string& path, ModelProfilePtr model);
nlohmann::json scenario_to_json(const Scenario& s);

std::vector<SystemChange> load_changes(const nlohmann::json& doc);
std::vector<std::vector<SystemChange>> load_change_experiments(const nlohmann::json& doc);

double parse_rate(const nlohmann::json& value);  // number or suffixed string

}  // namespace hsfl
