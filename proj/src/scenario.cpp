#include "hsfl/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include <nlohmann/json.hpp>

#include "hsfl/errors.hpp"
#include "hsfl/rng.hpp"

namespace hsfl {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// ceil(x) guarded against values like 0.3*10 landing epsilon above the
// integer they denote.
int robust_ceil(double x) { return static_cast<int>(std::ceil(x - 1e-9)); }
}  // namespace

Scenario::Scenario(std::vector<ClientSpec> clients, double server_throughput,
                   int epochs_per_round, ModelProfilePtr model,
                   std::vector<double> rate_table)
    : clients_(std::move(clients)),
      server_throughput_(server_throughput),
      epochs_per_round_(epochs_per_round),
      model_(std::move(model)),
      rates_(std::move(rate_table)) {
  const int n = static_cast<int>(clients_.size());
  if (n < 1) throw ParseError("scenario: needs at least one client");
  if (!model_) throw ParseError("scenario: missing model profile");
  if (!(server_throughput_ > 0)) throw ParseError("scenario: server_throughput must be > 0");
  if (epochs_per_round_ < 1) throw ParseError("scenario: epochs_per_round must be >= 1");
  for (int i = 0; i < n; ++i) {
    const ClientSpec& c = clients_[static_cast<size_t>(i)];
    if (c.id != i)
      throw ParseError("scenario: client ids must be contiguous 0..N-1, expected " +
                       std::to_string(i) + " got " + std::to_string(c.id));
    if (!(c.throughput > 0))
      throw ParseError("scenario: client " + std::to_string(c.id) + " throughput must be > 0");
    if (c.dataset_size < 1)
      throw ParseError("scenario: client " + std::to_string(c.id) + " dataset_size must be >= 1");
  }
  const size_t endpoints = static_cast<size_t>(n) + 1;
  if (rates_.size() != endpoints * endpoints)
    throw ParseError("scenario: rate table must be (N+1)x(N+1)");
  for (size_t i = 0; i < endpoints; ++i) {
    rates_[i * endpoints + i] = kInf;  // self links carry no delay
    for (size_t j = i + 1; j < endpoints; ++j) {
      const double r = rates_[i * endpoints + j];
      if (!(r > 0))
        throw ParseError("scenario: link rate (" + std::to_string(i) + "," + std::to_string(j) +
                         ") must be > 0");
      if (r != rates_[j * endpoints + i])
        throw ParseError("scenario: link rates must be symmetric, mismatch at (" +
                         std::to_string(i) + "," + std::to_string(j) + ")");
    }
  }
}

double Scenario::heterogeneity() const {
  double lo = clients_.front().throughput;
  double hi = lo;
  for (const ClientSpec& c : clients_) {
    lo = std::min(lo, c.throughput);
    hi = std::max(hi, c.throughput);
  }
  return hi / lo;
}

long long Scenario::batch_executions() const {
  const long long batch = model_->batch_size();
  long long q = 1;
  for (const ClientSpec& c : clients_)
    q = std::max(q, (c.dataset_size + batch - 1) / batch);
  return q;
}

Scenario generate_scenario(const ScenarioGenParams& params, ModelProfilePtr model) {
  if (params.n_clients < 1) throw ParseError("generate_scenario: n_clients must be >= 1");
  if (params.strong_fraction < 0 || params.strong_fraction > 1)
    throw ParseError("generate_scenario: strong_fraction must be in [0,1]");
  if (params.rate_lo > params.rate_hi)
    throw ParseError("generate_scenario: rate_lo must be <= rate_hi");

  const int n = params.n_clients;
  const int strong = std::min(n, robust_ceil(params.strong_fraction * n));
  std::vector<ClientSpec> clients;
  clients.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    clients.push_back({i, i < strong ? params.strong_p : params.weak_p, params.dataset_size});

  Rng rng(params.seed);
  const size_t endpoints = static_cast<size_t>(n) + 1;
  std::vector<double> rates(endpoints * endpoints, 0.0);
  auto set_rate = [&](int i, int j, double r) {
    rates[static_cast<size_t>(i) * endpoints + static_cast<size_t>(j)] = r;
    rates[static_cast<size_t>(j) * endpoints + static_cast<size_t>(i)] = r;
  };
  // fixed draw order: server links first, then client pairs
  for (int i = 0; i < n; ++i) set_rate(n, i, rng.uniform(params.rate_lo, params.rate_hi));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) set_rate(i, j, rng.uniform(params.rate_lo, params.rate_hi));
  for (size_t i = 0; i < endpoints; ++i) rates[i * endpoints + i] = kInf;

  return Scenario(std::move(clients), params.server_p, params.epochs_per_round,
                  std::move(model), std::move(rates));
}

Scenario apply_change(const Scenario& s, const SystemChange& c) {
  std::vector<ClientSpec> clients = s.clients();
  std::vector<double> rates = s.rate_table();
  const size_t endpoints = static_cast<size_t>(s.n()) + 1;

  switch (c.kind) {
    case SystemChange::Kind::throughput_scale: {
      if (!(c.factor > 0) || c.factor > 1.0)
        throw ParseError("throughput_scale: factor must be in (0,1]");
      if (c.all_targets) {
        for (ClientSpec& cl : clients) cl.throughput *= c.factor;
      } else {
        for (int id : c.client_targets) {
          if (id < 0 || id >= s.n())
            throw ParseError("throughput_scale: unknown client " + std::to_string(id));
          clients[static_cast<size_t>(id)].throughput *= c.factor;
        }
      }
      break;
    }
    case SystemChange::Kind::link_rate_override: {
      if (!(c.new_rate > 0)) throw ParseError("link_rate_override: rate must be > 0");
      auto endpoint_index = [&](int e) {
        if (e == SystemChange::kServerEndpoint) return s.n();
        if (e < 0 || e >= s.n())
          throw ParseError("link_rate_override: unknown endpoint " + std::to_string(e));
        return e;
      };
      if (c.all_targets) {
        for (size_t i = 0; i < endpoints; ++i)
          for (size_t j = 0; j < endpoints; ++j)
            if (i != j) rates[i * endpoints + j] = c.new_rate;
      } else {
        for (const auto& [a, b] : c.link_targets) {
          const size_t i = static_cast<size_t>(endpoint_index(a));
          const size_t j = static_cast<size_t>(endpoint_index(b));
          if (i == j) throw ParseError("link_rate_override: self link has no rate");
          rates[i * endpoints + j] = c.new_rate;
          rates[j * endpoints + i] = c.new_rate;
        }
      }
      break;
    }
  }
  return Scenario(std::move(clients), s.server_throughput(), s.epochs_per_round(),
                  s.model_ptr(), std::move(rates));
}

Scenario apply_changes(const Scenario& s, std::span<const SystemChange> changes) {
  if (changes.empty()) return s;
  Scenario out = apply_change(s, changes.front());
  for (size_t i = 1; i < changes.size(); ++i) out = apply_change(out, changes[i]);
  return out;
}

double parse_rate(const nlohmann::json& value) {
  if (value.is_number()) {
    const double v = value.get<double>();
    if (!(v > 0)) throw ParseError("rate values must be > 0");
    return v;
  }
  if (value.is_string()) {
    const std::string s = value.get<std::string>();
    size_t pos = 0;
    double num = 0;
    try {
      num = std::stod(s, &pos);
    } catch (const std::exception&) {
      throw ParseError("cannot parse rate '" + s + "'");
    }
    std::string suffix = s.substr(pos);
    while (!suffix.empty() && suffix.front() == ' ') suffix.erase(suffix.begin());
    double scale = 0;
    if (suffix == "Gbps") scale = 125e6;       // bits/sec -> bytes/sec
    else if (suffix == "Mbps") scale = 125e3;
    else if (suffix == "kbps" || suffix == "Kbps") scale = 125.0;
    else if (suffix == "bps") scale = 0.125;
    else if (suffix == "Bps" || suffix.empty()) scale = 1.0;
    else throw ParseError("unknown rate unit '" + suffix + "' (use Mbps/Gbps/kbps/bps)");
    const double v = num * scale;
    if (!(v > 0)) throw ParseError("rate values must be > 0");
    return v;
  }
  throw ParseError("rate values must be numbers or unit-suffixed strings");
}

Scenario load_scenario(const nlohmann::json& doc, ModelProfilePtr model) {
  if (!doc.is_object()) throw ParseError("scenario document must be a JSON object");

  if (doc.contains("generator")) {
    const auto& g = doc["generator"];
    ScenarioGenParams params;
    if (!g.contains("n_clients")) throw ParseError("scenario generator: missing n_clients");
    params.n_clients = g["n_clients"].get<int>();
    params.strong_fraction = g.value("strong_fraction", params.strong_fraction);
    if (g.contains("strong_p")) params.strong_p = g["strong_p"].get<double>();
    if (g.contains("weak_p")) params.weak_p = g["weak_p"].get<double>();
    if (g.contains("rate_lo")) params.rate_lo = parse_rate(g["rate_lo"]);
    if (g.contains("rate_hi")) params.rate_hi = parse_rate(g["rate_hi"]);
    params.seed = g.value("seed", params.seed);
    params.epochs_per_round = doc.value("epochs_per_round", params.epochs_per_round);
    params.dataset_size = g.value("dataset_size", params.dataset_size);
    if (doc.contains("server_throughput"))
      params.server_p = doc["server_throughput"].get<double>();
    return generate_scenario(params, std::move(model));
  }

  if (!doc.contains("clients") || !doc["clients"].is_array())
    throw ParseError("scenario: missing clients array");
  if (!doc.contains("server_throughput"))
    throw ParseError("scenario: missing server_throughput");
  std::vector<ClientSpec> clients;
  for (const auto& entry : doc["clients"]) {
    ClientSpec c;
    if (!entry.contains("id") || !entry.contains("throughput"))
      throw ParseError("scenario: client entries need id and throughput");
    c.id = entry["id"].get<int>();
    c.throughput = entry["throughput"].get<double>();
    c.dataset_size = entry.value("dataset_size", 1LL);
    clients.push_back(c);
  }
  const int n = static_cast<int>(clients.size());
  const size_t endpoints = static_cast<size_t>(n) + 1;
  std::vector<double> rates(endpoints * endpoints, 0.0);

  if (!doc.contains("links")) throw ParseError("scenario: missing links");
  const auto& links = doc["links"];
  if (links.is_object() && links.contains("matrix")) {
    const auto& mat = links["matrix"];
    if (!mat.is_array() || mat.size() != endpoints)
      throw ParseError("scenario: link matrix must be (N+1)x(N+1), server last");
    for (size_t i = 0; i < endpoints; ++i) {
      if (!mat[i].is_array() || mat[i].size() != endpoints)
        throw ParseError("scenario: link matrix row " + std::to_string(i) + " has wrong size");
      for (size_t j = 0; j < endpoints; ++j)
        rates[i * endpoints + j] = (i == j) ? kInf : parse_rate(mat[i][j]);
    }
  } else if (links.is_object() && links.contains("lo") && links.contains("hi")) {
    const double lo = parse_rate(links["lo"]);
    const double hi = parse_rate(links["hi"]);
    if (lo > hi) throw ParseError("scenario: links.lo must be <= links.hi");
    Rng rng(links.value("seed", 0ULL));
    auto set_rate = [&](size_t i, size_t j, double r) {
      rates[i * endpoints + j] = r;
      rates[j * endpoints + i] = r;
    };
    for (size_t i = 0; i < static_cast<size_t>(n); ++i)
      set_rate(static_cast<size_t>(n), i, rng.uniform(lo, hi));
    for (size_t i = 0; i + 1 < static_cast<size_t>(n); ++i)
      for (size_t j = i + 1; j < static_cast<size_t>(n); ++j)
        set_rate(i, j, rng.uniform(lo, hi));
    for (size_t i = 0; i < endpoints; ++i) rates[i * endpoints + i] = kInf;
  } else {
    throw ParseError("scenario: links must carry a matrix or a {lo,hi,seed} block");
  }

  return Scenario(std::move(clients), doc["server_throughput"].get<double>(),
                  doc.value("epochs_per_round", 1), std::move(model), std::move(rates));
}

Scenario load_scenario_file(const std::string& path, ModelProfilePtr model) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("scenario file " + path + ": " + e.what());
  }
  return load_scenario(doc, std::move(model));
}

nlohmann::json scenario_to_json(const Scenario& s) {
  nlohmann::json clients = nlohmann::json::array();
  for (const ClientSpec& c : s.clients())
    clients.push_back({{"id", c.id},
                       {"throughput", c.throughput},
                       {"dataset_size", c.dataset_size}});
  const size_t endpoints = static_cast<size_t>(s.n()) + 1;
  nlohmann::json matrix = nlohmann::json::array();
  for (size_t i = 0; i < endpoints; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (size_t j = 0; j < endpoints; ++j)
      row.push_back(i == j ? 0.0 : s.rate_table()[i * endpoints + j]);
    matrix.push_back(row);
  }
  return {{"clients", clients},
          {"server_throughput", s.server_throughput()},
          {"epochs_per_round", s.epochs_per_round()},
          {"model", s.model().name()},
          {"links", {{"matrix", matrix}}}};
}

namespace {

SystemChange parse_change(const nlohmann::json& entry) {
  if (!entry.is_object() || !entry.contains("kind"))
    throw ParseError("system change entries need a kind");
  SystemChange c;
  const std::string kind = entry["kind"].get<std::string>();
  if (kind == "throughput_scale") {
    c.kind = SystemChange::Kind::throughput_scale;
    if (!entry.contains("factor")) throw ParseError("throughput_scale: missing factor");
    c.factor = entry["factor"].get<double>();
    if (entry.contains("clients") && !entry["clients"].is_string()) {
      c.all_targets = false;
      for (const auto& id : entry["clients"]) c.client_targets.push_back(id.get<int>());
    }
  } else if (kind == "link_rate_override") {
    c.kind = SystemChange::Kind::link_rate_override;
    if (!entry.contains("rate")) throw ParseError("link_rate_override: missing rate");
    c.new_rate = parse_rate(entry["rate"]);
    if (entry.contains("links") && !entry["links"].is_string()) {
      c.all_targets = false;
      for (const auto& pair : entry["links"]) {
        if (!pair.is_array() || pair.size() != 2)
          throw ParseError("link_rate_override: links entries must be [i,j] pairs");
        auto endpoint = [](const nlohmann::json& e) {
          if (e.is_string() && e.get<std::string>() == "server")
            return SystemChange::kServerEndpoint;
          return e.get<int>();
        };
        c.link_targets.emplace_back(endpoint(pair[0]), endpoint(pair[1]));
      }
    }
  } else {
    throw ParseError("unknown system change kind '" + kind + "'");
  }
  return c;
}

}  // namespace

std::vector<SystemChange> load_changes(const nlohmann::json& doc) {
  if (!doc.is_array()) throw ParseError("system change document must be a JSON array");
  std::vector<SystemChange> out;
  for (const auto& entry : doc) out.push_back(parse_change(entry));
  return out;
}

std::vector<std::vector<SystemChange>> load_change_experiments(const nlohmann::json& doc) {
  if (!doc.is_array()) throw ParseError("system change document must be a JSON array");
  std::vector<std::vector<SystemChange>> out;
  for (const auto& entry : doc) {
    if (entry.is_array()) {
      std::vector<SystemChange> group;
      for (const auto& e : entry) group.push_back(parse_change(e));
      out.push_back(std::move(group));
    } else {
      out.push_back({parse_change(entry)});
    }
  }
  return out;
}

}  // namespace hsfl
