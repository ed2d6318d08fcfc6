#include "hsfl/cut_selector.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <tuple>

#include <nlohmann/json.hpp>

#include "hsfl/errors.hpp"
#include "hsfl/rng.hpp"

namespace hsfl {

AccuracyProfile::AccuracyProfile(std::vector<int> clients, int epochs, int layer_lo,
                                 std::vector<double> values)
    : clients_(std::move(clients)),
      epochs_(epochs),
      layer_lo_(layer_lo),
      values_(std::move(values)) {
  if (clients_.empty()) throw ParseError("accuracy profile: needs at least one client");
  if (epochs_ < 1) throw ParseError("accuracy profile: epochs must be >= 1");
  const size_t per_layer = clients_.size() * static_cast<size_t>(epochs_);
  if (values_.empty() || values_.size() % per_layer != 0)
    throw ParseError("accuracy profile: every (client, layer, epoch) triple must be present");
  for (double a : values_)
    if (!(a >= 0.0 && a <= 1.0))
      throw ParseError("accuracy profile: accuracies must lie in [0,1]");
}

int AccuracyProfile::layer_span() const {
  return static_cast<int>(values_.size() /
                          (clients_.size() * static_cast<size_t>(epochs_)));
}

double AccuracyProfile::value(int client_pos, int v, int e) const {
  const size_t c = clients_.size();
  const size_t idx = (static_cast<size_t>(v - layer_lo_) * epochs_ + (e - 1)) * c +
                     static_cast<size_t>(client_pos);
  return values_.at(idx);
}

double AccuracyProfile::average_accuracy(int v) const {
  if (v < layer_lo() || v > layer_hi())
    throw InfeasibleError("accuracy profile: layer " + std::to_string(v) +
                          " outside measured range " + std::to_string(layer_lo()) + ".." +
                          std::to_string(layer_hi()));
  double epoch_sum = 0.0;
  for (int e = 1; e <= epochs_; ++e) {
    double client_sum = 0.0;
    for (size_t n = 0; n < clients_.size(); ++n)
      client_sum += value(static_cast<int>(n), v, e);
    epoch_sum += client_sum / static_cast<double>(clients_.size());
  }
  return epoch_sum / static_cast<double>(epochs_);
}

std::vector<int> AccuracyProfile::candidate_cut_layers(double thr) const {
  if (thr < 0) throw ParseError("candidate_cut_layers: thr must be >= 0");
  double best = 0.0;
  for (int v = layer_lo(); v <= layer_hi(); ++v)
    best = std::max(best, average_accuracy(v));
  std::vector<int> out;
  for (int v = layer_lo(); v <= layer_hi(); ++v)
    if (average_accuracy(v) >= best - thr) out.push_back(v);
  return out;
}

AccuracyProfile load_accuracy_profile(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ParseError("accuracy document must be a JSON object");

  if (doc.contains("acc_by_layer")) {
    const auto& by_layer = doc["acc_by_layer"];
    if (!by_layer.is_object() || by_layer.empty())
      throw ParseError("acc_by_layer must be a non-empty object");
    std::map<int, double> acc;
    for (const auto& [key, value] : by_layer.items()) acc[std::stoi(key)] = value.get<double>();
    const int lo = acc.begin()->first;
    std::vector<double> values;
    int expected = lo;
    for (const auto& [v, a] : acc) {
      if (v != expected)
        throw ParseError("acc_by_layer: layers must be contiguous, missing " +
                         std::to_string(expected));
      ++expected;
      values.push_back(a);
    }
    return AccuracyProfile({0}, 1, lo, std::move(values));
  }

  if (!doc.contains("epochs") || !doc.contains("acc") || !doc["acc"].is_array())
    throw ParseError("accuracy document needs epochs and an acc array (or acc_by_layer)");
  const int epochs = doc["epochs"].get<int>();
  std::vector<int> clients;
  if (doc.contains("clients")) clients = doc["clients"].get<std::vector<int>>();

  std::map<std::tuple<int, int, int>, double> grid;  // (v, e, client)
  std::set<int> layers, seen_clients;
  for (const auto& entry : doc["acc"]) {
    if (!entry.contains("client") || !entry.contains("v") || !entry.contains("e") ||
        !entry.contains("value"))
      throw ParseError("acc entries need client, v, e and value");
    const int client = entry["client"].get<int>();
    const int v = entry["v"].get<int>();
    const int e = entry["e"].get<int>();
    grid[{v, e, client}] = entry["value"].get<double>();
    layers.insert(v);
    seen_clients.insert(client);
  }
  if (clients.empty()) clients.assign(seen_clients.begin(), seen_clients.end());
  if (layers.empty()) throw ParseError("accuracy document has no measurements");

  const int lo = *layers.begin();
  const int hi = *layers.rbegin();
  if (static_cast<int>(layers.size()) != hi - lo + 1)
    throw ParseError("accuracy document: measured layers must be contiguous");

  std::vector<double> values;
  values.reserve(static_cast<size_t>(hi - lo + 1) * epochs * clients.size());
  for (int v = lo; v <= hi; ++v)
    for (int e = 1; e <= epochs; ++e)
      for (int client : clients) {
        auto it = grid.find({v, e, client});
        if (it == grid.end())
          throw ParseError("accuracy document: missing acc for client " +
                           std::to_string(client) + " v=" + std::to_string(v) + " e=" +
                           std::to_string(e));
        values.push_back(it->second);
      }
  return AccuracyProfile(std::move(clients), epochs, lo, std::move(values));
}

AccuracyProfile load_accuracy_profile_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open accuracy file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("accuracy file " + path + ": " + e.what());
  }
  return load_accuracy_profile(doc);
}

AccuracyProfile synth_accuracy_profile(int layer_count, int peak_layer, double peak_acc,
                                       double falloff, int n_clients, int epochs,
                                       std::uint64_t seed) {
  if (layer_count < 4) throw ParseError("synthetic accuracy: layer_count must be >= 4");
  if (peak_layer < 2 || peak_layer > layer_count - 1)
    throw ParseError("synthetic accuracy: peak layer must lie in 2..L-1");
  Rng rng(seed);
  std::vector<int> clients;
  for (int n = 0; n < n_clients; ++n) clients.push_back(n);
  std::vector<double> values;
  for (int v = 2; v <= layer_count - 1; ++v) {
    const double base = peak_acc - falloff * std::abs(v - peak_layer);
    for (int e = 1; e <= epochs; ++e) {
      // accuracy creeps up over offline epochs, below the peak
      const double epoch_base =
          base - 0.004 * static_cast<double>(epochs - e) / std::max(1, epochs);
      for (int n = 0; n < n_clients; ++n) {
        const double jitter = (rng.next_unit() - 0.5) * 0.002;
        values.push_back(std::clamp(epoch_base + jitter, 0.0, 1.0));
      }
    }
  }
  return AccuracyProfile(std::move(clients), epochs, 2, std::move(values));
}

}  // namespace hsfl
