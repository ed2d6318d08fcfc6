#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace hsfl {

// Offline accuracy measurements acc(n, v, e) over a contiguous layer range.
// Profiles come in two document forms: the full per-client-per-epoch grid,
// or a pre-averaged {"acc_by_layer": {...}} short form (stored as one
// client, one epoch).
class AccuracyProfile {
public:
  AccuracyProfile(std::vector<int> clients, int epochs, int layer_lo,
                  std::vector<double> values);  // values[(v-lo)*E*C + (e-1)*C + n]

  const std::vector<int>& clients() const { return clients_; }
  int epochs() const { return epochs_; }
  int layer_lo() const { return layer_lo_; }
  int layer_hi() const { return layer_lo_ + layer_span() - 1; }
  int layer_span() const;

  double value(int client_pos, int v, int e) const;

  // Mean over clients per epoch, then mean over epochs.
  double average_accuracy(int v) const;

  // { v : acc(v) >= max_l acc(l) - thr }, ascending. Always contains the
  // argmax layer(s).
  std::vector<int> candidate_cut_layers(double thr) const;

private:
  std::vector<int> clients_;
  int epochs_ = 1;
  int layer_lo_ = 2;
  std::vector<double> values_;
};

AccuracyProfile load_accuracy_profile(const nlohmann::json& doc);
AccuracyProfile load_accuracy_profile_file(const std::string& path);

// Synthetic unimodal profile peaking at peak_layer, for tests and studies
// that have no measured accuracies. Deterministic for a given seed.
AccuracyProfile synth_accuracy_profile(int layer_count, int peak_layer,
                                       double peak_acc, double falloff,
                                       int n_clients, int epochs,
                                       std::uint64_t seed);

}  // namespace hsfl
