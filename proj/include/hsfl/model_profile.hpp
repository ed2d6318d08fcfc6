#pragma once

#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace hsfl {

// Per-layer cost record. flops_fp and act_bytes are per batch execution
// (already multiplied by the profile's batch size); weight_bytes is the
// parameter size of the layer. Backpropagation FLOPs are not stored, they
// are taken as 2x the forward FLOPs wherever needed.
struct LayerProfile {
  int index = 0;  // 1-based position
  double flops_fp = 0.0;
  double weight_bytes = 0.0;
  double act_bytes = 0.0;  // output activations == gradient size at this boundary
};

class ModelProfile {
public:
  ModelProfile(std::string name, int batch_size, std::vector<LayerProfile> layers);

  const std::string& name() const { return name_; }
  int batch_size() const { return batch_size_; }
  int layer_count() const { return static_cast<int>(layers_.size()); }
  const std::vector<LayerProfile>& layers() const { return layers_; }
  const LayerProfile& layer(int index) const;  // 1-based

  // Inclusive 1-based range sums; lo > hi is the empty range (sum 0).
  double prefix_flops(int lo, int hi) const;
  double prefix_weight_bytes(int lo, int hi) const;

  double act_bytes_at(int index) const { return layer(index).act_bytes; }
  double total_flops() const { return prefix_flops(1, layer_count()); }

private:
  std::string name_;
  int batch_size_ = 1;
  std::vector<LayerProfile> layers_;
  std::vector<double> flops_prefix_;   // flops_prefix_[i] = sum of layers 1..i
  std::vector<double> weight_prefix_;
};

using ModelProfilePtr = std::shared_ptr<const ModelProfile>;

ModelProfile load_profile(const nlohmann::json& doc);
ModelProfile load_profile_file(const std::string& path);
nlohmann::json profile_to_json(const ModelProfile& m);

}  // namespace hsfl
