#include "hsfl/model_profile.hpp"

#include <fstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "hsfl/errors.hpp"

namespace hsfl {

ModelProfile::ModelProfile(std::string name, int batch_size,
                           std::vector<LayerProfile> layers)
    : name_(std::move(name)), batch_size_(batch_size), layers_(std::move(layers)) {
  const int layer_count = static_cast<int>(layers_.size());
  if (layer_count < 4)
    throw ParseError("model '" + name_ + "': needs at least 4 layers for 1 < h < v < L, got " +
                     std::to_string(layer_count));
  if (batch_size_ < 1) throw ParseError("model '" + name_ + "': batch_size must be >= 1");
  for (int i = 0; i < layer_count; ++i) {
    const LayerProfile& l = layers_[static_cast<size_t>(i)];
    if (l.index != i + 1)
      throw ParseError("model '" + name_ + "': layer indices must be contiguous 1..L, expected " +
                       std::to_string(i + 1) + " got " + std::to_string(l.index));
    if (!(l.flops_fp > 0))
      throw ParseError("model '" + name_ + "': layer " + std::to_string(l.index) +
                       " flops_fp must be > 0");
    if (l.weight_bytes < 0)
      throw ParseError("model '" + name_ + "': layer " + std::to_string(l.index) +
                       " weight_bytes must be >= 0");
    if (!(l.act_bytes > 0))
      throw ParseError("model '" + name_ + "': layer " + std::to_string(l.index) +
                       " act_bytes must be > 0");
  }
  flops_prefix_.assign(static_cast<size_t>(layer_count) + 1, 0.0);
  weight_prefix_.assign(static_cast<size_t>(layer_count) + 1, 0.0);
  for (int i = 1; i <= layer_count; ++i) {
    flops_prefix_[static_cast<size_t>(i)] =
        flops_prefix_[static_cast<size_t>(i) - 1] + layers_[static_cast<size_t>(i) - 1].flops_fp;
    weight_prefix_[static_cast<size_t>(i)] =
        weight_prefix_[static_cast<size_t>(i) - 1] + layers_[static_cast<size_t>(i) - 1].weight_bytes;
  }
}

const LayerProfile& ModelProfile::layer(int index) const {
  if (index < 1 || index > layer_count())
    throw InfeasibleError("layer index " + std::to_string(index) + " outside 1.." +
                          std::to_string(layer_count()));
  return layers_[static_cast<size_t>(index) - 1];
}

double ModelProfile::prefix_flops(int lo, int hi) const {
  if (lo > hi) return 0.0;
  if (lo < 1 || hi > layer_count())
    throw InfeasibleError("flops range [" + std::to_string(lo) + "," + std::to_string(hi) +
                          "] outside 1.." + std::to_string(layer_count()));
  return flops_prefix_[static_cast<size_t>(hi)] - flops_prefix_[static_cast<size_t>(lo) - 1];
}

double ModelProfile::prefix_weight_bytes(int lo, int hi) const {
  if (lo > hi) return 0.0;
  if (lo < 1 || hi > layer_count())
    throw InfeasibleError("weight range [" + std::to_string(lo) + "," + std::to_string(hi) +
                          "] outside 1.." + std::to_string(layer_count()));
  return weight_prefix_[static_cast<size_t>(hi)] - weight_prefix_[static_cast<size_t>(lo) - 1];
}

namespace {

double require_number(const nlohmann::json& obj, const char* key, const std::string& ctx) {
  if (!obj.contains(key) || !obj[key].is_number())
    throw ParseError(ctx + ": missing numeric field '" + key + "'");
  return obj[key].get<double>();
}

}  // namespace

ModelProfile load_profile(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ParseError("profile document must be a JSON object");
  const std::string name = doc.value("name", std::string("unnamed"));
  if (!doc.contains("batch_size") || !doc["batch_size"].is_number_integer())
    throw ParseError("profile '" + name + "': missing integer batch_size");
  if (!doc.contains("layers") || !doc["layers"].is_array())
    throw ParseError("profile '" + name + "': missing layers array");

  std::vector<LayerProfile> layers;
  layers.reserve(doc["layers"].size());
  for (const auto& entry : doc["layers"]) {
    if (!entry.is_object()) throw ParseError("profile '" + name + "': layer entries must be objects");
    LayerProfile l;
    const std::string ctx = "profile '" + name + "' layer";
    l.index = static_cast<int>(require_number(entry, "index", ctx));
    l.flops_fp = require_number(entry, "flops_fp", ctx);
    l.weight_bytes = require_number(entry, "weight_bytes", ctx);
    l.act_bytes = require_number(entry, "act_bytes", ctx);
    layers.push_back(l);
  }
  return ModelProfile(name, doc["batch_size"].get<int>(), std::move(layers));
}

ModelProfile load_profile_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open profile file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("profile file " + path + ": " + e.what());
  }
  return load_profile(doc);
}

nlohmann::json profile_to_json(const ModelProfile& m) {
  nlohmann::json layers = nlohmann::json::array();
  for (const LayerProfile& l : m.layers()) {
    layers.push_back({{"index", l.index},
                      {"flops_fp", l.flops_fp},
                      {"weight_bytes", l.weight_bytes},
                      {"act_bytes", l.act_bytes}});
  }
  return {{"name", m.name()}, {"batch_size", m.batch_size()}, {"layers", layers}};
}

}  // namespace hsfl
