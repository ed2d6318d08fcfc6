#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace hsfl {

class Scenario;

// A full configuration: partitioning layers plus the client-to-aggregator
// map. assignment[n] is the aggregator id client n trains with; aggregators
// map to themselves. This is the compact encoding of the binary assignment
// variables: x[n][k][l] = 1 iff assignment[n] == k and h+1 <= l <= v.
struct Plan {
  int aggregator_layer = 0;  // h
  int cut_layer = 0;         // v
  std::vector<int> aggregators;  // ascending client ids
  std::vector<int> assignment;   // size N

  bool is_aggregator(int client) const {
    for (int a : aggregators)
      if (a == client) return true;
    return false;
  }
};

// Throws InfeasibleError naming the violated constraint. When a candidate
// cut-layer set is supplied, v must be a member.
void validate_plan(const Scenario& s, const Plan& p,
                   const std::vector<int>* candidates = nullptr);

// Dense x[n][k][l] tensor, n,k in 0..N-1 and l in 1..L. Cells are plain
// integers so tests can hand-build invalid tensors.
struct AssignmentTensor {
  int n_clients = 0;
  int layer_count = 0;
  std::vector<std::uint8_t> x;

  std::uint8_t& at(int n, int k, int l) {
    return x[(static_cast<size_t>(n) * n_clients + k) * layer_count + (l - 1)];
  }
  std::uint8_t at(int n, int k, int l) const {
    return x[(static_cast<size_t>(n) * n_clients + k) * layer_count + (l - 1)];
  }
};

AssignmentTensor expand_plan(const Plan& p, int n_clients, int layer_count);

struct ConstraintViolation {
  enum class Kind {
    not_binary,            // x outside {0,1}
    multiple_aggregators,  // sum_k x[n][k][h+1] > 1
    unassigned_client,     // sum_k x[n][k][h+1] == 0
    non_contiguous_block,  // x[n][k][l] != x[n][k][h+1] for l in [h+1, v]
    outside_block,         // x[n][k][l] == 1 for l outside [h+1, v]
  };
  Kind kind;
  int client = -1;
  int aggregator = -1;
  int layer = -1;
  std::string message;
};

// Checks the single-aggregator and contiguous-block constraints (plus
// binary-ness and the compact-encoding range) on a raw tensor.
std::vector<ConstraintViolation> check_assignment_tensor(const AssignmentTensor& t,
                                                         int h, int v);

nlohmann::json plan_to_json(const Plan& p);
Plan plan_from_json(const nlohmann::json& doc);

}  // namespace hsfl
