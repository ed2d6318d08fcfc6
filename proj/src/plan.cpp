#include "hsfl/plan.hpp"

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

#include "hsfl/errors.hpp"
#include "hsfl/scenario.hpp"

namespace hsfl {

void validate_plan(const Scenario& s, const Plan& p, const std::vector<int>* candidates) {
  const int layer_count = s.model().layer_count();
  const int h = p.aggregator_layer;
  const int v = p.cut_layer;
  if (!(1 < h && h < v && v < layer_count))
    throw InfeasibleError("plan violates 1 < h < v < L: h=" + std::to_string(h) +
                          " v=" + std::to_string(v) + " L=" + std::to_string(layer_count));
  if (candidates &&
      std::find(candidates->begin(), candidates->end(), v) == candidates->end())
    throw InfeasibleError("plan cut layer v=" + std::to_string(v) +
                          " is not in the admissible candidate set");
  if (p.aggregators.empty()) throw InfeasibleError("plan has no aggregators");
  std::set<int> aggr;
  for (int a : p.aggregators) {
    if (a < 0 || a >= s.n())
      throw InfeasibleError("aggregator id " + std::to_string(a) + " not in scenario");
    if (!aggr.insert(a).second)
      throw InfeasibleError("duplicate aggregator id " + std::to_string(a));
  }
  if (p.assignment.size() != static_cast<size_t>(s.n()))
    throw InfeasibleError("assignment must cover every client: size " +
                          std::to_string(p.assignment.size()) + " vs N=" +
                          std::to_string(s.n()));
  for (int n = 0; n < s.n(); ++n) {
    const int k = p.assignment[static_cast<size_t>(n)];
    if (!aggr.count(k))
      throw InfeasibleError("client " + std::to_string(n) + " assigned to " +
                            std::to_string(k) + ", which is not an aggregator");
  }
  for (int a : p.aggregators)
    if (p.assignment[static_cast<size_t>(a)] != a)
      throw InfeasibleError("aggregator " + std::to_string(a) + " must be self-assigned");
}

AssignmentTensor expand_plan(const Plan& p, int n_clients, int layer_count) {
  AssignmentTensor t;
  t.n_clients = n_clients;
  t.layer_count = layer_count;
  t.x.assign(static_cast<size_t>(n_clients) * n_clients * layer_count, 0);
  for (int n = 0; n < n_clients; ++n) {
    const int k = p.assignment[static_cast<size_t>(n)];
    for (int l = p.aggregator_layer + 1; l <= p.cut_layer; ++l) t.at(n, k, l) = 1;
  }
  return t;
}

std::vector<ConstraintViolation> check_assignment_tensor(const AssignmentTensor& t,
                                                         int h, int v) {
  std::vector<ConstraintViolation> out;
  for (int n = 0; n < t.n_clients; ++n) {
    for (int k = 0; k < t.n_clients; ++k) {
      for (int l = 1; l <= t.layer_count; ++l) {
        const std::uint8_t val = t.at(n, k, l);
        if (val > 1) {
          out.push_back({ConstraintViolation::Kind::not_binary, n, k, l,
                         "x[" + std::to_string(n) + "][" + std::to_string(k) + "][" +
                             std::to_string(l) + "] = " + std::to_string(val) +
                             " is not binary"});
        } else if (val == 1 && (l <= h || l > v)) {
          out.push_back({ConstraintViolation::Kind::outside_block, n, k, l,
                         "layer " + std::to_string(l) + " of client " + std::to_string(n) +
                             " lies outside the aggregator-side block [" +
                             std::to_string(h + 1) + "," + std::to_string(v) + "]"});
        }
      }
    }

    int owners = 0;
    for (int k = 0; k < t.n_clients; ++k)
      if (t.at(n, k, h + 1) == 1) ++owners;
    if (owners > 1) {
      out.push_back({ConstraintViolation::Kind::multiple_aggregators, n, -1, h + 1,
                     "client " + std::to_string(n) + " is assigned to " +
                         std::to_string(owners) + " aggregators; a single one is allowed"});
    } else if (owners == 0) {
      out.push_back({ConstraintViolation::Kind::unassigned_client, n, -1, h + 1,
                     "client " + std::to_string(n) + " has no aggregator"});
    }

    for (int k = 0; k < t.n_clients; ++k) {
      const std::uint8_t head = t.at(n, k, h + 1);
      for (int l = h + 1; l <= v; ++l) {
        if (t.at(n, k, l) != head) {
          out.push_back({ConstraintViolation::Kind::non_contiguous_block, n, k, l,
                         "layers " + std::to_string(h + 1) + ".." + std::to_string(v) +
                             " of client " + std::to_string(n) +
                             " must all be trained on the same aggregator; layer " +
                             std::to_string(l) + " disagrees with layer " +
                             std::to_string(h + 1)});
          break;
        }
      }
    }
  }
  return out;
}

nlohmann::json plan_to_json(const Plan& p) {
  return {{"h", p.aggregator_layer},
          {"v", p.cut_layer},
          {"aggregators", p.aggregators},
          {"assignment", p.assignment}};
}

Plan plan_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("h") || !doc.contains("v") ||
      !doc.contains("aggregators") || !doc.contains("assignment"))
    throw ParseError("plan document needs h, v, aggregators and assignment");
  Plan p;
  p.aggregator_layer = doc["h"].get<int>();
  p.cut_layer = doc["v"].get<int>();
  p.aggregators = doc["aggregators"].get<std::vector<int>>();
  std::sort(p.aggregators.begin(), p.aggregators.end());
  p.assignment = doc["assignment"].get<std::vector<int>>();
  return p;
}

}  // namespace hsfl
