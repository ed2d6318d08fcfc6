#include <doctest.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "hsfl/errors.hpp"
#include "hsfl/scenario.hpp"
#include "test_helpers.hpp"

using namespace hsfl;
using namespace hsfl::testing;

TEST_CASE("heterogeneity ratio") {
  CHECK(tiny_scenario().heterogeneity() == 2.0);

  std::vector<ClientSpec> equal{{0, 100.0, 1}, {1, 100.0, 1}, {2, 100.0, 1}};
  Scenario s(std::move(equal), 1000.0, 1, tiny_model(), uniform_rates(3, 50.0));
  CHECK(s.heterogeneity() == 1.0);

  std::vector<ClientSpec> paper{{0, 17.6e9, 1}, {1, 2.4e9, 1}};
  Scenario sp(std::move(paper), 1e11, 1, tiny_model(), uniform_rates(2, 2.5e6));
  CHECK(close(sp.heterogeneity(), 17.6 / 2.4));  // ~7.33, gamma=7.5 regime
}

TEST_CASE("generate_scenario strong/weak split and determinism") {
  ScenarioGenParams params;
  params.n_clients = 10;
  params.strong_fraction = 0.3;
  params.strong_p = 17.6e9;
  params.weak_p = 2.4e9;
  params.seed = 9;
  const Scenario a = generate_scenario(params, tiny_model());
  int strong = 0;
  for (const ClientSpec& c : a.clients())
    if (c.throughput == 17.6e9) ++strong;
  CHECK(strong == 3);

  const Scenario b = generate_scenario(params, tiny_model());
  CHECK(a.rate_table() == b.rate_table());  // same seed, same scenario

  params.seed = 10;
  const Scenario c = generate_scenario(params, tiny_model());
  CHECK(a.rate_table() != c.rate_table());

  params.strong_fraction = 0.0;
  const Scenario weak_only = generate_scenario(params, tiny_model());
  CHECK(weak_only.heterogeneity() == 1.0);
}

TEST_CASE("generated rates live in range and stay symmetric") {
  ScenarioGenParams params;
  params.n_clients = 8;
  params.rate_lo = 2.5e6;
  params.rate_hi = 3.125e6;
  params.seed = 4;
  const Scenario s = generate_scenario(params, tiny_model());
  for (int i = 0; i <= s.n(); ++i)
    for (int j = 0; j <= s.n(); ++j) {
      if (i == j) {
        CHECK(std::isinf(s.rate(i, j)));
      } else {
        CHECK(s.rate(i, j) == s.rate(j, i));
        CHECK(s.rate(i, j) >= 2.5e6);
        CHECK(s.rate(i, j) <= 3.125e6);
      }
    }
}

TEST_CASE("apply_change throughput_scale") {
  const Scenario s = tiny_scenario();
  SystemChange c;
  c.kind = SystemChange::Kind::throughput_scale;
  c.factor = 0.7;
  const Scenario changed = apply_change(s, c);
  CHECK(changed.client(0).throughput == 100.0 * 0.7);
  CHECK(changed.client(1).throughput == 200.0 * 0.7);
  CHECK(s.client(0).throughput == 100.0);  // original untouched

  c.factor = 1.0;
  const Scenario same = apply_change(s, c);
  CHECK(same.client(0).throughput == 100.0);
  CHECK(same.rate_table() == s.rate_table());

  c.all_targets = false;
  c.client_targets = {1};
  c.factor = 0.5;
  const Scenario one = apply_change(s, c);
  CHECK(one.client(0).throughput == 100.0);
  CHECK(one.client(1).throughput == 100.0);

  c.client_targets = {7};
  CHECK_THROWS_AS(apply_change(s, c), ParseError);
  c.client_targets = {1};
  c.factor = 1.5;
  CHECK_THROWS_AS(apply_change(s, c), ParseError);
}

TEST_CASE("apply_change link_rate_override") {
  const Scenario s = tiny_scenario();
  SystemChange c;
  c.kind = SystemChange::Kind::link_rate_override;
  c.new_rate = 0.5e6;  // ~4 Mbps
  const Scenario changed = apply_change(s, c);
  CHECK(changed.rate(0, 1) == 0.5e6);
  CHECK(changed.rate(0, changed.server_endpoint()) == 0.5e6);
  CHECK(std::isinf(changed.rate(1, 1)));

  c.all_targets = false;
  c.link_targets = {{0, SystemChange::kServerEndpoint}};
  c.new_rate = 1e6;
  const Scenario one = apply_change(s, c);
  CHECK(one.rate(0, one.server_endpoint()) == 1e6);
  CHECK(one.rate(one.server_endpoint(), 0) == 1e6);  // symmetry preserved
  CHECK(one.rate(0, 1) == 50.0);

  // purity: same input, same output
  const Scenario again = apply_change(s, c);
  CHECK(again.rate_table() == one.rate_table());
}

TEST_CASE("batch executions use the max over clients") {
  std::vector<LayerProfile> layers;
  for (int i = 1; i <= 4; ++i) layers.push_back({i, 100.0, 1000.0, 50.0});
  auto m = std::make_shared<ModelProfile>("b32", 32, std::move(layers));
  std::vector<ClientSpec> clients{{0, 100.0, 64}, {1, 200.0, 100}};
  Scenario s(std::move(clients), 1000.0, 3, m, uniform_rates(2, 50.0));
  CHECK(s.batch_executions() == 4);  // ceil(100/32)
}

TEST_CASE("scenario document parsing") {
  nlohmann::json doc{
      {"server_throughput", 1000.0},
      {"epochs_per_round", 1},
      {"clients",
       {{{"id", 0}, {"throughput", 100.0}, {"dataset_size", 1}},
        {{"id", 1}, {"throughput", 200.0}, {"dataset_size", 1}}}},
      {"links", {{"matrix", {{0.0, 50.0, 50.0}, {50.0, 0.0, 50.0}, {50.0, 50.0, 0.0}}}}}};
  const Scenario s = load_scenario(doc, tiny_model());
  CHECK(s.n() == 2);
  CHECK(s.rate(0, 1) == 50.0);
  CHECK(s.rate(1, s.server_endpoint()) == 50.0);

  doc["links"]["matrix"][0][1] = 60.0;  // symmetry break
  CHECK_THROWS_AS(load_scenario(doc, tiny_model()), ParseError);

  nlohmann::json gen{{"generator",
                      {{"n_clients", 6},
                       {"strong_fraction", 0.5},
                       {"strong_p", 200.0},
                       {"weak_p", 100.0},
                       {"rate_lo", "20Mbps"},
                       {"rate_hi", "25Mbps"},
                       {"seed", 3}}},
                     {"epochs_per_round", 2},
                     {"server_throughput", 1e6}};
  const Scenario g = load_scenario(gen, tiny_model());
  CHECK(g.n() == 6);
  CHECK(g.heterogeneity() == 2.0);
  CHECK(g.rate(0, 1) >= 2.5e6);
  CHECK(g.rate(0, 1) <= 3.125e6);
  CHECK(g.epochs_per_round() == 2);
  CHECK(g.server_throughput() == 1e6);
}

TEST_CASE("rate unit suffixes") {
  CHECK(parse_rate(nlohmann::json("20Mbps")) == 2.5e6);
  CHECK(parse_rate(nlohmann::json("4 Mbps")) == 0.5e6);
  CHECK(parse_rate(nlohmann::json("1Gbps")) == 125e6);
  CHECK(parse_rate(nlohmann::json("8bps")) == 1.0);
  CHECK(parse_rate(nlohmann::json(2.5e6)) == 2.5e6);
  CHECK_THROWS_AS(parse_rate(nlohmann::json("20MBq")), ParseError);
  CHECK_THROWS_AS(parse_rate(nlohmann::json(-5.0)), ParseError);
}

TEST_CASE("change documents") {
  nlohmann::json doc = nlohmann::json::parse(R"([
    {"kind": "throughput_scale", "factor": 0.7},
    {"kind": "link_rate_override", "rate": "4Mbps", "links": [[0, "server"]]}
  ])");
  const std::vector<SystemChange> changes = load_changes(doc);
  REQUIRE(changes.size() == 2);
  CHECK(changes[0].kind == SystemChange::Kind::throughput_scale);
  CHECK(changes[0].factor == 0.7);
  CHECK(changes[1].new_rate == 0.5e6);
  REQUIRE(changes[1].link_targets.size() == 1);
  CHECK(changes[1].link_targets[0].second == SystemChange::kServerEndpoint);

  const Scenario s = tiny_scenario();
  const Scenario after = apply_changes(s, changes);
  CHECK(after.client(0).throughput == 70.0);
  CHECK(after.rate(0, after.server_endpoint()) == 0.5e6);
  CHECK(after.rate(0, 1) == 50.0);
}
