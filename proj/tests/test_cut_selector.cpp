#include <doctest.h>

#include <nlohmann/json.hpp>

#include "hsfl/cut_selector.hpp"
#include "hsfl/errors.hpp"
#include "test_helpers.hpp"

using namespace hsfl;
using namespace hsfl::testing;

TEST_CASE("average accuracy") {
  // two clients, one epoch: mean over clients
  AccuracyProfile two({0, 1}, 1, 2, {0.8, 0.9});
  CHECK(close(two.average_accuracy(2), 0.85));

  // single client, single epoch: identity
  AccuracyProfile one({0}, 1, 2, {0.73});
  CHECK(one.average_accuracy(2) == 0.73);

  // three epochs, already client-averaged
  AccuracyProfile epochs({0}, 3, 2, {0.6, 0.7, 0.8});
  CHECK(close(epochs.average_accuracy(2), 0.7));

  CHECK_THROWS_AS(one.average_accuracy(3), InfeasibleError);
}

TEST_CASE("candidate selection follows the tolerance") {
  // layers 2 and 3 with acc 0.85 / 0.90
  AccuracyProfile acc({0}, 1, 2, {0.85, 0.90});
  CHECK(acc.candidate_cut_layers(0.02) == std::vector<int>{3});
  CHECK(acc.candidate_cut_layers(0.06) == std::vector<int>{2, 3});
  CHECK(acc.candidate_cut_layers(0.0) == std::vector<int>{3});
  CHECK_THROWS_AS(acc.candidate_cut_layers(-0.1), ParseError);
}

TEST_CASE("argmax ties are all kept") {
  AccuracyProfile acc({0}, 1, 2, {0.9, 0.8, 0.9});
  CHECK(acc.candidate_cut_layers(0.0) == std::vector<int>{2, 4});
}

TEST_CASE("candidate set grows with the tolerance") {
  const AccuracyProfile acc = synth_accuracy_profile(11, 7, 0.9, 0.01, 4, 3, 5);
  std::vector<int> prev;
  for (double thr : {0.0, 0.005, 0.01, 0.02, 0.05, 0.2}) {
    const std::vector<int> cur = acc.candidate_cut_layers(thr);
    CHECK(cur.size() >= prev.size());
    for (int v : prev) {
      bool member = false;
      for (int w : cur)
        if (w == v) member = true;
      CHECK(member);  // monotone by inclusion
    }
    prev = cur;
  }
  // wide-open tolerance covers the whole measured range 2..L-1
  CHECK(acc.candidate_cut_layers(1.0).size() == 9);
  // the synthetic peak is always admissible
  const std::vector<int> tight = acc.candidate_cut_layers(0.0);
  bool has_peak = false;
  for (int v : tight)
    if (v == 7) has_peak = true;
  CHECK(has_peak);
}

TEST_CASE("document forms") {
  const nlohmann::json full = nlohmann::json::parse(R"({
    "epochs": 2,
    "clients": [0, 1],
    "acc": [
      {"client": 0, "v": 2, "e": 1, "value": 0.70},
      {"client": 1, "v": 2, "e": 1, "value": 0.72},
      {"client": 0, "v": 2, "e": 2, "value": 0.74},
      {"client": 1, "v": 2, "e": 2, "value": 0.76},
      {"client": 0, "v": 3, "e": 1, "value": 0.80},
      {"client": 1, "v": 3, "e": 1, "value": 0.82},
      {"client": 0, "v": 3, "e": 2, "value": 0.84},
      {"client": 1, "v": 3, "e": 2, "value": 0.86}
    ]
  })");
  const AccuracyProfile a = load_accuracy_profile(full);
  CHECK(a.layer_lo() == 2);
  CHECK(a.layer_hi() == 3);
  CHECK(close(a.average_accuracy(2), 0.73));
  CHECK(close(a.average_accuracy(3), 0.83));

  nlohmann::json missing = full;
  missing["acc"].erase(7);
  CHECK_THROWS_AS(load_accuracy_profile(missing), ParseError);

  const nlohmann::json short_form =
      nlohmann::json::parse(R"({"acc_by_layer": {"2": 0.85, "3": 0.9}})");
  const AccuracyProfile b = load_accuracy_profile(short_form);
  CHECK(b.average_accuracy(3) == 0.9);
  CHECK(b.candidate_cut_layers(0.02) == std::vector<int>{3});

  CHECK_THROWS_AS(load_accuracy_profile(nlohmann::json::parse(R"({"acc_by_layer": {}})")),
                  ParseError);
  nlohmann::json bad = full;
  bad["acc"][0]["value"] = 1.5;
  CHECK_THROWS_AS(load_accuracy_profile(bad), ParseError);
}

TEST_CASE("synthetic profiles are deterministic and unimodal") {
  const AccuracyProfile a = synth_accuracy_profile(19, 15, 0.88, 0.012, 3, 2, 7);
  const AccuracyProfile b = synth_accuracy_profile(19, 15, 0.88, 0.012, 3, 2, 7);
  for (int v = 2; v <= 18; ++v)
    CHECK(a.average_accuracy(v) == b.average_accuracy(v));
  // rises to the peak, falls after it (jitter stays below the falloff)
  for (int v = 3; v <= 15; ++v)
    CHECK(a.average_accuracy(v) > a.average_accuracy(v - 1));
  for (int v = 16; v <= 18; ++v)
    CHECK(a.average_accuracy(v) < a.average_accuracy(v - 1));
}
