#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "hsfl/delay_model.hpp"
#include "hsfl/planner.hpp"

namespace hsfl {

// Shortest round-trip decimal form (std::to_chars); CSV and JSON carry the
// same value losslessly.
std::string format_double(double v);

std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t v);

// Canonical content digest of a scenario (model, clients, rates, E).
std::string scenario_digest(const Scenario& s);

inline constexpr const char* kDecisionCsvHeader =
    "h,v,lambda,t1,t_fp,t_s,t_bp,t2,t3,t_round,overhead_bytes";

std::string decision_csv_row(int h, int v, double lambda, const DelayBreakdown& b);

}  // namespace hsfl
