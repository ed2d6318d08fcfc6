#include "hsfl/report.hpp"

#include <charconv>
#include <cmath>

#include <nlohmann/json.hpp>

#include "hsfl/scenario.hpp"

namespace hsfl {

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<size_t>(i)] = digits[v & 0xF];
    v >>= 4;
  }
  return out;
}

std::string scenario_digest(const Scenario& s) {
  return hex64(fnv1a64(scenario_to_json(s).dump()));
}

std::string decision_csv_row(int h, int v, double lambda, const DelayBreakdown& b) {
  std::string out;
  out += std::to_string(h);
  out += ',';
  out += std::to_string(v);
  out += ',';
  out += format_double(lambda);
  for (double field : {b.t1, b.t_fp, b.t_s, b.t_bp, b.t2, b.t3, b.t_round, b.overhead_bytes}) {
    out += ',';
    out += format_double(field);
  }
  return out;
}

}  // namespace hsfl
