#pragma once

#include <cstdint>
#include <random>

namespace hsfl {

// Seeded generator with explicit uniform mappings. std::mt19937_64 output is
// fully specified by the standard; the distributions below avoid
// std::uniform_*_distribution, whose mapping is implementation-defined, so the
// same seed yields the same scenario on every platform.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + next_unit() * (hi - lo); }

  // Uniform integer in [0, n). Unbiased via rejection.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = gen_();
    } while (v >= limit);
    return v % n;
  }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

private:
  std::mt19937_64 gen_;
};

}  // namespace hsfl
