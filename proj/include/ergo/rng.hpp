#pragma once

#include <cstdint>
#include <random>

namespace ergo {

// Seeded generator with platform-independent derived draws.  std::mt19937_64
// itself is fully specified; the distribution wrappers in <random> are not,
// so the reductions are done by hand to keep reports bit-identical anywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // uniform on {0, ..., n-1}
  std::uint64_t uniform_int(std::uint64_t n) {
    // modulo bias is irrelevant at desk scale; determinism is what matters
    return next_u64() % n;
  }

  int uniform_range(int lo, int hi_inclusive) {
    return lo + static_cast<int>(uniform_int(static_cast<std::uint64_t>(hi_inclusive - lo + 1)));
  }

  // uniform on [0, 1)
  double uniform_real() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform_real() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ergo
