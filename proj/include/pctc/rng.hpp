#pragma once

#include <cstdint>
#include <random>

namespace pctc {

/// Independent stream families derived from one master seed.
enum class StreamKind : std::uint64_t {
  placement = 1,
  mobility = 2,
  noise = 3,
  flows = 4,
  graph = 5,
  weights = 6,
  test = 99,
};

/// Deterministic random stream. The variate transforms are written out here
/// instead of using <random> distributions, whose output is implementation
/// defined, so that every platform reproduces the same numbers.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer on [0, n).
  std::uint64_t index(std::uint64_t n);
  /// Exponential with the given rate (mean 1/rate).
  double exponential(double rate);
  /// Standard normal (Box-Muller, one variate per call).
  double normal();

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Stream `index` of family `kind` under `master_seed`. Distinct
/// (kind, index) pairs give statistically independent streams.
RngStream derive_stream(std::uint64_t master_seed, StreamKind kind, std::uint64_t index = 0);

/// Seed for trial `trial` of a run seeded with `master_seed`.
std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial);

}  // namespace pctc
