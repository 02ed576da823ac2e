#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "xmodal/tensor.hpp"

namespace xmodal {

// Deterministic RNG built on std::mt19937_64 (its raw output sequence is
// pinned by the standard). All derived draws avoid std distributions so the
// same seed yields the same stream on every platform. State round-trips
// through save_state()/load_state() for resumable training.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // Unbiased integer in [0, bound) via rejection sampling. bound > 0.
  uint64_t uniform_below(uint64_t bound);

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Box-Muller, no cached spare so the stream is position-independent.
  double normal();

  void fill_normal(Tensor& t, double mean, double stddev);

  // Child seed for an independent stream, stable under the parent's state.
  static uint64_t derive_seed(uint64_t seed, uint64_t stream);

  std::string save_state() const;
  void load_state(const std::string& text);

 private:
  std::mt19937_64 engine_;
};

}  // namespace xmodal
