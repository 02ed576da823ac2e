#pragma once

#include <cstdint>
#include <vector>

#include "xmodal/graph.hpp"
#include "xmodal/tensor.hpp"

namespace xmodal {

struct AdamWConfig {
  real beta1 = 0.9;
  real beta2 = 0.999;
  real weight_decay = 0.05;
  real eps = 1e-8;
};

// Decoupled weight decay Adam over a fixed parameter list. Moment buffers
// are positional, so the param list must stay in the same order across
// steps and across checkpoint save/load.
class AdamW {
 public:
  AdamW(const std::vector<Param>& params, AdamWConfig cfg);

  // One update at learning rate lr; reads and consumes nothing but the
  // params' grads. Throws std::runtime_error naming the parameter on a
  // NaN/Inf gradient (the step is aborted before any mutation).
  void step(std::vector<Param>& params, real lr);

  int64_t step_count() const { return step_count_; }
  const AdamWConfig& config() const { return cfg_; }

  // Flat state access for checkpointing.
  std::vector<Tensor>& first_moments() { return m_; }
  std::vector<Tensor>& second_moments() { return v_; }
  void set_step_count(int64_t t) { step_count_ = t; }

 private:
  AdamWConfig cfg_;
  int64_t step_count_ = 0;
  std::vector<Tensor> m_;
  std::vector<Tensor> v_;
};

// Linear warmup from floor_init to peak over [0, warmup_steps], then cosine
// decay from peak to 0 at total_steps. Pure; continuous at the boundary.
double lr_at_step(int64_t step, int64_t warmup_steps, double peak, double floor_init,
                  int64_t total_steps);

}  // namespace xmodal
