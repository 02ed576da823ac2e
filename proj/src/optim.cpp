#include "xmodal/optim.hpp"

#include <cmath>
#include <stdexcept>

#include "xmodal/kernels.hpp"

namespace xmodal {

AdamW::AdamW(const std::vector<Param>& params, AdamWConfig cfg) : cfg_(cfg) {
  m_.reserve(params.size());
  v_.reserve(params.size());
  for (const Param& p : params) {
    m_.push_back(Tensor::zeros(p.var->value.shape));
    v_.push_back(Tensor::zeros(p.var->value.shape));
  }
}

void AdamW::step(std::vector<Param>& params, real lr) {
  if (params.size() != m_.size())
    throw std::invalid_argument("AdamW::step: param list size changed");
  if (lr < 0) throw std::invalid_argument("AdamW::step: negative learning rate");

  // Validate all gradients before touching any state so an aborted step
  // leaves params, moments and the counter untouched.
  for (Param& p : params) {
    const Tensor& g = p.var->ensure_grad();
    for (int64_t i = 0; i < g.numel(); ++i) {
      if (!std::isfinite(static_cast<double>(g.at(i))))
        throw std::runtime_error("AdamW::step: non-finite gradient in parameter '" + p.name + "'");
    }
  }

  const int64_t t = step_count_ + 1;
  const real inv_bc1 = real(1) / (real(1) - static_cast<real>(std::pow(cfg_.beta1, t)));
  const real inv_bc2 = real(1) / (real(1) - static_cast<real>(std::pow(cfg_.beta2, t)));
  for (size_t i = 0; i < params.size(); ++i) {
    Tensor& value = params[i].var->value;
    const Tensor& g = params[i].var->grad;
    kernels::active().adamw_update(value.numel(), value.ptr(), g.ptr(), m_[i].ptr(), v_[i].ptr(),
                                   lr, cfg_.beta1, cfg_.beta2, cfg_.eps, cfg_.weight_decay,
                                   inv_bc1, inv_bc2);
  }
  step_count_ = t;
}

double lr_at_step(int64_t step, int64_t warmup_steps, double peak, double floor_init,
                  int64_t total_steps) {
  if (step < 0 || step > total_steps || warmup_steps > total_steps)
    throw std::invalid_argument("lr_at_step: step/warmup outside [0, total_steps]");
  if (step < warmup_steps) {
    return floor_init + (peak - floor_init) * static_cast<double>(step) /
                            static_cast<double>(warmup_steps);
  }
  if (total_steps == warmup_steps) return peak;
  const double phase = static_cast<double>(step - warmup_steps) /
                       static_cast<double>(total_steps - warmup_steps);
  return peak * 0.5 * (1.0 + std::cos(M_PI * phase));
}

}  // namespace xmodal
