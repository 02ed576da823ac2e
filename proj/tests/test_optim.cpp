#include <cmath>

#include "doctest.h"
#include "xmodal/optim.hpp"
#include "xmodal/rng.hpp"

using namespace xmodal;

TEST_CASE("adamw with zero gradient applies decoupled decay only") {
  Var w = make_param("w", Tensor::row({real(2.0), real(-3.0)}));
  std::vector<Param> params = {{"w", w}};
  AdamWConfig cfg;
  cfg.weight_decay = 0.05;
  AdamW opt(params, cfg);
  w->ensure_grad().fill(0);
  opt.step(params, 0.1);
  CHECK(double(w->value.at(0)) == doctest::Approx(2.0 * (1 - 0.1 * 0.05)).epsilon(1e-15));
  CHECK(double(w->value.at(1)) == doctest::Approx(-3.0 * (1 - 0.1 * 0.05)).epsilon(1e-15));
  CHECK(opt.step_count() == 1);
}

TEST_CASE("adamw single-step update matches the hand computation") {
  // w=1, g=0.5, beta1=0.9, beta2=0.999, wd=0, lr=0.1, t: 0 -> 1:
  //   m = 0.05, v = 0.00025
  //   mhat = 0.05 / (1 - 0.9) = 0.5, vhat = 0.00025 / (1 - 0.999) = 0.25
  //   w' = 1 - 0.1 * 0.5 / (sqrt(0.25) + 1e-8)
  Var w = make_param("w", Tensor::row({real(1.0)}));
  std::vector<Param> params = {{"w", w}};
  AdamWConfig cfg;
  cfg.weight_decay = 0.0;
  AdamW opt(params, cfg);
  w->ensure_grad().at(0) = real(0.5);
  opt.step(params, 0.1);
  const double expected = 1.0 - 0.1 * (0.05 / 0.1) / (std::sqrt(0.00025 / 0.001) + 1e-8);
  CHECK(double(w->value.at(0)) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("adamw defaults carry the published hyperparameters") {
  AdamWConfig cfg;
  CHECK(cfg.beta1 == real(0.9));
  CHECK(cfg.beta2 == real(0.999));
  CHECK(cfg.weight_decay == real(0.05));
  CHECK(cfg.eps == real(1e-8));
}

TEST_CASE("adamw with zero decay and zero gradient is the identity") {
  Rng rng(21);
  Tensor init({4, 3});
  rng.fill_normal(init, 0.0, 1.0);
  Var w = make_param("w", init);
  std::vector<Param> params = {{"w", w}};
  AdamWConfig cfg;
  cfg.weight_decay = 0.0;
  AdamW opt(params, cfg);
  w->ensure_grad().fill(0);
  opt.step(params, 0.1);
  for (int64_t i = 0; i < init.numel(); ++i) CHECK(w->value.at(i) == init.at(i));
}

TEST_CASE("adamw aborts on non-finite gradients naming the parameter") {
  Var w = make_param("quer.weight", Tensor::row({real(1.0)}));
  std::vector<Param> params = {{"quer.weight", w}};
  AdamW opt(params, {});
  w->ensure_grad().at(0) = real(NAN);
  CHECK_THROWS_WITH_AS(opt.step(params, 0.1), doctest::Contains("quer.weight"),
                       std::runtime_error);
  CHECK(double(w->value.at(0)) == 1.0);  // untouched
  CHECK(opt.step_count() == 0);
}

TEST_CASE("lr schedule hits the published warmup endpoints") {
  CHECK(std::fabs(lr_at_step(0, 1000, 1e-5, 1e-8, 10000) - 1e-8) < 1e-12);
  CHECK(std::fabs(lr_at_step(1000, 1000, 1e-5, 1e-8, 10000) - 1e-5) < 1e-12);
  CHECK(std::fabs(lr_at_step(10000, 1000, 1e-5, 1e-8, 10000)) < 1e-12);
}

TEST_CASE("lr schedule: cosine midpoint is half the peak") {
  // Midpoint of the cosine phase: warmup + (total - warmup) / 2.
  CHECK(std::fabs(lr_at_step(5500, 1000, 1e-5, 1e-8, 10000) - 5e-6) < 1e-12);
}

TEST_CASE("lr schedule is continuous at the warmup boundary") {
  const int64_t warmup = 1000, total = 20000;
  const double before = lr_at_step(warmup - 1, warmup, 1e-5, 1e-8, total);
  const double at = lr_at_step(warmup, warmup, 1e-5, 1e-8, total);
  const double after = lr_at_step(warmup + 1, warmup, 1e-5, 1e-8, total);
  CHECK(std::fabs(at - 1e-5) < 1e-15);
  CHECK(std::fabs(before - at) < 2e-8);
  CHECK(std::fabs(after - at) < 2e-8);
}
