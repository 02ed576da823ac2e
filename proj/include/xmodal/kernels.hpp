#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "xmodal/tensor.hpp"

namespace xmodal::kernels {

// Dense inner-loop primitives behind the tensor ops. Every entry has a
// scalar reference implementation; an AVX2 variant (double builds on x86)
// is selected once at startup when the CPU supports it. Backends agree to
// floating-point reassociation only; equivalence is enforced by
// tests/test_kernels.cpp. Within one process the selection is fixed, so
// results stay bitwise reproducible run-to-run on the same machine.
struct Ops {
  // c (+)= a[m,k] * b[k,n]
  void (*matmul_nn)(const real* a, const real* b, real* c, int64_t m, int64_t k, int64_t n,
                    bool accumulate);
  // c (+)= a[m,k] * b[n,k]^T
  void (*matmul_nt)(const real* a, const real* b, real* c, int64_t m, int64_t k, int64_t n,
                    bool accumulate);
  // c (+)= a[k,m]^T * b[k,n]
  void (*matmul_tn)(const real* a, const real* b, real* c, int64_t m, int64_t k, int64_t n,
                    bool accumulate);
  // y += alpha * x
  void (*axpy)(int64_t n, real alpha, const real* x, real* y);
  real (*dot)(int64_t n, const real* x, const real* y);
  void (*vadd)(int64_t n, const real* a, const real* b, real* out);
  void (*vmul)(int64_t n, const real* a, const real* b, real* out);
  void (*vscale)(int64_t n, real alpha, const real* x, real* out);
  // out[j] (+)= sum_i x[i,j]
  void (*colsum)(const real* x, real* out, int64_t m, int64_t n, bool accumulate);
  // Decoupled-weight-decay Adam update on one parameter buffer.
  // inv_bc1 = 1/(1 - beta1^t), inv_bc2 = 1/(1 - beta2^t).
  void (*adamw_update)(int64_t n, real* p, const real* g, real* m, real* v, real lr, real beta1,
                       real beta2, real eps, real weight_decay, real inv_bc1, real inv_bc2);
};

namespace scalar {
extern const Ops ops;
}
#if XMODAL_HAVE_AVX2_TU
namespace avx2 {
extern const Ops ops;
}
#endif

// Active backend. Defaults to the best supported one; XMODAL_KERNELS=scalar
// (or =avx2) in the environment, or select_backend(), overrides it.
const Ops& active();
std::string_view active_name();
void select_backend(std::string_view name);  // "auto" | "scalar" | "avx2"
bool cpu_supports_avx2();

}  // namespace xmodal::kernels
