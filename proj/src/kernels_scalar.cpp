#include <cmath>
#include <cstring>

#include "xmodal/kernels.hpp"

// Reference kernels. Loop orders mirror the AVX2 variants (row-major C
// accumulated row by row) so the two backends differ only in lane
// association.

namespace xmodal::kernels::scalar {
namespace {

void matmul_nn(const real* a, const real* b, real* c, int64_t m, int64_t k, int64_t n,
               bool accumulate) {
  if (!accumulate) std::memset(c, 0, sizeof(real) * static_cast<size_t>(m * n));
  for (int64_t i = 0; i < m; ++i) {
    const real* arow = a + i * k;
    real* crow = c + i * n;
    for (int64_t p = 0; p < k; ++p) {
      const real av = arow[p];
      const real* brow = b + p * n;
      for (int64_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

void matmul_nt(const real* a, const real* b, real* c, int64_t m, int64_t k, int64_t n,
               bool accumulate) {
  for (int64_t i = 0; i < m; ++i) {
    const real* arow = a + i * k;
    real* crow = c + i * n;
    for (int64_t j = 0; j < n; ++j) {
      const real* brow = b + j * k;
      real acc = 0;
      for (int64_t p = 0; p < k; ++p) acc += arow[p] * brow[p];
      crow[j] = accumulate ? crow[j] + acc : acc;
    }
  }
}

void matmul_tn(const real* a, const real* b, real* c, int64_t m, int64_t k, int64_t n,
               bool accumulate) {
  if (!accumulate) std::memset(c, 0, sizeof(real) * static_cast<size_t>(m * n));
  for (int64_t p = 0; p < k; ++p) {
    const real* arow = a + p * m;
    const real* brow = b + p * n;
    for (int64_t i = 0; i < m; ++i) {
      const real av = arow[i];
      real* crow = c + i * n;
      for (int64_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

void axpy(int64_t n, real alpha, const real* x, real* y) {
  for (int64_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

real dot(int64_t n, const real* x, const real* y) {
  real acc = 0;
  for (int64_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void vadd(int64_t n, const real* a, const real* b, real* out) {
  for (int64_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}

void vmul(int64_t n, const real* a, const real* b, real* out) {
  for (int64_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void vscale(int64_t n, real alpha, const real* x, real* out) {
  for (int64_t i = 0; i < n; ++i) out[i] = alpha * x[i];
}

void colsum(const real* x, real* out, int64_t m, int64_t n, bool accumulate) {
  if (!accumulate) std::memset(out, 0, sizeof(real) * static_cast<size_t>(n));
  for (int64_t i = 0; i < m; ++i) {
    const real* row = x + i * n;
    for (int64_t j = 0; j < n; ++j) out[j] += row[j];
  }
}

void adamw_update(int64_t n, real* p, const real* g, real* m, real* v, real lr, real beta1,
                  real beta2, real eps, real weight_decay, real inv_bc1, real inv_bc2) {
  for (int64_t i = 0; i < n; ++i) {
    m[i] = beta1 * m[i] + (real(1) - beta1) * g[i];
    v[i] = beta2 * v[i] + (real(1) - beta2) * g[i] * g[i];
    const real mhat = m[i] * inv_bc1;
    const real vhat = v[i] * inv_bc2;
    p[i] -= lr * (mhat / (std::sqrt(vhat) + eps) + weight_decay * p[i]);
  }
}

}  // namespace

const Ops ops = {matmul_nn, matmul_nt, matmul_tn, axpy,         dot,
                 vadd,      vmul,      vscale,    colsum,       adamw_update};

}  // namespace xmodal::kernels::scalar
