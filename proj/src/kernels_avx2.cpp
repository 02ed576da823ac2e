#include <immintrin.h>

#include <cmath>
#include <cstring>

#include "xmodal/kernels.hpp"

// AVX2/FMA variants for the double-precision build. Remainders fall back to
// scalar tails; accumulation order within a row matches the scalar kernels
// up to 4-lane association.

#ifndef XMODAL_SINGLE_PRECISION

namespace xmodal::kernels::avx2 {
namespace {

void matmul_nn(const real* a, const real* b, real* c, int64_t m, int64_t k, int64_t n,
               bool accumulate) {
  if (!accumulate) std::memset(c, 0, sizeof(real) * static_cast<size_t>(m * n));
  for (int64_t i = 0; i < m; ++i) {
    const real* arow = a + i * k;
    real* crow = c + i * n;
    for (int64_t p = 0; p < k; ++p) {
      const __m256d av = _mm256_set1_pd(arow[p]);
      const real* brow = b + p * n;
      int64_t j = 0;
      for (; j + 16 <= n; j += 16) {
        _mm256_storeu_pd(crow + j,
                         _mm256_fmadd_pd(av, _mm256_loadu_pd(brow + j), _mm256_loadu_pd(crow + j)));
        _mm256_storeu_pd(crow + j + 4, _mm256_fmadd_pd(av, _mm256_loadu_pd(brow + j + 4),
                                                       _mm256_loadu_pd(crow + j + 4)));
        _mm256_storeu_pd(crow + j + 8, _mm256_fmadd_pd(av, _mm256_loadu_pd(brow + j + 8),
                                                       _mm256_loadu_pd(crow + j + 8)));
        _mm256_storeu_pd(crow + j + 12, _mm256_fmadd_pd(av, _mm256_loadu_pd(brow + j + 12),
                                                        _mm256_loadu_pd(crow + j + 12)));
      }
      for (; j + 4 <= n; j += 4) {
        _mm256_storeu_pd(crow + j,
                         _mm256_fmadd_pd(av, _mm256_loadu_pd(brow + j), _mm256_loadu_pd(crow + j)));
      }
      for (; j < n; ++j) crow[j] += arow[p] * brow[j];
    }
  }
}

inline real hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

real dot(int64_t n, const real* x, const real* y) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  int64_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  real acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void matmul_nt(const real* a, const real* b, real* c, int64_t m, int64_t k, int64_t n,
               bool accumulate) {
  for (int64_t i = 0; i < m; ++i) {
    const real* arow = a + i * k;
    real* crow = c + i * n;
    for (int64_t j = 0; j < n; ++j) {
      const real acc = dot(k, arow, b + j * k);
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
      const __m256d av = _mm256_set1_pd(arow[i]);
      real* crow = c + i * n;
      int64_t j = 0;
      for (; j + 4 <= n; j += 4) {
        _mm256_storeu_pd(crow + j,
                         _mm256_fmadd_pd(av, _mm256_loadu_pd(brow + j), _mm256_loadu_pd(crow + j)));
      }
      for (; j < n; ++j) crow[j] += arow[i] * brow[j];
    }
  }
}

void axpy(int64_t n, real alpha, const real* x, real* y) {
  const __m256d av = _mm256_set1_pd(alpha);
  int64_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void vadd(int64_t n, const real* a, const real* b, real* out) {
  int64_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) out[i] = a[i] + b[i];
}

void vmul(int64_t n, const real* a, const real* b, real* out) {
  int64_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void vscale(int64_t n, real alpha, const real* x, real* out) {
  const __m256d av = _mm256_set1_pd(alpha);
  int64_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, _mm256_mul_pd(av, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) out[i] = alpha * x[i];
}

void colsum(const real* x, real* out, int64_t m, int64_t n, bool accumulate) {
  if (!accumulate) std::memset(out, 0, sizeof(real) * static_cast<size_t>(n));
  for (int64_t i = 0; i < m; ++i) {
    const real* row = x + i * n;
    int64_t j = 0;
    for (; j + 4 <= n; j += 4)
      _mm256_storeu_pd(out + j, _mm256_add_pd(_mm256_loadu_pd(out + j), _mm256_loadu_pd(row + j)));
    for (; j < n; ++j) out[j] += row[j];
  }
}

void adamw_update(int64_t n, real* p, const real* g, real* m, real* v, real lr, real beta1,
                  real beta2, real eps, real weight_decay, real inv_bc1, real inv_bc2) {
  const __m256d b1 = _mm256_set1_pd(beta1);
  const __m256d b2 = _mm256_set1_pd(beta2);
  const __m256d one_m_b1 = _mm256_set1_pd(1.0 - beta1);
  const __m256d one_m_b2 = _mm256_set1_pd(1.0 - beta2);
  const __m256d lrv = _mm256_set1_pd(lr);
  const __m256d epsv = _mm256_set1_pd(eps);
  const __m256d wdv = _mm256_set1_pd(weight_decay);
  const __m256d bc1 = _mm256_set1_pd(inv_bc1);
  const __m256d bc2 = _mm256_set1_pd(inv_bc2);
  int64_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d gv = _mm256_loadu_pd(g + i);
    __m256d mv = _mm256_fmadd_pd(one_m_b1, gv, _mm256_mul_pd(b1, _mm256_loadu_pd(m + i)));
    __m256d vv = _mm256_fmadd_pd(one_m_b2, _mm256_mul_pd(gv, gv),
                                 _mm256_mul_pd(b2, _mm256_loadu_pd(v + i)));
    _mm256_storeu_pd(m + i, mv);
    _mm256_storeu_pd(v + i, vv);
    const __m256d mhat = _mm256_mul_pd(mv, bc1);
    const __m256d vhat = _mm256_mul_pd(vv, bc2);
    const __m256d denom = _mm256_add_pd(_mm256_sqrt_pd(vhat), epsv);
    const __m256d pv = _mm256_loadu_pd(p + i);
    const __m256d update =
        _mm256_add_pd(_mm256_div_pd(mhat, denom), _mm256_mul_pd(wdv, pv));
    _mm256_storeu_pd(p + i, _mm256_fnmadd_pd(lrv, update, pv));
  }
  for (; i < n; ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
    const real mhat = m[i] * inv_bc1;
    const real vhat = v[i] * inv_bc2;
    p[i] -= lr * (mhat / (std::sqrt(vhat) + eps) + weight_decay * p[i]);
  }
}

}  // namespace

const Ops ops = {matmul_nn, matmul_nt, matmul_tn, axpy,         dot,
                 vadd,      vmul,      vscale,    colsum,       adamw_update};

}  // namespace xmodal::kernels::avx2

#endif  // XMODAL_SINGLE_PRECISION
