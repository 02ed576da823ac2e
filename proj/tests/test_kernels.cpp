#include <cmath>
#include <cstring>
#include <vector>

#include "doctest.h"
#include "xmodal/kernels.hpp"
#include "xmodal/rng.hpp"

using namespace xmodal;

namespace {

Tensor random_tensor(Rng& rng, std::vector<int64_t> shape) {
  Tensor t(std::move(shape));
  rng.fill_normal(t, 0.0, 1.0);
  return t;
}

double max_rel_diff(const std::vector<real>& a, const std::vector<real>& b) {
  double worst = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double denom = std::max({std::fabs(double(a[i])), std::fabs(double(b[i])), 1e-12});
    worst = std::max(worst, std::fabs(double(a[i]) - double(b[i])) / denom);
  }
  return worst;
}

}  // namespace

TEST_CASE("scalar matmul_nn matches a plain triple loop") {
  Rng rng(11);
  const Tensor a = random_tensor(rng, {5, 7});
  const Tensor b = random_tensor(rng, {7, 3});
  Tensor c({5, 3});
  kernels::scalar::ops.matmul_nn(a.ptr(), b.ptr(), c.ptr(), 5, 7, 3, false);
  for (int64_t i = 0; i < 5; ++i)
    for (int64_t j = 0; j < 3; ++j) {
      double expect = 0;
      for (int64_t p = 0; p < 7; ++p) expect += double(a.at(i, p)) * double(b.at(p, j));
      CHECK(double(c.at(i, j)) == doctest::Approx(expect).epsilon(1e-12));
    }
}

#if XMODAL_HAVE_AVX2_TU
TEST_CASE("avx2 kernels are equivalent to the scalar references") {
  if (!kernels::cpu_supports_avx2()) return;
  const auto& s = kernels::scalar::ops;
  const auto& x = kernels::avx2::ops;

  // Odd sizes on purpose so the vector tails are exercised.
  for (uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    Rng rng(seed);
    const int64_t m = 3 + static_cast<int64_t>(rng.uniform_below(14));
    const int64_t k = 1 + static_cast<int64_t>(rng.uniform_below(37));
    const int64_t n = 1 + static_cast<int64_t>(rng.uniform_below(23));
    const Tensor a = random_tensor(rng, {m, k});
    const Tensor b = random_tensor(rng, {k, n});
    const Tensor bt = random_tensor(rng, {n, k});
    const Tensor at = random_tensor(rng, {k, m});

    Tensor c0({m, n}), c1({m, n});
    s.matmul_nn(a.ptr(), b.ptr(), c0.ptr(), m, k, n, false);
    x.matmul_nn(a.ptr(), b.ptr(), c1.ptr(), m, k, n, false);
    CHECK(max_rel_diff(c0.data, c1.data) < 1e-12);

    s.matmul_nt(a.ptr(), bt.ptr(), c0.ptr(), m, k, n, false);
    x.matmul_nt(a.ptr(), bt.ptr(), c1.ptr(), m, k, n, false);
    CHECK(max_rel_diff(c0.data, c1.data) < 1e-12);

    s.matmul_tn(at.ptr(), b.ptr(), c0.ptr(), m, k, n, false);
    x.matmul_tn(at.ptr(), b.ptr(), c1.ptr(), m, k, n, false);
    CHECK(max_rel_diff(c0.data, c1.data) < 1e-12);

    // Accumulating forms start from the same prior contents.
    Tensor prior = random_tensor(rng, {m, n});
    c0 = prior;
    c1 = prior;
    s.matmul_nn(a.ptr(), b.ptr(), c0.ptr(), m, k, n, true);
    x.matmul_nn(a.ptr(), b.ptr(), c1.ptr(), m, k, n, true);
    CHECK(max_rel_diff(c0.data, c1.data) < 1e-12);

    const int64_t len = 1 + static_cast<int64_t>(rng.uniform_below(100));
    const Tensor vx = random_tensor(rng, {1, len});
    Tensor y0 = random_tensor(rng, {1, len});
    Tensor y1 = y0;
    s.axpy(len, 0.37, vx.ptr(), y0.ptr());
    x.axpy(len, 0.37, vx.ptr(), y1.ptr());
    CHECK(max_rel_diff(y0.data, y1.data) < 1e-12);

    CHECK(std::fabs(s.dot(len, vx.ptr(), y0.ptr()) - x.dot(len, vx.ptr(), y0.ptr())) /
              std::max(1.0, std::fabs(s.dot(len, vx.ptr(), y0.ptr()))) <
          1e-12);

    Tensor o0({1, len}), o1({1, len});
    s.vadd(len, vx.ptr(), y0.ptr(), o0.ptr());
    x.vadd(len, vx.ptr(), y0.ptr(), o1.ptr());
    CHECK(0 == std::memcmp(o0.ptr(), o1.ptr(), sizeof(real) * size_t(len)));
    s.vmul(len, vx.ptr(), y0.ptr(), o0.ptr());
    x.vmul(len, vx.ptr(), y0.ptr(), o1.ptr());
    CHECK(0 == std::memcmp(o0.ptr(), o1.ptr(), sizeof(real) * size_t(len)));
    s.vscale(len, -1.25, vx.ptr(), o0.ptr());
    x.vscale(len, -1.25, vx.ptr(), o1.ptr());
    CHECK(0 == std::memcmp(o0.ptr(), o1.ptr(), sizeof(real) * size_t(len)));

    Tensor cs0({1, n}), cs1({1, n});
    s.colsum(b.ptr(), cs0.ptr(), k, n, false);
    x.colsum(b.ptr(), cs1.ptr(), k, n, false);
    CHECK(max_rel_diff(cs0.data, cs1.data) < 1e-12);

    // AdamW update equivalence on one buffer.
    Tensor p0 = random_tensor(rng, {1, len});
    Tensor p1 = p0;
    Tensor g = random_tensor(rng, {1, len});
    Tensor m0({1, len}), m1({1, len}), v0({1, len}), v1({1, len});
    s.adamw_update(len, p0.ptr(), g.ptr(), m0.ptr(), v0.ptr(), 1e-3, 0.9, 0.999, 1e-8, 0.05,
                   1.0 / (1 - 0.9), 1.0 / (1 - 0.999));
    x.adamw_update(len, p1.ptr(), g.ptr(), m1.ptr(), v1.ptr(), 1e-3, 0.9, 0.999, 1e-8, 0.05,
                   1.0 / (1 - 0.9), 1.0 / (1 - 0.999));
    CHECK(max_rel_diff(p0.data, p1.data) < 1e-12);
    CHECK(max_rel_diff(m0.data, m1.data) < 1e-12);
    CHECK(max_rel_diff(v0.data, v1.data) < 1e-12);
  }
}
#endif

TEST_CASE("backend selection is explicit and reversible") {
  const std::string original(kernels::active_name());
  kernels::select_backend("scalar");
  CHECK(kernels::active_name() == "scalar");
  kernels::select_backend("auto");
#if XMODAL_HAVE_AVX2_TU
  if (kernels::cpu_supports_avx2()) CHECK(kernels::active_name() == "avx2");
#endif
  kernels::select_backend(original);
}

TEST_CASE("kernel calls are bitwise repeatable within a process") {
  Rng rng(99);
  const Tensor a = random_tensor(rng, {9, 17});
  const Tensor b = random_tensor(rng, {17, 11});
  Tensor c0({9, 11}), c1({9, 11});
  kernels::active().matmul_nn(a.ptr(), b.ptr(), c0.ptr(), 9, 17, 11, false);
  kernels::active().matmul_nn(a.ptr(), b.ptr(), c1.ptr(), 9, 17, 11, false);
  CHECK(0 == std::memcmp(c0.ptr(), c1.ptr(), sizeof(real) * c0.data.size()));
}
