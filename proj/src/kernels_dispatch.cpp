#include <cstdlib>
#include <stdexcept>
#include <string>

#include "xmodal/kernels.hpp"

namespace xmodal::kernels {
namespace {

struct Selection {
  const Ops* ops;
  const char* name;
};

Selection pick(std::string_view request) {
  if (request == "scalar") return {&scalar::ops, "scalar"};
#if XMODAL_HAVE_AVX2_TU
  if (request == "avx2") {
    if (!cpu_supports_avx2()) throw std::runtime_error("kernels: avx2 requested but CPU lacks it");
    return {&avx2::ops, "avx2"};
  }
  if (request == "auto") {
    if (cpu_supports_avx2()) return {&avx2::ops, "avx2"};
    return {&scalar::ops, "scalar"};
  }
#else
  if (request == "avx2") throw std::runtime_error("kernels: avx2 backend not built in");
  if (request == "auto") return {&scalar::ops, "scalar"};
#endif
  throw std::runtime_error("kernels: unknown backend '" + std::string(request) + "'");
}

Selection initial() {
  const char* env = std::getenv("XMODAL_KERNELS");
  return pick(env && *env ? env : "auto");
}

Selection g_active = initial();

}  // namespace

bool cpu_supports_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Ops& active() { return *g_active.ops; }

std::string_view active_name() { return g_active.name; }

void select_backend(std::string_view name) { g_active = pick(name); }

}  // namespace xmodal::kernels
