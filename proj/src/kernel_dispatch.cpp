#include <cstdlib>
#include <string_view>

#include "pipeflow/kinetic.hpp"

namespace pipeflow::kinetic {

bool cpu_supports_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

namespace {

struct Selected {
  FluxBatchFn fn;
  const char* name;
};

Selected resolve() {
  const char* env = std::getenv("PIPEFLOW_KERNEL");
  const std::string_view want = env ? env : "auto";
#if defined(__x86_64__) || defined(_M_X64)
  if (want != "scalar" && cpu_supports_avx2()) {
    return {flux_batch_avx2, "avx2"};
  }
#endif
  return {flux_batch_scalar, "scalar"};
}

const Selected& selected() {
  static const Selected s = resolve();
  return s;
}

}  // namespace

FluxBatchFn active_flux_batch() { return selected().fn; }

const char* active_flux_batch_name() { return selected().name; }

}  // namespace pipeflow::kinetic
