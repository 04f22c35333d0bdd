#include "metriforge/kernels.hpp"

#include <cstdlib>
#include <iostream>

namespace metriforge::kernels {

#if defined(METRIFORGE_HAVE_AVX2_TU)
const FnTable* avx2_table_impl();  // defined in kernels_avx2.cpp
#endif

const FnTable* avx2_table() {
#if defined(METRIFORGE_HAVE_AVX2_TU) && defined(__x86_64__)
  if (__builtin_cpu_supports("avx2")) return avx2_table_impl();
#endif
  return nullptr;
}

namespace {

const FnTable& pick_table() {
  const char* req = std::getenv("METRIFORGE_KERNEL");
  if (req != nullptr) {
    const std::string want(req);
    if (want == "scalar") return scalar_table();
    if (want == "avx2") {
      if (const FnTable* t = avx2_table()) return *t;
      std::cerr << "metriforge: METRIFORGE_KERNEL=avx2 requested but "
                   "unavailable; using scalar kernels\n";
      return scalar_table();
    }
    std::cerr << "metriforge: unknown METRIFORGE_KERNEL value '" << want
              << "'; using default dispatch\n";
  }
  if (const FnTable* t = avx2_table()) return *t;
  return scalar_table();
}

}  // namespace

const FnTable& active_table() {
  static const FnTable& table = pick_table();
  return table;
}

std::string active_kernel_name() { return active_table().name; }

}  // namespace metriforge::kernels
