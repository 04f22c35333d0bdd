#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

namespace metriforge::kernels {

// Batch layout: structure-of-arrays.  `data` holds `arity` rows of `n`
// doubles; row i starts at data + i * stride.  Every kernel processes sample
// s using exactly the scalar reference op order, so the scalar and SIMD
// variants produce bit-identical results (the build disables FMA
// contraction to keep that true).

struct TriangleHit {
  std::size_t x = 0, y = 0, z = 0;
  double lhs = 0, rhs = 0;
};

struct FnTable {
  const char* name;
  void (*reduce_max)(const double* data, std::size_t stride, int arity,
                     std::size_t n, double* out);
  void (*reduce_min)(const double* data, std::size_t stride, int arity,
                     std::size_t n, double* out);
  void (*weighted_sum)(const double* data, std::size_t stride, int arity,
                       std::size_t n, const double* weights, double* out);
  // First (x, y, z) in lexicographic order with
  //   d[x*n+z] > d[x*n+y] + d[y*n+z] + tol.
  bool (*first_triangle_violation)(const double* d, std::size_t n, double tol,
                                   TriangleHit* hit);
};

const FnTable& scalar_table();
// Null when the binary or the CPU lacks AVX2.
const FnTable* avx2_table();

// Runtime selection: AVX2 when available, overridable with
// METRIFORGE_KERNEL=scalar|avx2 (the latter falls back to scalar with a
// warning to stderr when unsupported).
const FnTable& active_table();

std::string active_kernel_name();

}  // namespace metriforge::kernels
