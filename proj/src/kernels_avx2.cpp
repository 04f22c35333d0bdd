// AVX2 variants of the batch kernels.  This translation unit is the only one
// compiled with -mavx2; callers reach it through the dispatch table so the
// instructions never execute on CPUs without the feature.
//
// Each lane performs exactly the scalar op sequence for its sample (max/min/
// mul+add in the same order, no FMA), so outputs are bit-identical to the
// scalar table.  Violation scans work block-wise: when a 4-wide block tests
// positive, the block is re-walked scalarly so the reported index is the
// first one in scalar order.

#include "metriforge/kernels.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

namespace metriforge::kernels {

namespace {

void avx2_reduce_max(const double* data, std::size_t stride, int arity,
                     std::size_t n, double* out) {
  std::size_t s = 0;
  for (; s + 4 <= n; s += 4) {
    __m256d acc = _mm256_loadu_pd(data + s);
    for (int i = 1; i < arity; ++i)
      acc = _mm256_max_pd(
          acc, _mm256_loadu_pd(data + static_cast<std::size_t>(i) * stride + s));
    _mm256_storeu_pd(out + s, acc);
  }
  for (; s < n; ++s) {
    double acc = data[s];
    for (int i = 1; i < arity; ++i) {
      const double v = data[static_cast<std::size_t>(i) * stride + s];
      acc = acc < v ? v : acc;
    }
    out[s] = acc;
  }
}

void avx2_reduce_min(const double* data, std::size_t stride, int arity,
                     std::size_t n, double* out) {
  std::size_t s = 0;
  for (; s + 4 <= n; s += 4) {
    __m256d acc = _mm256_loadu_pd(data + s);
    for (int i = 1; i < arity; ++i)
      acc = _mm256_min_pd(
          acc, _mm256_loadu_pd(data + static_cast<std::size_t>(i) * stride + s));
    _mm256_storeu_pd(out + s, acc);
  }
  for (; s < n; ++s) {
    double acc = data[s];
    for (int i = 1; i < arity; ++i) {
      const double v = data[static_cast<std::size_t>(i) * stride + s];
      acc = v < acc ? v : acc;
    }
    out[s] = acc;
  }
}

void avx2_weighted_sum(const double* data, std::size_t stride, int arity,
                       std::size_t n, const double* weights, double* out) {
  std::size_t s = 0;
  for (; s + 4 <= n; s += 4) {
    __m256d acc = _mm256_mul_pd(_mm256_set1_pd(weights[0]),
                                _mm256_loadu_pd(data + s));
    for (int i = 1; i < arity; ++i) {
      const __m256d prod = _mm256_mul_pd(
          _mm256_set1_pd(weights[i]),
          _mm256_loadu_pd(data + static_cast<std::size_t>(i) * stride + s));
      acc = _mm256_add_pd(acc, prod);
    }
    _mm256_storeu_pd(out + s, acc);
  }
  for (; s < n; ++s) {
    double acc = weights[0] * data[s];
    for (int i = 1; i < arity; ++i)
      acc += weights[i] * data[static_cast<std::size_t>(i) * stride + s];
    out[s] = acc;
  }
}

bool avx2_first_triangle_violation(const double* d, std::size_t n, double tol,
                                   TriangleHit* hit) {
  const __m256d vtol = _mm256_set1_pd(tol);
  for (std::size_t x = 0; x < n; ++x) {
    const double* row_x = d + x * n;
    for (std::size_t y = 0; y < n; ++y) {
      const double dxy = row_x[y];
      const double* row_y = d + y * n;
      const __m256d vdxy = _mm256_set1_pd(dxy);
      std::size_t z = 0;
      for (; z + 4 <= n; z += 4) {
        const __m256d rhs = _mm256_add_pd(
            _mm256_add_pd(vdxy, _mm256_loadu_pd(row_y + z)), vtol);
        const __m256d lhs = _mm256_loadu_pd(row_x + z);
        const __m256d gt = _mm256_cmp_pd(lhs, rhs, _CMP_GT_OQ);
        if (_mm256_movemask_pd(gt)) {
          for (std::size_t zz = z; zz < z + 4; ++zz) {
            const double rhs_s = dxy + row_y[zz];
            if (row_x[zz] > rhs_s + tol) {
              *hit = TriangleHit{x, y, zz, row_x[zz], rhs_s};
              return true;
            }
          }
        }
      }
      for (; z < n; ++z) {
        const double rhs_s = dxy + row_y[z];
        if (row_x[z] > rhs_s + tol) {
          *hit = TriangleHit{x, y, z, row_x[z], rhs_s};
          return true;
        }
      }
    }
  }
  return false;
}

}  // namespace

const FnTable* avx2_table_impl() {
  static const FnTable table{
      "avx2",          avx2_reduce_max,
      avx2_reduce_min, avx2_weighted_sum,
      avx2_first_triangle_violation,
  };
  return &table;
}

}  // namespace metriforge::kernels

#endif  // __AVX2__
