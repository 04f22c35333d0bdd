#include "metriforge/kernels.hpp"

#include <algorithm>

namespace metriforge::kernels {

namespace {

void scalar_reduce_max(const double* data, std::size_t stride, int arity,
                       std::size_t n, double* out) {
  for (std::size_t s = 0; s < n; ++s) {
    double acc = data[s];
    for (int i = 1; i < arity; ++i)
      acc = std::max(acc, data[static_cast<std::size_t>(i) * stride + s]);
    out[s] = acc;
  }
}

void scalar_reduce_min(const double* data, std::size_t stride, int arity,
                       std::size_t n, double* out) {
  for (std::size_t s = 0; s < n; ++s) {
    double acc = data[s];
    for (int i = 1; i < arity; ++i)
      acc = std::min(acc, data[static_cast<std::size_t>(i) * stride + s]);
    out[s] = acc;
  }
}

void scalar_weighted_sum(const double* data, std::size_t stride, int arity,
                         std::size_t n, const double* weights, double* out) {
  for (std::size_t s = 0; s < n; ++s) {
    double acc = weights[0] * data[s];
    for (int i = 1; i < arity; ++i)
      acc += weights[i] * data[static_cast<std::size_t>(i) * stride + s];
    out[s] = acc;
  }
}

bool scalar_first_triangle_violation(const double* d, std::size_t n,
                                     double tol, TriangleHit* hit) {
  for (std::size_t x = 0; x < n; ++x) {
    const double* row_x = d + x * n;
    for (std::size_t y = 0; y < n; ++y) {
      const double dxy = row_x[y];
      const double* row_y = d + y * n;
      for (std::size_t z = 0; z < n; ++z) {
        const double rhs = dxy + row_y[z];
        if (row_x[z] > rhs + tol) {
          *hit = TriangleHit{x, y, z, row_x[z], rhs};
          return true;
        }
      }
    }
  }
  return false;
}

}  // namespace

const FnTable& scalar_table() {
  static const FnTable table{
      "scalar",           scalar_reduce_max,
      scalar_reduce_min,  scalar_weighted_sum,
      scalar_first_triangle_violation,
  };
  return table;
}

}  // namespace metriforge::kernels
