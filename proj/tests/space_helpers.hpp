#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "metriforge/core.hpp"
#include "metriforge/spaces.hpp"

namespace metriforge::testing {

inline FiniteSpace random_space(std::uint64_t seed, int n,
                                bool symmetric = false,
                                bool separated = false) {
  return random_valid_space(seed, n, symmetric, separated);
}

// Independent axiom oracle: a plain triple loop over the raw matrix,
// reporting validity and, when valid, the strongest class.
struct OracleResult {
  bool valid = false;
  bool symmetric = false;
  bool separated = false;
  MetricFamily family = MetricFamily::QuasiPseudometric;
};

inline OracleResult axiom_oracle(const std::vector<double>& d, std::size_t n) {
  OracleResult r;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (d[i * n + j] < 0.0) return r;
  for (std::size_t i = 0; i < n; ++i)
    if (d[i * n + i] != 0.0) return r;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z)
        if (d[x * n + z] > d[x * n + y] + d[y * n + z]) return r;
  r.valid = true;
  r.symmetric = true;
  r.separated = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (d[i * n + j] != d[j * n + i]) r.symmetric = false;
      if (i != j && d[i * n + j] == 0.0 && d[j * n + i] == 0.0)
        r.separated = false;
    }
  r.family = r.symmetric
                 ? (r.separated ? MetricFamily::Metric
                                : MetricFamily::Pseudometric)
                 : (r.separated ? MetricFamily::QuasiMetric
                                : MetricFamily::QuasiPseudometric);
  return r;
}

}  // namespace metriforge::testing
