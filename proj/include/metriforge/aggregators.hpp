#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "metriforge/core.hpp"

namespace metriforge {

enum class AggKind {
  Max,
  Min,
  WeightedSum,
  PNorm,
  Series,
  Projection,
  Dobos,
  Jump,
  Indicator,
  Custom,
};

std::string agg_kind_name(AggKind k);

// A concrete aggregation function [0,inf)^arity -> [0,inf).  Build instances
// through the factories or parse_spec; they validate the parameters once.
struct AggregatorSpec {
  AggKind kind = AggKind::Max;
  int arity = 1;
  std::vector<double> weights;  // WeightedSum
  double p = 0.0;               // PNorm
  int truncation = 0;           // Series
  int coordinate = 0;           // Projection, 1-based
  std::string name;             // canonical spec text, or a label for Custom
  std::function<double(std::span<const double>)> custom;  // Custom only
};

AggregatorSpec make_max(int arity);
AggregatorSpec make_min(int arity);
AggregatorSpec make_weighted_sum(std::vector<double> weights);
AggregatorSpec make_pnorm(double p, int arity);
AggregatorSpec make_series(int truncation);
AggregatorSpec make_projection(int coordinate, int arity);
AggregatorSpec make_dobos();
AggregatorSpec make_jump();
AggregatorSpec make_indicator();
AggregatorSpec make_custom(std::string label, int arity,
                           std::function<double(std::span<const double>)> fn);

// Value of the aggregator; checks arity and rejects negative entries.
double evaluate(const AggregatorSpec& f, std::span<const double> a);
double evaluate(const AggregatorSpec& f, const NonNegTuple& a);

// Structure-of-arrays batch: arity rows of count samples.
struct SoaBatch {
  int arity = 1;
  std::size_t count = 0;
  std::vector<double> data;  // arity * count doubles, row-major by coordinate

  SoaBatch(int arity, std::size_t count)
      : arity(arity), count(count),
        data(static_cast<std::size_t>(arity) * count, 0.0) {}

  double* row(int i) { return data.data() + static_cast<std::size_t>(i) * count; }
  const double* row(int i) const {
    return data.data() + static_cast<std::size_t>(i) * count;
  }
  void set_column(std::size_t s, std::span<const double> tuple) {
    for (int i = 0; i < arity; ++i) row(i)[s] = tuple[static_cast<std::size_t>(i)];
  }
  void get_column(std::size_t s, std::span<double> out) const {
    for (int i = 0; i < arity; ++i) out[static_cast<std::size_t>(i)] = row(i)[s];
  }
};

// Batch evaluation; Max/Min/WeightedSum run on the dispatched kernels, the
// remaining kinds on a scalar column loop.  Results are identical to calling
// evaluate() per column.
void evaluate_batch(const AggregatorSpec& f, const SoaBatch& batch,
                    std::span<double> out);

// Upper bound on the discarded tail of the truncated series.
double series_tail_bound(int truncation);

// Grammar, case-insensitive, whitespace ignored:
//   max | min | proj(k) | wsum(w1,...,wn) | pnorm(p) | series(K)
//   | dobos | jump | indicator
// Throws ParseError with the offending position.
AggregatorSpec parse_spec(const std::string& text);

// Arity the parsed kind dictates (wsum: #weights, series: K, proj: >= k,
// dobos/jump: 1, indicator: 2); nullopt for max/min/pnorm, which take any.
std::optional<int> implied_arity(const AggregatorSpec& f);

// Instantiate a parsed spec at a concrete arity; throws DimensionError when
// the request contradicts the kind.
AggregatorSpec with_arity(AggregatorSpec f, int arity);

}  // namespace metriforge
