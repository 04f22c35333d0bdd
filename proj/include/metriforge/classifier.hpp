#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "metriforge/aggregators.hpp"
#include "metriforge/core.hpp"

namespace metriforge {

// The seven sampled properties.  Everything the class lattice says about an
// aggregator is derived from verdicts on these.
enum class PropertyKind {
  VanishesAtZero,
  ZeroPreimageTrivial,
  Monotone,
  Subadditive,
  TripletPreserving,
  AsymmetricTriplet,
  ContinuousAtZero,
};

inline constexpr PropertyKind kAllProperties[] = {
    PropertyKind::VanishesAtZero,     PropertyKind::ZeroPreimageTrivial,
    PropertyKind::Monotone,           PropertyKind::Subadditive,
    PropertyKind::TripletPreserving,  PropertyKind::AsymmetricTriplet,
    PropertyKind::ContinuousAtZero,
};

std::string property_kind_name(PropertyKind k);

struct Tolerances {
  // Values at or below this count as zero for preimage checks; values above
  // it violate vanishing at the origin.
  double zero = 1e-9;
  // Slack added to comparison-shaped violations (monotonicity,
  // subadditivity, triplet inequalities).
  double cmp = 1e-9;
  // Threshold the smallest probed box must stay under for continuity at the
  // origin.
  double cont = 1e-6;
};

struct CheckConfig {
  SamplerConfig sampler;
  Tolerances tol;
  int workers = 1;
  // Continuity boxes probe scale * 2^-j for j = 0..cont_levels.
  int cont_levels = 40;
  // Corner passes are skipped (never truncated) when the grid or the
  // pair/triple enumeration would exceed these sizes.
  std::size_t corner_cap = 20000;
  std::size_t corner_pair_cap = 1000000;
};

// --- individual property checkers -----------------------------------------
// Sampled checkers scan the corner grid first, then exactly
// config.sampler.budget indexed draws.  Falsified verdicts carry a witness
// that re-validates against the same tolerances.

Verdict check_vanishes_at_zero(const AggregatorSpec& f, const CheckConfig& cfg);
Verdict check_zero_preimage(const AggregatorSpec& f, const CheckConfig& cfg);
Verdict check_monotone(const AggregatorSpec& f, const CheckConfig& cfg);
Verdict check_subadditive(const AggregatorSpec& f, const CheckConfig& cfg);
Verdict check_triplet_preservation(const AggregatorSpec& f,
                                   const CheckConfig& cfg);
Verdict check_asymmetric_triplet(const AggregatorSpec& f,
                                 const CheckConfig& cfg);
Verdict check_continuity_at_zero(const AggregatorSpec& f,
                                 const CheckConfig& cfg);

Verdict check_property(PropertyKind k, const AggregatorSpec& f,
                       const CheckConfig& cfg);

// True iff `w` violates property `k` for `f` beyond the configured
// tolerances; used by shrinking and by the witness-soundness tests.
bool witness_falsifies(PropertyKind k, const AggregatorSpec& f,
                       const Witness& w, const Tolerances& tol);

// Entry-wise reduction of a falsifying witness toward zeros and round values
// while it keeps falsifying.  Throws ContractError when the input does not
// falsify.  Output entries never exceed the input's.
Witness shrink_witness(const AggregatorSpec& f, PropertyKind k, Witness w,
                       const Tolerances& tol);

// Turns a dominated violation F(a) > F(b) + F(c), a <= b + c, into a witness
// against monotonicity (when F(a) > F(b + c)) or subadditivity (otherwise).
// The propagated margin can shrink by up to tol.cmp.
std::pair<PropertyKind, Witness> propagate_triplet_witness(
    const AggregatorSpec& f, const NonNegTuple& a, const NonNegTuple& b,
    const NonNegTuple& c, const Tolerances& tol);

// --- the class lattice ------------------------------------------------------

struct ClassId {
  MetricFamily family;
  AggMode mode;
  bool strongly;
  bool operator==(const ClassId&) const = default;
};

// e.g. "QM-agg(products)", "strongly-PM-agg(sets)"
std::string class_id_name(const ClassId& id);

enum class ClassState { ConsistentWith, Excluded, Undetermined };

std::string class_state_name(ClassState s);

struct ClassVerdict {
  ClassState state = ClassState::Undetermined;
  // Falsified properties responsible for an exclusion.
  std::vector<PropertyKind> blockers;
  std::string note;
};

struct ClassificationReport {
  std::string function_name;
  int arity = 1;
  std::uint64_t seed = 0;
  std::uint64_t budget = 0;
  std::vector<std::pair<PropertyKind, Verdict>> properties;  // fixed order
  std::vector<std::pair<ClassId, ClassVerdict>> classes;     // fixed order

  const Verdict& property(PropertyKind k) const;
  const ClassVerdict& class_verdict(const ClassId& id) const;
};

// Runs all seven checkers, shrinks tuple-shaped witnesses, and derives the
// sixteen class verdicts.  Set-mode metric membership beyond the
// products-implies-sets route is undecidable from the seven properties; such
// classes come back Undetermined unless a catalog certificate applies.
ClassificationReport classify(const AggregatorSpec& f, const CheckConfig& cfg);

}  // namespace metriforge
