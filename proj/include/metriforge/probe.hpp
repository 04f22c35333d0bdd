#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "metriforge/aggregators.hpp"
#include "metriforge/classifier.hpp"
#include "metriforge/core.hpp"

namespace metriforge {

// ---------------------------------------------------------------------------
// Countable test spaces
// ---------------------------------------------------------------------------
//
// Finite spaces cannot see continuity at the zero tuple, so these probes run
// on truncations of the null sequence {0} u {1/k : 1 <= k <= K} and on
// structured images sampled toward the origin.

enum class SeqKind { Euclid, Lower, Upper };
std::string seq_kind_name(SeqKind k);

// {0} u {1/k : 1 <= k <= K} carrying d_e(x,y) = |x-y|, the lower variant
// max(x-y, 0), or the upper variant max(y-x, 0).  K >= 10.
struct SequenceSpace {
  SeqKind kind = SeqKind::Euclid;
  std::size_t K = 0;

  double distance(double x, double y) const;
};
SequenceSpace make_null_space(SeqKind kind, std::size_t K);

// Materialized test sequence on the carrier.
struct ProbeSequence {
  std::string name;
  std::vector<double> pts;
  double limit = 0.0;
};
ProbeSequence null_probe_sequence(std::size_t K);  // k-th term 1/k
ProbeSequence constant_probe_sequence(std::size_t K, double at);

// Convergence is semidecided by a tail protocol: the last tail_fraction of
// the terms must all lie below tau.  The convention is explicit so verdicts
// can carry it.
struct TailProtocol {
  double tau = 1e-6;
  double tail_fraction = 0.10;
};

enum class ProbeMode { ProductTopology, SupTopology, Aggregated };
std::string probe_mode_name(ProbeMode m);

struct ConvergenceVerdict {
  ProbeMode mode = ProbeMode::ProductTopology;
  bool converges = false;
  // First tail index whose term fails the protocol, with epsilon = tau.
  std::optional<std::pair<double, std::size_t>> epsilon_witness;
};

// Does seq converge to its limit?  Product and supremum modes ask every
// member distance d_i(limit, seq_k) to pass the tail protocol; aggregated
// mode asks F of the distance tuple to pass it.  Supremum mode requires one
// shared carrier, so all members must have the same K.  The sequence must
// have at least 100 terms.
ConvergenceVerdict converges(const std::vector<SequenceSpace>& members,
                             const AggregatorSpec* F, const ProbeSequence& seq,
                             ProbeMode mode, const TailProtocol& proto = {});

// Depth at which the tail of 1/k sits below tau = 1e-6: the last tenth of
// two million terms is under 5.6e-7.  Shallow truncations make even the
// identity fail the protocol, which is honest but uninformative.
inline constexpr std::size_t kDefaultSequenceDepth = 2000000;

struct StrongnessProbe {
  Verdict verdict;
  ConvergenceVerdict product;     // canonical null sequence, product mode
  ConvergenceVerdict aggregated;  // canonical null sequence, aggregated mode
};

// Falsifies strongness on products: F.arity copies of the Euclidean null
// space, canonical sequence 1/k -> 0.  Falsified when the product and
// aggregated verdicts disagree, with the distance tuple at the disagreeing
// index as witness.  Requires F to vanish on the zero tuple.
StrongnessProbe strongness_probe(const AggregatorSpec& F,
                                 std::size_t K = kDefaultSequenceDepth,
                                 const TailProtocol& proto = {});

// ---------------------------------------------------------------------------
// Structured images
// ---------------------------------------------------------------------------

// Curve t -> base + t * direction sampled on t = 2^-j, j = 0..kRayLevels.
// The geometric grid spans nine decades toward 0, where the interesting
// behavior lives.
inline constexpr int kRayLevels = 40;

struct Ray {
  NonNegTuple base;
  NonNegTuple direction;
  std::string name;
};

// Finite stand-in for the image of d_Delta(x, .): isolated tuples plus rays.
struct StructuredImage {
  std::vector<NonNegTuple> isolated;
  std::vector<Ray> rays;

  // Common arity; DimensionError when members disagree or nothing is there.
  int arity() const;
};

// Isolated tuples first, then each ray shallow to deep.
std::vector<NonNegTuple> image_samples(const StructuredImage& img);

// JSON object {"isolated": [[...], ...], "rays": [{"base": [...],
// "direction": [...]} | {"curve": "diag"}]} with an optional "arity" key;
// the named curve "diag" runs along the diagonal.
StructuredImage load_image(const std::string& path);

// Default grids: box radii 2^-j for j = 0..20, value levels 2^-j for
// j = 0..30.  The value grid descends below the radius grid so a shrinking
// preimage has room to stay inside the boxes.
std::vector<double> usc_radius_grid();
std::vector<double> usc_delta_grid();

// Upper semicontinuity of the value-preimage multifunction at 0, probed on
// the sampled image.  Z is the set of samples where F is exactly zero (the
// ray grid descends below any fixed positive tolerance, and every shipped
// aggregation function hits 0 exactly); V_r is the union of half-open boxes
// prod_i [max(0, z_i - r), z_i + r) over z in Z.  Falsified with witness
// (r, delta, a) when some radius r has, for every delta in the grid, a
// sample a outside V_r with F(a) < delta.  Box neighborhoods suffice
// because the arity is finite, so basic product opens are boxes.
Verdict check_usc_at_zero(const AggregatorSpec& F, const StructuredImage& img,
                          const std::vector<double>& radius_grid =
                              usc_radius_grid(),
                          const std::vector<double>& delta_grid =
                              usc_delta_grid());

// Continuity at the zero tuple of F restricted to the sampled image: the
// image must realize the zero tuple; Falsified when every box [0, delta)^n
// holds a sample with F above the continuity tolerance.
Verdict check_restricted_continuity_at_zero(
    const AggregatorSpec& F, const StructuredImage& img,
    const std::vector<double>& delta_grid = usc_delta_grid(),
    const Tolerances& tol = {});

// ---------------------------------------------------------------------------
// Scenarios
// ---------------------------------------------------------------------------

// Named probe scenarios shared by the CLI and the demos:
//   null-seq         strongness_probe on the canonical family
//   usc-projection   usc on {(0,0)} plus the ray t -> (1, t)
//   restricted-axis  restricted continuity on {0_n} plus the first axis
//   restricted-diag  restricted continuity on {0_n} plus the diagonal
struct ProbeReport {
  std::string scenario;
  Verdict verdict;
  std::vector<ConvergenceVerdict> convergences;  // null-seq only
  std::string description;
};

std::vector<std::string> probe_scenario_names();
ProbeReport run_probe_scenario(const AggregatorSpec& F,
                               const std::string& scenario,
                               std::size_t K = kDefaultSequenceDepth);

}  // namespace metriforge
