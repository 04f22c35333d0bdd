#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace metriforge {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Tuple/arity mismatches.
struct DimensionError : Error {
  using Error::Error;
};

// Negative inputs, invalid parameters.
struct DomainError : Error {
  using Error::Error;
};

// Corner-grid enumeration over the configured cap.
struct EnumerationError : Error {
  using Error::Error;
};

// Broken preconditions of derived operations (shrink on a non-falsifying
// witness, propagation without a violation, ...).
struct ContractError : Error {
  using Error::Error;
};

// Text that does not match the aggregator grammar; carries the offset of the
// first offending character.
struct ParseError : Error {
  ParseError(const std::string& msg, std::size_t position)
      : Error(msg + " (at position " + std::to_string(position) + ")"),
        position(position) {}
  std::size_t position;
};

// ---------------------------------------------------------------------------
// Tuples
// ---------------------------------------------------------------------------

// A point of [0, +inf)^n.  Construction validates the invariants once so the
// rest of the code can take them for granted.
class NonNegTuple {
 public:
  explicit NonNegTuple(std::vector<double> values);
  static NonNegTuple zeros(int arity);

  int arity() const { return static_cast<int>(v_.size()); }
  double operator[](int i) const { return v_[static_cast<std::size_t>(i)]; }
  std::span<const double> values() const { return v_; }
  bool is_zero() const;

  // Componentwise sum; arities must match.
  NonNegTuple operator+(const NonNegTuple& o) const;
  // Componentwise order.
  bool leq(const NonNegTuple& o) const;

  bool operator==(const NonNegTuple& o) const { return v_ == o.v_; }
  bool lex_less(const NonNegTuple& o) const;

  std::string str() const;

 private:
  std::vector<double> v_;
};

bool is_triangle_triplet(const NonNegTuple& a, const NonNegTuple& b,
                         const NonNegTuple& c);

// Three tuples satisfying all three componentwise triangle inequalities.
class TriangleTriplet {
 public:
  TriangleTriplet(NonNegTuple a, NonNegTuple b, NonNegTuple c);
  const NonNegTuple& a() const { return a_; }
  const NonNegTuple& b() const { return b_; }
  const NonNegTuple& c() const { return c_; }

 private:
  NonNegTuple a_, b_, c_;
};

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

struct SamplerConfig {
  std::uint64_t seed = 42;
  std::uint64_t budget = 100000;
  double scale = 1.0;
  std::vector<double> grid_levels = {0.0, 1e-9, 1e-3, 1.0, 2.0, 3.0, 1e3};

  void validate() const;  // throws DomainError on nonsense
};

// Deterministic stream of pseudo-random values owned by a single draw.  Two
// streams built from the same (seed, draw index) yield identical sequences,
// which makes every sampler a pure function of its index and lets parallel
// workers partition index ranges without coordination.
class DrawStream {
 public:
  DrawStream(std::uint64_t seed, std::uint64_t draw_index);

  std::uint64_t next_u64();
  // Uniform on [0, 1), 53-bit resolution.
  double next_unit();
  // The sampling mixture for one coordinate: 1/4 exact zero, 1/2 uniform on
  // [0, scale], 1/4 exponential with mean scale/4.  Always consumes exactly
  // two values from the stream regardless of the branch taken.
  double next_mixture(double scale);

 private:
  std::uint64_t state_;
};

// Tuple with every coordinate drawn from the mixture.
NonNegTuple sample_mixture_tuple(const SamplerConfig& cfg, int arity,
                                 std::uint64_t draw_index);

// Triangle triplet: b and c from the mixture, each a_i uniform on
// [|b_i - c_i|, b_i + c_i], repaired so the floating-point triangle checks
// hold exactly.
TriangleTriplet sample_triplet(const SamplerConfig& cfg, int arity,
                               std::uint64_t draw_index);

// Dominated triple: b and c from the mixture, each a_i uniform on
// [0, b_i + c_i].  Returns (a, b, c) with a <= b + c componentwise; the other
// two triangle inequalities are intentionally not enforced.
struct DominatedTriple {
  NonNegTuple a, b, c;
};
DominatedTriple sample_dominated(const SamplerConfig& cfg, int arity,
                                 std::uint64_t draw_index);

inline constexpr std::size_t kDefaultCornerCap = 65536;

// All tuples over cfg.grid_levels^arity in lexicographic order.  Throws
// EnumerationError naming the cap when the grid is too large.
std::vector<NonNegTuple> corner_stream(const SamplerConfig& cfg, int arity,
                                       std::size_t cap = kDefaultCornerCap);

// ---------------------------------------------------------------------------
// Verdicts
// ---------------------------------------------------------------------------

// Where a witness came from; sampled witnesses carry their draw index so
// parallel merges can keep the earliest one.
struct Witness {
  std::vector<NonNegTuple> tuples;      // 1..3 tuples depending on the property
  std::optional<double> delta;          // continuity: box radius probed
  std::optional<double> radius;         // usc: neighborhood radius
  std::string origin;                   // "corner-grid" | "sample" | "derived"
  std::uint64_t draw_index = 0;         // valid when origin == "sample"
};

enum class VerdictStatus { ConsistentAfterBudget, Falsified };

// Outcome of a sampled semidecision.  Falsified is conclusive relative to the
// configured tolerances; ConsistentAfterBudget only reports survival.
struct Verdict {
  VerdictStatus status = VerdictStatus::ConsistentAfterBudget;
  std::optional<Witness> witness;
  std::uint64_t samples_used = 0;
  std::uint64_t seed = 0;

  bool falsified() const { return status == VerdictStatus::Falsified; }
  bool consistent() const { return status == VerdictStatus::ConsistentAfterBudget; }
};

std::string verdict_status_name(VerdictStatus s);

// ---------------------------------------------------------------------------
// Shared vocabulary
// ---------------------------------------------------------------------------

// The axiom lattice, ordered from weakest to strongest along each chain:
// QuasiPseudometric < QuasiMetric, Pseudometric < Metric.
enum class MetricFamily { QuasiPseudometric, QuasiMetric, Pseudometric, Metric };

std::string metric_family_name(MetricFamily f);

// Aggregation on products combines one space per coordinate; aggregation on
// sets combines several distances over one shared point set.
enum class AggMode { Products, Sets };

std::string agg_mode_name(AggMode m);

}  // namespace metriforge
