#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "metriforge/aggregators.hpp"
#include "metriforge/core.hpp"

namespace metriforge {

// ---------------------------------------------------------------------------
// Finite distance spaces
// ---------------------------------------------------------------------------

enum class Axiom { Nonnegative, ZeroDiagonal, Triangle };
std::string axiom_name(Axiom a);

// Witness of a failed axiom: (i) for ZeroDiagonal, (i, j) for Nonnegative,
// (i, j, k) for a triangle violation d(i,k) > d(i,j) + d(j,k).
struct AxiomViolation {
  Axiom axiom;
  std::size_t i = 0, j = 0, k = 0;
  double lhs = 0.0, rhs = 0.0;
  std::string describe(const std::vector<std::string>& labels) const;
};

class AxiomError : public Error {
 public:
  AxiomError(AxiomViolation v, const std::vector<std::string>& labels);
  const AxiomViolation& violation() const { return violation_; }

 private:
  AxiomViolation violation_;
};

struct FiniteSpace {
  std::vector<std::string> points;
  std::vector<double> d;  // row-major |points| x |points|
  MetricFamily axiom_class = MetricFamily::QuasiPseudometric;

  std::size_t size() const { return points.size(); }
  double at(std::size_t i, std::size_t j) const {
    return d[i * points.size() + j];
  }
  std::size_t index_of(const std::string& label) const;  // throws DomainError
};

// Checks the axioms and detects the strongest class the matrix satisfies.
// Constructed spaces are checked exactly (tol = 0); aggregated ones pass the
// comparison tolerance because evaluating F rounds.  Throws DimensionError on
// shape problems, DomainError on nonfinite entries, AxiomError otherwise.
FiniteSpace validate_space(std::vector<std::string> points,
                           std::vector<double> matrix, double tol = 0.0);
FiniteSpace validate_space(std::vector<std::string> points,
                           const std::vector<std::vector<double>>& matrix,
                           double tol = 0.0);

// ---------------------------------------------------------------------------
// Families and aggregation
// ---------------------------------------------------------------------------

struct SpaceFamily {
  AggMode mode = AggMode::Products;
  std::vector<FiniteSpace> members;
};

// Enforces the family invariants: members nonempty; in set mode every member
// carries the identical point list, order included.
SpaceFamily make_family(AggMode mode, std::vector<FiniteSpace> members);

// "(a,b,c)" label for a product point; shared by every op that enumerates
// Cartesian tuples so point lists stay comparable.
std::string tuple_label(const std::vector<std::string>& parts);

inline constexpr std::size_t kDefaultProductCap = 4096;

// Product-mode aggregation: points are Cartesian tuples, the distance between
// (x_i) and (y_i) is F applied to the componentwise distances.  The result is
// validated; an axiom failure surfaces as AxiomError naming the product
// points, which is precisely a counterexample to F's aggregation claim.
FiniteSpace product_aggregate(const AggregatorSpec& F, const SpaceFamily& fam,
                              std::size_t cap = kDefaultProductCap);

// Set-mode aggregation: same carrier, distance F((d_i(x, y))_i).
FiniteSpace set_aggregate(const AggregatorSpec& F, const SpaceFamily& fam);

// { (d_i(x, y))_i : y a point }, deduplicated, in first-occurrence order.
std::vector<NonNegTuple> image_of_ddelta(const SpaceFamily& fam,
                                         const std::string& x);

// ---------------------------------------------------------------------------
// Built-in spaces
// ---------------------------------------------------------------------------

FiniteSpace discrete_space(int n);
FiniteSpace indiscrete_space(int n);
FiniteSpace scaled_discrete_space(int n, double a);
FiniteSpace euclid_points_space(const std::vector<double>& xs);
// d(x, y) = 0 when x = y or (x, y) is the designated one-way pair (first two
// points), 1 otherwise.
FiniteSpace oneway_space(int n);
// Quasi-metric member i (1-based) of the grid construction on tuples over
// `values` (each in [0, 1)) of dimension dim:
//   d_i(x, y) = min(1, max(max_{j != i} max(x_j - y_j, 0), max(y_i - x_i, 0)))
FiniteSpace lu_grid_space(const std::vector<double>& values, int coordinate,
                          int dim, std::size_t cap = kDefaultProductCap);

// Random valid space on points x0..x(n-1): draw nonnegative entries, then
// close under min-plus until nothing changes.  The fixpoint condition is the
// exact floating-point triangle check, so validation at tol = 0 succeeds.
FiniteSpace random_valid_space(std::uint64_t seed, int n,
                               bool symmetric = false, bool separated = false);

// Shared two-point carrier, member i the scaled discrete distance a_i (zero
// entries give indiscrete members).
SpaceFamily two_point_pq_family(const std::vector<double>& a);
// All dim members of the grid construction, sharing one carrier.
SpaceFamily lu_grid_family(const std::vector<double>& values, int dim,
                           std::size_t cap = kDefaultProductCap);

// ---------------------------------------------------------------------------
// Parsing and files
// ---------------------------------------------------------------------------

// Builtin specs for the CLI: discrete(n) | indiscrete(n) |
// scaled_discrete(n,a) | euclid_points(x1,...,xk) | oneway(n) |
// two_point_pq(a1,...,an) | lu_grid(i,dim,v1,...,vk); case-insensitive,
// whitespace ignored.  two_point_pq expands to one member per weight.
std::vector<FiniteSpace> parse_builtin_spaces(const std::string& text);

// JSON object {"points": [labels], "matrix": [[rows]]}.
FiniteSpace load_space(const std::string& path, double tol = 0.0);
std::string space_to_json(const FiniteSpace& s);

}  // namespace metriforge
