#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "metriforge/aggregators.hpp"
#include "metriforge/spaces.hpp"

namespace metriforge {

// ---------------------------------------------------------------------------
// Finite Alexandrov topologies
// ---------------------------------------------------------------------------
//
// A finite space carries the ball topology of its distance, with base
// B(x, eps) = {y : d(x, y) < eps}.  We represent that topology by the
// minimal open neighborhood of each point, which determines it completely:
//
//   Let Z(x) = {y : d(x, y) = 0} and let m(x) be the least strictly positive
//   entry of row x (any positive value when the row is all zero).  For every
//   0 < eps <= m(x) the ball B(x, eps) equals Z(x), since d(x, y) < eps
//   forces d(x, y) = 0; and every ball B(x, eps) contains Z(x), since its
//   members sit at distance 0 < eps.  Any open set O containing x contains
//   some ball around x, hence contains Z(x), so Z(x) is the smallest open
//   set containing x and a set is open exactly when it contains Z(x) for
//   each of its points x.  The map x -> Z(x) therefore carries the whole
//   topology.  Transitivity of the map is the triangle inequality in
//   miniature: d(x, y) = 0 and d(y, z) = 0 give d(x, z) <= 0 + 0.
//
// Zero means exactly zero here.  Constructed spaces are validated exactly,
// and every shipped aggregation function maps the zero tuple to 0.0 without
// rounding, so aggregated spaces keep exact zeros where it matters.

// Minimal open neighborhoods as bit rows over the point list.  Invariants:
// x is in U(x), and y in U(x) implies U(y) subset of U(x).
struct NeighborhoodMap {
  std::vector<std::string> points;
  std::vector<std::vector<std::uint64_t>> rows;  // rows[x] bit y: y in U(x)

  std::size_t size() const { return points.size(); }
  bool contains(std::size_t x, std::size_t y) const;
  // U(x) as point labels in point order.  Label lookup throws DomainError.
  std::vector<std::string> neighborhood(std::size_t x) const;
  std::vector<std::string> neighborhood(const std::string& label) const;
};

// How two topologies on the same point list relate.
enum class TopologyOrder {
  Equal,
  FirstCoarserStrict,   // first is a strict subtopology of the second
  SecondCoarserStrict,  // second is a strict subtopology of the first
  Incomparable,
};
std::string topology_order_name(TopologyOrder o);

// U(x) = {y : d(x, y) = 0}.  Throws ContractError if the result violates the
// NeighborhoodMap invariants, which a validated space cannot do.
NeighborhoodMap minimal_neighborhoods(const FiniteSpace& s);

// Product topology: points are Cartesian tuples in the same order and with
// the same labels as product_aggregate, U((x_i)) is the product of the
// member neighborhoods.  Boxes are minimal opens because the factor list is
// finite.  Throws EnumerationError past the cap.
NeighborhoodMap product_neighborhoods(const std::vector<NeighborhoodMap>& maps,
                                      std::size_t cap = kDefaultProductCap);

// Supremum topology on a shared carrier: U(x) is the intersection of the
// member neighborhoods.  Throws ContractError when point lists differ.
NeighborhoodMap supremum_neighborhoods(
    const std::vector<NeighborhoodMap>& maps);

// Orders the topologies: the first is a subtopology of the second exactly
// when U_second(x) is contained in U_first(x) at every point (smaller
// minimal neighborhoods mean a finer topology).  Throws ContractError when
// point lists differ.
TopologyOrder compare(const NeighborhoodMap& a, const NeighborhoodMap& b);

// Outcome of comparing a base topology (product or supremum of the members)
// against the ball topology of the aggregated space.
struct InclusionReport {
  TopologyOrder order = TopologyOrder::Equal;  // base vs aggregated
  bool base_subset_aggregated = false;
  bool aggregated_subset_base = false;
  // First point witnessing the failed inclusion: of base in aggregated when
  // that fails, otherwise of aggregated in base.  Absent when Equal.
  std::optional<std::string> witness_point;
  std::vector<std::string> witness_base_u;  // U_base(witness)
  std::vector<std::string> witness_agg_u;   // U_aggregated(witness)
  // Metric members make the base discrete, so Equal on a finite family says
  // nothing about continuity at the zero tuple; the note flags that case.
  bool all_members_metric = false;
  std::string note;
  NeighborhoodMap base;
  NeighborhoodMap aggregated;
  FiniteSpace aggregated_space;
};

// Does the product topology of the members sit inside the topology of the
// aggregated product space?  Errors from aggregation and validation
// propagate; an AxiomError means F failed to aggregate this family at all.
InclusionReport check_product_inclusion(const AggregatorSpec& F,
                                        const SpaceFamily& fam,
                                        std::size_t cap = kDefaultProductCap);

// Same question for the supremum topology against set-mode aggregation.
InclusionReport check_sup_inclusion(const AggregatorSpec& F,
                                    const SpaceFamily& fam);

}  // namespace metriforge
