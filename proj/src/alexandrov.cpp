#include "metriforge/alexandrov.hpp"

#include <algorithm>
#include <utility>

namespace metriforge {

namespace {

std::size_t words_for(std::size_t n) { return (n + 63) / 64; }

bool bit_at(const std::vector<std::uint64_t>& row, std::size_t i) {
  return (row[i / 64] >> (i % 64)) & 1u;
}

void set_bit(std::vector<std::uint64_t>& row, std::size_t i) {
  row[i / 64] |= std::uint64_t{1} << (i % 64);
}

bool row_subset(const std::vector<std::uint64_t>& a,
                const std::vector<std::uint64_t>& b) {
  for (std::size_t w = 0; w < a.size(); ++w)
    if (a[w] & ~b[w]) return false;
  return true;
}

void assert_invariants(const NeighborhoodMap& m) {
  for (std::size_t x = 0; x < m.size(); ++x) {
    if (!m.contains(x, x))
      throw ContractError("minimal neighborhood of " + m.points[x] +
                          " does not contain it");
    for (std::size_t y = 0; y < m.size(); ++y)
      if (m.contains(x, y) && !row_subset(m.rows[y], m.rows[x]))
        throw ContractError("neighborhoods are not transitive at " +
                            m.points[x] + " via " + m.points[y]);
  }
}

std::vector<std::string> labels_of_row(const NeighborhoodMap& m,
                                       const std::vector<std::uint64_t>& row) {
  std::vector<std::string> out;
  for (std::size_t y = 0; y < m.size(); ++y)
    if (bit_at(row, y)) out.push_back(m.points[y]);
  return out;
}

}  // namespace

bool NeighborhoodMap::contains(std::size_t x, std::size_t y) const {
  return bit_at(rows[x], y);
}

std::vector<std::string> NeighborhoodMap::neighborhood(std::size_t x) const {
  return labels_of_row(*this, rows[x]);
}

std::vector<std::string> NeighborhoodMap::neighborhood(
    const std::string& label) const {
  const auto it = std::find(points.begin(), points.end(), label);
  if (it == points.end()) throw DomainError("unknown point " + label);
  return neighborhood(static_cast<std::size_t>(it - points.begin()));
}

std::string topology_order_name(TopologyOrder o) {
  switch (o) {
    case TopologyOrder::Equal: return "Equal";
    case TopologyOrder::FirstCoarserStrict: return "FirstCoarserStrict";
    case TopologyOrder::SecondCoarserStrict: return "SecondCoarserStrict";
    case TopologyOrder::Incomparable: return "Incomparable";
  }
  throw DomainError("unreachable topology order");
}

NeighborhoodMap minimal_neighborhoods(const FiniteSpace& s) {
  const std::size_t n = s.size();
  NeighborhoodMap m;
  m.points = s.points;
  m.rows.assign(n, std::vector<std::uint64_t>(words_for(n), 0));
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (s.at(x, y) == 0.0) set_bit(m.rows[x], y);
  assert_invariants(m);
  return m;
}

NeighborhoodMap product_neighborhoods(const std::vector<NeighborhoodMap>& maps,
                                      std::size_t cap) {
  if (maps.empty())
    throw DimensionError("a product needs at least one topology");
  const std::size_t m = maps.size();

  std::size_t total = 1;
  for (const auto& f : maps) {
    if (total > cap / f.size())
      throw EnumerationError("product space exceeds the cap of " +
                             std::to_string(cap) + " points");
    total *= f.size();
  }

  // odometer over member point indices, last member fastest
  std::vector<std::vector<std::size_t>> coords;
  coords.reserve(total);
  std::vector<std::size_t> cur(m, 0);
  for (std::size_t p = 0; p < total; ++p) {
    coords.push_back(cur);
    for (std::size_t i = m; i-- > 0;) {
      if (++cur[i] < maps[i].size()) break;
      cur[i] = 0;
    }
  }

  NeighborhoodMap out;
  out.points.reserve(total);
  std::vector<std::string> parts(m);
  for (const auto& c : coords) {
    for (std::size_t i = 0; i < m; ++i) parts[i] = maps[i].points[c[i]];
    out.points.push_back(tuple_label(parts));
  }

  out.rows.assign(total, std::vector<std::uint64_t>(words_for(total), 0));
  for (std::size_t x = 0; x < total; ++x)
    for (std::size_t y = 0; y < total; ++y) {
      bool in = true;
      for (std::size_t i = 0; i < m && in; ++i)
        in = maps[i].contains(coords[x][i], coords[y][i]);
      if (in) set_bit(out.rows[x], y);
    }
  assert_invariants(out);
  return out;
}

NeighborhoodMap supremum_neighborhoods(
    const std::vector<NeighborhoodMap>& maps) {
  if (maps.empty())
    throw DimensionError("a supremum needs at least one topology");
  for (const auto& f : maps)
    if (f.points != maps.front().points)
      throw ContractError(
          "the supremum topology needs maps on the identical point list");

  NeighborhoodMap out = maps.front();
  for (std::size_t k = 1; k < maps.size(); ++k)
    for (std::size_t x = 0; x < out.size(); ++x)
      for (std::size_t w = 0; w < out.rows[x].size(); ++w)
        out.rows[x][w] &= maps[k].rows[x][w];
  assert_invariants(out);
  return out;
}

TopologyOrder compare(const NeighborhoodMap& a, const NeighborhoodMap& b) {
  if (a.points != b.points)
    throw ContractError("compared topologies need the identical point list");
  bool a_in_b = true, b_in_a = true;
  for (std::size_t x = 0; x < a.size() && (a_in_b || b_in_a); ++x) {
    if (a_in_b && !row_subset(b.rows[x], a.rows[x])) a_in_b = false;
    if (b_in_a && !row_subset(a.rows[x], b.rows[x])) b_in_a = false;
  }
  if (a_in_b && b_in_a) return TopologyOrder::Equal;
  if (a_in_b) return TopologyOrder::FirstCoarserStrict;
  if (b_in_a) return TopologyOrder::SecondCoarserStrict;
  return TopologyOrder::Incomparable;
}

namespace {

InclusionReport finish_inclusion(NeighborhoodMap base, FiniteSpace agg_space,
                                 const SpaceFamily& fam,
                                 const std::string& base_name) {
  NeighborhoodMap agg = minimal_neighborhoods(agg_space);
  if (base.points != agg.points)
    throw ContractError("base and aggregated point lists diverged");

  InclusionReport r;
  r.order = compare(base, agg);
  r.base_subset_aggregated = r.order == TopologyOrder::Equal ||
                             r.order == TopologyOrder::FirstCoarserStrict;
  r.aggregated_subset_base = r.order == TopologyOrder::Equal ||
                             r.order == TopologyOrder::SecondCoarserStrict;

  const bool want_agg_in_base = !r.base_subset_aggregated;
  if (!r.base_subset_aggregated || !r.aggregated_subset_base) {
    for (std::size_t x = 0; x < base.size(); ++x) {
      const bool ok = want_agg_in_base
                          ? row_subset(agg.rows[x], base.rows[x])
                          : row_subset(base.rows[x], agg.rows[x]);
      if (!ok) {
        r.witness_point = base.points[x];
        r.witness_base_u = labels_of_row(base, base.rows[x]);
        r.witness_agg_u = labels_of_row(agg, agg.rows[x]);
        break;
      }
    }
  }

  r.all_members_metric = true;
  for (const auto& s : fam.members)
    if (s.axiom_class != MetricFamily::Metric) r.all_members_metric = false;
  if (r.all_members_metric)
    r.note = "every member is a metric, so the " + base_name +
             " topology is discrete; agreement on a finite family says "
             "nothing about continuity at the zero tuple (see the probe)";

  r.base = std::move(base);
  r.aggregated = std::move(agg);
  r.aggregated_space = std::move(agg_space);
  return r;
}

std::vector<NeighborhoodMap> member_maps(const SpaceFamily& fam) {
  std::vector<NeighborhoodMap> maps;
  maps.reserve(fam.members.size());
  for (const auto& s : fam.members) maps.push_back(minimal_neighborhoods(s));
  return maps;
}

}  // namespace

InclusionReport check_product_inclusion(const AggregatorSpec& F,
                                        const SpaceFamily& fam,
                                        std::size_t cap) {
  FiniteSpace agg_space = product_aggregate(F, fam, cap);
  NeighborhoodMap base = product_neighborhoods(member_maps(fam), cap);
  return finish_inclusion(std::move(base), std::move(agg_space), fam,
                          "product");
}

InclusionReport check_sup_inclusion(const AggregatorSpec& F,
                                    const SpaceFamily& fam) {
  FiniteSpace agg_space = set_aggregate(F, fam);
  NeighborhoodMap base = supremum_neighborhoods(member_maps(fam));
  return finish_inclusion(std::move(base), std::move(agg_space), fam,
                          "supremum");
}

}  // namespace metriforge
