#include "metriforge/demos.hpp"

#include <cmath>
#include <sstream>

#include "metriforge/alexandrov.hpp"
#include "metriforge/classifier.hpp"
#include "metriforge/probe.hpp"
#include "metriforge/spaces.hpp"

namespace metriforge {

namespace {

struct Recorder {
  DemoResult result;

  void expect(bool cond, const std::string& what) {
    result.checks.push_back((cond ? "ok: " : "FAIL: ") + what);
    if (!cond) result.passed = false;
  }
};

std::string num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

bool state_is(const ClassificationReport& rep, MetricFamily fam, AggMode mode,
              bool strongly, ClassState want) {
  return rep.class_verdict({fam, mode, strongly}).state == want;
}

// Max keeps exactly the componentwise zeros, so the aggregated topology
// matches the product topology on any finite family.
DemoResult demo_max_strong() {
  Recorder r;
  r.result.name = "max-strong";
  r.result.claim =
      "max vanishes exactly on the zero tuple, so on finite families the "
      "aggregated topology equals the product topology, and the canonical "
      "null sequence converges in both senses";
  r.result.passed = true;

  const AggregatorSpec f = make_max(2);
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    SpaceFamily fam = make_family(
        AggMode::Products,
        {random_valid_space(seed, 3, seed % 2 == 0),
         random_valid_space(seed + 100, 4, seed % 2 == 1)});
    const InclusionReport rep = check_product_inclusion(f, fam);
    r.expect(rep.order == TopologyOrder::Equal,
             "family seed " + std::to_string(seed) + ": topologies " +
                 topology_order_name(rep.order));
  }

  const StrongnessProbe probe = strongness_probe(f);
  r.expect(probe.verdict.consistent(), "strongness probe finds no witness");
  r.expect(probe.product.converges && probe.aggregated.converges,
           "null sequence converges in product and aggregated mode");
  return r.result;
}

// The truncated series sum_i 2^-(i+1) a_i / (1 + a_i) keeps every property
// and stays continuous at the origin.
DemoResult demo_series() {
  Recorder r;
  r.result.name = "series";
  r.result.claim =
      "the weighted series of bounded summands aggregates wide families: "
      "truncated at 8 members it passes all seven property checks, its "
      "aggregate of random members validates, and the canonical null "
      "sequence converges in the aggregated distance";
  r.result.passed = true;

  const AggregatorSpec f = make_series(8);
  const ClassificationReport rep = classify(f, {});
  for (const auto& [kind, verdict] : rep.properties)
    r.expect(verdict.consistent(),
             property_kind_name(kind) + " consistent after budget");
  r.expect(state_is(rep, MetricFamily::QuasiPseudometric, AggMode::Products,
                    true, ClassState::ConsistentWith),
           "strongly-QPM-agg(products) remains consistent");

  std::vector<FiniteSpace> members;
  for (std::uint64_t s = 0; s < 8; ++s)
    members.push_back(random_valid_space(200 + s, 2));
  const FiniteSpace agg =
      product_aggregate(f, make_family(AggMode::Products, std::move(members)));
  r.expect(agg.size() == 256,
           "aggregate of eight two-point members has 256 points");

  const StrongnessProbe probe = strongness_probe(f);
  r.expect(probe.aggregated.converges,
           "null sequence converges in the aggregated distance");
  return r.result;
}

// Dobos' function x -> (x <= 2 ? x : 1 + 1/(x - 1)) drops after 2, so it is
// not monotone, yet it still maps triangle triplets to triangle triplets.
DemoResult demo_dobos() {
  Recorder r;
  r.result.name = "dobos";
  r.result.claim =
      "the capped reciprocal map preserves triangle triplets without being "
      "monotone: metric aggregation does not need monotonicity, and the "
      "monotone characterization of quasi-pseudometric aggregation is "
      "genuinely narrower";
  r.result.passed = true;

  const AggregatorSpec f = make_dobos();
  const ClassificationReport rep = classify(f, {});
  r.expect(rep.property(PropertyKind::Monotone).falsified(),
           "monotonicity falsified");
  r.expect(rep.property(PropertyKind::AsymmetricTriplet).falsified(),
           "asymmetric triplet transfer falsified");
  for (PropertyKind k :
       {PropertyKind::VanishesAtZero, PropertyKind::ZeroPreimageTrivial,
        PropertyKind::TripletPreserving, PropertyKind::ContinuousAtZero})
    r.expect(rep.property(k).consistent(),
             property_kind_name(k) + " consistent after budget");
  r.expect(state_is(rep, MetricFamily::Metric, AggMode::Products, true,
                    ClassState::ConsistentWith),
           "strongly-M-agg(products) remains consistent");
  r.expect(state_is(rep, MetricFamily::QuasiPseudometric, AggMode::Products,
                    false, ClassState::Excluded),
           "QPM-agg(products) excluded by the monotonicity witness");

  const double left = evaluate(f, std::vector<double>{2.0});
  const double right = evaluate(f, std::vector<double>{3.0});
  r.expect(left == 2.0 && right == 1.5,
           "f(2) = " + num(left) + " > f(3) = " + num(right));
  return r.result;
}

// The positivity indicator of two distances over one carrier produces the
// discrete metric as soon as both members separate every pair.
DemoResult demo_indicator_sets() {
  Recorder r;
  r.result.name = "indicator-sets";
  r.result.claim =
      "aggregating two distances on one set with the positivity indicator "
      "yields the discrete metric when both members separate all pairs; a "
      "member with a zero collapses the result to the indiscrete "
      "pseudometric";
  r.result.passed = true;

  const AggregatorSpec f = make_indicator();
  const FiniteSpace agg = set_aggregate(
      f, make_family(AggMode::Sets, {scaled_discrete_space(3, 0.5),
                                     scaled_discrete_space(3, 2.0)}));
  r.expect(agg.axiom_class == MetricFamily::Metric,
           "aggregate over separating members is a " +
               metric_family_name(agg.axiom_class));
  bool discrete = true;
  for (std::size_t i = 0; i < agg.size(); ++i)
    for (std::size_t j = 0; j < agg.size(); ++j)
      discrete = discrete && agg.at(i, j) == (i == j ? 0.0 : 1.0);
  r.expect(discrete, "every off-diagonal distance is exactly 1");

  const FiniteSpace glued = set_aggregate(f, two_point_pq_family({0.0, 1.0}));
  r.expect(glued.axiom_class == MetricFamily::Pseudometric &&
               glued.at(0, 1) == 0.0,
           "an indiscrete member glues the carrier back together");
  return r.result;
}

// Projection keeps one member and forgets the rest, so the supremum topology
// can be strictly finer than the aggregated one.
DemoResult demo_projection_sets() {
  Recorder r;
  r.result.name = "projection-sets";
  r.result.claim =
      "a coordinate projection discards the other member: on a carrier with "
      "a discrete and an indiscrete distance the supremum topology is "
      "strictly finer than the aggregated topology, so projections do not "
      "aggregate on sets";
  r.result.passed = true;

  const AggregatorSpec f = make_projection(2, 2);
  SpaceFamily fam =
      make_family(AggMode::Sets, {discrete_space(2), indiscrete_space(2)});
  const InclusionReport rep = check_sup_inclusion(f, fam);
  r.expect(!rep.base_subset_aggregated,
           "supremum topology is not contained in the aggregated topology");
  r.expect(rep.aggregated_subset_base,
           "aggregated topology is contained in the supremum topology");
  r.expect(rep.order == TopologyOrder::SecondCoarserStrict,
           "order is " + topology_order_name(rep.order));
  r.expect(rep.witness_point && *rep.witness_point == "p" &&
               rep.witness_agg_u.size() == 2,
           "witness point p has the two-point aggregated neighborhood");
  return r.result;
}

// A zero-preimage witness is a construction recipe: scale two two-point
// members by its coordinates and the aggregated distance collapses a
// product-open set.
DemoResult demo_zero_preimage_twopoint() {
  Recorder r;
  r.result.name = "zero-preimage-twopoint";
  r.result.claim =
      "a nontrivial zero of the indicator converts into a two-point product "
      "family whose aggregated topology no longer contains the product "
      "topology: trivial zero preimage is exactly what the inclusion needs";
  r.result.passed = true;

  const AggregatorSpec f = make_indicator();
  CheckConfig cfg;
  cfg.sampler.budget = 20000;
  const Verdict v = check_property(PropertyKind::ZeroPreimageTrivial, f, cfg);
  r.expect(v.falsified() && v.witness.has_value(),
           "zero preimage falsified with a witness tuple");
  if (!v.witness) return r.result;

  const NonNegTuple& b = v.witness->tuples.front();
  r.expect(witness_falsifies(PropertyKind::ZeroPreimageTrivial, f, *v.witness,
                             cfg.tol),
           "witness re-validates beyond tolerance");
  SpaceFamily fam =
      make_family(AggMode::Products, {scaled_discrete_space(2, b[0]),
                                      scaled_discrete_space(2, b[1])});
  const InclusionReport rep = check_product_inclusion(f, fam);
  r.expect(!rep.base_subset_aggregated,
           "product topology is not contained in the aggregated topology");
  r.expect(rep.witness_point.has_value(),
           "inclusion failure names a witness point");
  return r.result;
}

// Max keeps one-way zeros, so quasi-metrics stay quasi-metrics.
DemoResult demo_oneway_quasi() {
  Recorder r;
  r.result.name = "oneway-quasi";
  r.result.claim =
      "one-way zero distances survive max aggregation: the product of a "
      "one-way pair with a discrete space is a quasi-metric whose minimal "
      "neighborhoods are asymmetric";
  r.result.passed = true;

  SpaceFamily fam =
      make_family(AggMode::Products, {oneway_space(2), discrete_space(2)});
  const FiniteSpace agg = product_aggregate(make_max(2), fam);
  r.expect(agg.axiom_class == MetricFamily::QuasiMetric,
           "aggregate is a " + metric_family_name(agg.axiom_class));

  const std::size_t pp = agg.index_of("(p,p)");
  const std::size_t qp = agg.index_of("(q,p)");
  r.expect(agg.at(pp, qp) == 0.0 && agg.at(qp, pp) == 1.0,
           "d((p,p),(q,p)) = 0 while d((q,p),(p,p)) = 1");

  const NeighborhoodMap nbhd = minimal_neighborhoods(agg);
  r.expect(nbhd.contains(pp, qp) && !nbhd.contains(qp, pp),
           "U((p,p)) contains (q,p) but not the other way around");
  return r.result;
}

// The grid construction realizes prescribed tuples: member distances from
// the origin reproduce each coordinate pair exactly.
DemoResult demo_lu_image() {
  Recorder r;
  r.result.name = "lu-image";
  r.result.claim =
      "the grid construction realizes prescribed distance tuples exactly: "
      "from the origin of the 5 by 5 grid over {0, 0.2, 0.4, 0.6, 0.8} the "
      "member distances reproduce every coordinate pair with zero error";
  r.result.passed = true;

  const std::vector<double> values = {0.0, 0.2, 0.4, 0.6, 0.8};
  SpaceFamily fam = lu_grid_family(values, 2);
  r.expect(fam.members.size() == 2 && fam.members[0].size() == 25,
           "two members on a 25-point carrier");

  const std::string origin = fam.members[0].points[0];
  const std::vector<NonNegTuple> image = image_of_ddelta(fam, origin);
  r.expect(image.size() == 25, "all 25 tuples from the origin are distinct");

  double max_err = 0.0;
  std::size_t idx = 0;
  for (double v1 : values)
    for (double v2 : values) {
      if (idx >= image.size()) break;
      max_err = std::max(max_err, std::fabs(image[idx][0] - v1));
      max_err = std::max(max_err, std::fabs(image[idx][1] - v2));
      ++idx;
    }
  r.expect(max_err == 0.0, "maximum realization error is exactly 0");
  return r.result;
}

// Jump passes every finite test yet fails continuity at the origin: the
// canonical null sequence separates the product topology from the
// aggregated distance.
DemoResult demo_jump_not_strong() {
  Recorder r;
  r.result.name = "jump-not-strong";
  r.result.claim =
      "jump (0 at 0, else 1) passes every finite check, yet the sequence "
      "1/k converges in the product topology and not in the aggregated "
      "distance: aggregation without continuity at zero is not strong";
  r.result.passed = true;

  const AggregatorSpec f = make_jump();
  const ClassificationReport rep = classify(f, {});
  r.expect(rep.property(PropertyKind::ContinuousAtZero).falsified(),
           "continuity at zero falsified");
  for (PropertyKind k :
       {PropertyKind::VanishesAtZero, PropertyKind::ZeroPreimageTrivial,
        PropertyKind::Monotone, PropertyKind::Subadditive,
        PropertyKind::TripletPreserving, PropertyKind::AsymmetricTriplet})
    r.expect(rep.property(k).consistent(),
             property_kind_name(k) + " consistent after budget");
  r.expect(state_is(rep, MetricFamily::QuasiPseudometric, AggMode::Products,
                    false, ClassState::ConsistentWith),
           "QPM-agg(products) remains consistent");
  r.expect(state_is(rep, MetricFamily::QuasiPseudometric, AggMode::Products,
                    true, ClassState::Excluded),
           "strongly-QPM-agg(products) excluded");

  const StrongnessProbe probe = strongness_probe(f);
  r.expect(probe.verdict.falsified(), "strongness probe finds a witness");
  r.expect(probe.product.converges && !probe.aggregated.converges,
           "null sequence converges in product mode only");
  return r.result;
}

}  // namespace

std::vector<std::string> demo_names() {
  return {"max-strong",       "series",
          "dobos",            "indicator-sets",
          "projection-sets",  "zero-preimage-twopoint",
          "oneway-quasi",     "lu-image",
          "jump-not-strong"};
}

DemoResult run_demo(const std::string& name) {
  if (name == "max-strong") return demo_max_strong();
  if (name == "series") return demo_series();
  if (name == "dobos") return demo_dobos();
  if (name == "indicator-sets") return demo_indicator_sets();
  if (name == "projection-sets") return demo_projection_sets();
  if (name == "zero-preimage-twopoint") return demo_zero_preimage_twopoint();
  if (name == "oneway-quasi") return demo_oneway_quasi();
  if (name == "lu-image") return demo_lu_image();
  if (name == "jump-not-strong") return demo_jump_not_strong();
  std::string known;
  for (const auto& n : demo_names()) known += (known.empty() ? "" : ", ") + n;
  throw DomainError("unknown demo '" + name + "'; known demos: " + known);
}

}  // namespace metriforge
