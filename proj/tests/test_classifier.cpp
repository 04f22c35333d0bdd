#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <string>

#include "metriforge/classifier.hpp"

using namespace metriforge;

namespace {

CheckConfig test_config(int workers = 1) {
  CheckConfig cfg;
  cfg.sampler.budget = 20000;
  cfg.workers = workers;
  return cfg;
}

// compact per-property picture: 'C' consistent, 'F' falsified, in the fixed
// report order
std::string verdict_row(const ClassificationReport& r) {
  std::string out;
  for (const auto& [kind, v] : r.properties)
    out += v.falsified() ? 'F' : 'C';
  return out;
}

ClassState state_of(const ClassificationReport& r, MetricFamily fam,
                    AggMode mode, bool strongly) {
  return r.class_verdict(ClassId{fam, mode, strongly}).state;
}

}  // namespace

TEST_CASE("property verdicts for the built-in aggregators") {
  const CheckConfig cfg = test_config();
  // order: Vanishes, ZeroPreimage, Monotone, Subadditive, Triplet, Asym, Cont
  CHECK(verdict_row(classify(make_max(3), cfg)) == "CCCCCCC");
  CHECK(verdict_row(classify(make_weighted_sum({1.0, 0.5}), cfg)) == "CCCCCCC");
  CHECK(verdict_row(classify(make_series(8), cfg)) == "CCCCCCC");
  CHECK(verdict_row(classify(make_dobos(), cfg)) == "CCFCCFC");
  CHECK(verdict_row(classify(make_min(2), cfg)) == "CFCFFFC");
  CHECK(verdict_row(classify(make_jump(), cfg)) == "CCCCCCF");
  CHECK(verdict_row(classify(make_indicator(), cfg)) == "CFCFFFF");
  CHECK(verdict_row(classify(make_projection(2, 2), cfg)) == "CFCCCCC");
}

TEST_CASE("falsifying witnesses re-validate and corner hits consume no budget") {
  const CheckConfig cfg = test_config();
  for (const AggregatorSpec& f :
       {make_max(2), make_min(2), make_dobos(), make_jump(), make_indicator(),
        make_projection(2, 2)}) {
    const ClassificationReport r = classify(f, cfg);
    for (const auto& [kind, v] : r.properties) {
      if (!v.falsified()) continue;
      REQUIRE(v.witness.has_value());
      CHECK(witness_falsifies(kind, f, *v.witness, cfg.tol));
      if (v.witness->origin == "corner-grid" &&
          kind != PropertyKind::ContinuousAtZero)
        CHECK(v.samples_used == 0);
    }
  }
}

TEST_CASE("shrunken witnesses for the classic counterexamples") {
  const CheckConfig cfg = test_config();

  const ClassificationReport dob = classify(make_dobos(), cfg);
  const Witness& mono = *dob.property(PropertyKind::Monotone).witness;
  REQUIRE(mono.tuples.size() == 2);
  CHECK(mono.tuples[0] == NonNegTuple({2.0}));
  CHECK(mono.tuples[1] == NonNegTuple({3.0}));
  CHECK(mono.origin == "corner-grid");
  const Witness& asym = *dob.property(PropertyKind::AsymmetricTriplet).witness;
  REQUIRE(asym.tuples.size() == 3);
  CHECK(asym.tuples[0] == NonNegTuple({2.0}));
  CHECK(asym.tuples[1] == NonNegTuple({0.0}));
  CHECK(asym.tuples[2] == NonNegTuple({3.0}));

  const ClassificationReport ind = classify(make_indicator(), cfg);
  const Witness& sub = *ind.property(PropertyKind::Subadditive).witness;
  CHECK(sub.tuples[0] == NonNegTuple({0.0, 1e-9}));
  CHECK(sub.tuples[1] == NonNegTuple({1e-9, 0.0}));

  const ClassificationReport prj = classify(make_projection(2, 2), cfg);
  const Witness& zp = *prj.property(PropertyKind::ZeroPreimageTrivial).witness;
  CHECK(zp.tuples[0] == NonNegTuple({1e-3, 0.0}));
}

TEST_CASE("continuity failure reports the level that witnessed it") {
  const CheckConfig cfg = test_config();
  const ClassificationReport r = classify(make_jump(), cfg);
  const Verdict& v = r.property(PropertyKind::ContinuousAtZero);
  REQUIRE(v.falsified());
  REQUIRE(v.witness->delta.has_value());
  CHECK(*v.witness->delta == std::ldexp(cfg.sampler.scale, -cfg.cont_levels));
  CHECK(v.witness->tuples[0][0] < *v.witness->delta);
  CHECK(v.witness->tuples[0][0] > 0.0);
}

TEST_CASE("shrinking walks a sampled violation down to small integers") {
  const AggregatorSpec f = make_dobos();
  const Tolerances tol;
  Witness w{{NonNegTuple({2.7}), NonNegTuple({4.9})}, std::nullopt,
            std::nullopt, "sample", 12};
  REQUIRE(witness_falsifies(PropertyKind::Monotone, f, w, tol));
  const Witness s = shrink_witness(f, PropertyKind::Monotone, w, tol);
  CHECK(s.tuples[0] == NonNegTuple({2.0}));
  CHECK(s.tuples[1] == NonNegTuple({4.0}));
  // a non-falsifying witness is a caller bug
  Witness bad{{NonNegTuple({1.0}), NonNegTuple({2.0})}, std::nullopt,
              std::nullopt, "sample", 0};
  CHECK_THROWS_AS(shrink_witness(f, PropertyKind::Monotone, bad, tol),
                  ContractError);
}

TEST_CASE("triplet violations propagate to a monotonicity or subadditivity "
          "failure") {
  const Tolerances tol;

  SUBCASE("monotone branch") {
    const auto [kind, w] = propagate_triplet_witness(
        make_dobos(), NonNegTuple({2.0}), NonNegTuple({0.0}),
        NonNegTuple({3.0}), tol);
    CHECK(kind == PropertyKind::Monotone);
    CHECK(w.tuples[0] == NonNegTuple({2.0}));
    CHECK(w.tuples[1] == NonNegTuple({3.0}));
    CHECK(witness_falsifies(kind, make_dobos(), w, tol));
  }

  SUBCASE("subadditive branch") {
    const auto [kind, w] = propagate_triplet_witness(
        make_min(2), NonNegTuple({1.0, 1.0}), NonNegTuple({0.0, 1.0}),
        NonNegTuple({1.0, 0.0}), tol);
    CHECK(kind == PropertyKind::Subadditive);
    CHECK(w.tuples[0] == NonNegTuple({0.0, 1.0}));
    CHECK(w.tuples[1] == NonNegTuple({1.0, 0.0}));
    CHECK(witness_falsifies(kind, make_min(2), w, tol));
  }

  SUBCASE("preconditions are enforced") {
    CHECK_THROWS_AS(
        propagate_triplet_witness(make_min(1), NonNegTuple({3.0}),
                                  NonNegTuple({1.0}), NonNegTuple({1.0}), tol),
        ContractError);
    CHECK_THROWS_AS(
        propagate_triplet_witness(make_max(1), NonNegTuple({1.0}),
                                  NonNegTuple({1.0}), NonNegTuple({1.0}), tol),
        ContractError);
  }
}

TEST_CASE("class placements for the built-in aggregators") {
  const CheckConfig cfg = test_config();
  const auto qpm = MetricFamily::QuasiPseudometric;
  const auto qm = MetricFamily::QuasiMetric;
  const auto pm = MetricFamily::Pseudometric;
  const auto m = MetricFamily::Metric;
  const auto P = AggMode::Products;
  const auto S = AggMode::Sets;
  const auto Yes = ClassState::ConsistentWith;
  const auto No = ClassState::Excluded;
  const auto Open = ClassState::Undetermined;

  SUBCASE("max lands everywhere") {
    const auto r = classify(make_max(3), cfg);
    for (const auto& [id, v] : r.classes) CHECK(v.state == Yes);
  }

  SUBCASE("dobos is pseudometric-side only") {
    const auto r = classify(make_dobos(), cfg);
    CHECK(state_of(r, qpm, P, false) == No);
    CHECK(state_of(r, qm, P, false) == No);
    CHECK(state_of(r, qm, S, false) == No);
    CHECK(state_of(r, pm, P, false) == Yes);
    CHECK(state_of(r, pm, S, false) == Yes);
    CHECK(state_of(r, m, P, false) == Yes);
    CHECK(state_of(r, m, S, false) == Yes);
    CHECK(state_of(r, qpm, P, true) == No);
    CHECK(state_of(r, pm, P, true) == Yes);
    CHECK(state_of(r, m, S, true) == Yes);
  }

  SUBCASE("projection keeps pseudometric classes and drops separation") {
    const auto r = classify(make_projection(2, 2), cfg);
    CHECK(state_of(r, qpm, P, false) == Yes);
    CHECK(state_of(r, qpm, S, false) == Yes);
    CHECK(state_of(r, qm, P, false) == No);
    CHECK(state_of(r, qm, S, false) == Open);
    CHECK(state_of(r, m, P, false) == No);
    CHECK(state_of(r, m, S, false) == Open);
    CHECK(state_of(r, qpm, P, true) == No);
  }

  SUBCASE("jump is a metric aggregator but never strong") {
    const auto r = classify(make_jump(), cfg);
    CHECK(state_of(r, qpm, P, false) == Yes);
    CHECK(state_of(r, qm, S, false) == Yes);
    CHECK(state_of(r, m, P, false) == Yes);
    CHECK(state_of(r, m, S, false) == Yes);
    CHECK(state_of(r, qpm, P, true) == No);
    CHECK(state_of(r, m, P, true) == No);
    CHECK(state_of(r, m, S, true) == No);
    const auto& sm = r.class_verdict(ClassId{m, S, true});
    CHECK(sm.note.find("diagonal") != std::string::npos);
  }

  SUBCASE("indicator separates products from sets in the metric row") {
    const auto r = classify(make_indicator(), cfg);
    CHECK(state_of(r, m, P, false) == No);
    CHECK(state_of(r, m, S, false) == Yes);
    CHECK(r.class_verdict(ClassId{m, S, false}).note.find("certified") !=
          std::string::npos);
    CHECK(state_of(r, m, S, true) == No);
    CHECK(state_of(r, qpm, P, false) == No);
  }

  SUBCASE("min fails even the weakest class") {
    const auto r = classify(make_min(2), cfg);
    CHECK(state_of(r, qpm, P, false) == No);
    CHECK(state_of(r, qm, S, false) == No);
    CHECK(state_of(r, pm, P, false) == No);
    CHECK(state_of(r, m, S, false) == Open);
    CHECK(state_of(r, m, S, true) == Open);
  }

  SUBCASE("series is strong in every family") {
    const auto r = classify(make_series(8), cfg);
    for (const auto& [id, v] : r.classes) CHECK(v.state == Yes);
  }
}

TEST_CASE("reports are identical across worker counts") {
  // violation region away from the corner grid forces a sampled hit
  const AggregatorSpec f = make_custom(
      "bump", 1, [](std::span<const double> a) {
        return (a[0] > 0.3 && a[0] < 0.5) ? 10.0 : a[0];
      });
  const ClassificationReport r1 = classify(f, test_config(1));
  const ClassificationReport r3 = classify(f, test_config(3));
  REQUIRE(r1.properties.size() == r3.properties.size());
  for (std::size_t i = 0; i < r1.properties.size(); ++i) {
    const Verdict& a = r1.properties[i].second;
    const Verdict& b = r3.properties[i].second;
    CHECK(a.status == b.status);
    CHECK(a.samples_used == b.samples_used);
    CHECK(a.witness.has_value() == b.witness.has_value());
    if (a.witness && b.witness) {
      CHECK(a.witness->draw_index == b.witness->draw_index);
      REQUIRE(a.witness->tuples.size() == b.witness->tuples.size());
      for (std::size_t t = 0; t < a.witness->tuples.size(); ++t)
        CHECK(a.witness->tuples[t] == b.witness->tuples[t]);
    }
  }
  // the bump breaks monotonicity (and it must be found by sampling)
  const Verdict& mono = r1.property(PropertyKind::Monotone);
  CHECK(mono.falsified());
  CHECK(mono.witness->origin == "sample");
}

TEST_CASE("budget accounting for consistent verdicts") {
  CheckConfig cfg = test_config();
  cfg.sampler.budget = 7777;  // not divisible by the level count
  const ClassificationReport r = classify(make_max(2), cfg);
  for (const auto& [kind, v] : r.properties) {
    if (kind == PropertyKind::VanishesAtZero) continue;
    CHECK(v.samples_used == cfg.sampler.budget);
  }
}

TEST_CASE("class and property names are stable") {
  CHECK(property_kind_name(PropertyKind::Subadditive) == "Subadditive");
  CHECK(class_id_name(ClassId{MetricFamily::QuasiMetric, AggMode::Products,
                              false}) == "QM-agg(products)");
  CHECK(class_id_name(ClassId{MetricFamily::Pseudometric, AggMode::Sets,
                              true}) == "strongly-PM-agg(sets)");
  CHECK(class_state_name(ClassState::Undetermined) == "Undetermined");
}
