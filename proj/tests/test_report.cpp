#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "metriforge/demos.hpp"
#include "metriforge/report.hpp"

namespace mf = metriforge;

TEST_CASE("envelope carries command, version, seed, inputs in that order") {
  mf::Json inputs;
  inputs["fn"] = "max";
  const mf::Json j = mf::envelope("classify", 42, inputs);
  CHECK(j["command"] == "classify");
  CHECK(j["version"] == "0.1.0");
  CHECK(j["seed"] == 42);
  CHECK(j["inputs"]["fn"] == "max");
  const std::string s = mf::render(j);
  CHECK(s.find("\"command\"") < s.find("\"version\""));
  CHECK(s.find("\"version\"") < s.find("\"seed\""));
  CHECK(s.find("\"seed\"") < s.find("\"inputs\""));
  CHECK(s.back() == '\n');
}

TEST_CASE("witness serialization keeps optional fields optional") {
  mf::Witness w;
  w.tuples = {mf::NonNegTuple({0.0, 1e-3})};
  w.origin = "sample";
  w.draw_index = 7;
  mf::Json j = mf::witness_json(w);
  CHECK(j["tuples"][0][1] == 1e-3);
  CHECK(j["origin"] == "sample");
  CHECK(j["draw_index"] == 7);
  CHECK(!j.contains("delta"));
  CHECK(!j.contains("radius"));

  w.origin = "corner-grid";
  w.delta = 0.5;
  j = mf::witness_json(w);
  CHECK(!j.contains("draw_index"));
  CHECK(j["delta"] == 0.5);
}

TEST_CASE("verdict serialization distinguishes the two statuses") {
  mf::Verdict v;
  v.samples_used = 10;
  v.seed = 42;
  mf::Json j = mf::verdict_json(v);
  CHECK(j["status"] == "ConsistentAfterBudget");
  CHECK(!j.contains("witness"));

  v.status = mf::VerdictStatus::Falsified;
  v.witness = mf::Witness{{mf::NonNegTuple({3.0})}, {}, {}, "derived", 0};
  j = mf::verdict_json(v);
  CHECK(j["status"] == "Falsified");
  CHECK(j["witness"]["origin"] == "derived");
}

TEST_CASE("classification report serializes all properties and classes") {
  mf::CheckConfig cfg;
  cfg.sampler.budget = 20000;
  const mf::ClassificationReport rep = mf::classify(mf::make_jump(), cfg);
  const mf::Json j = mf::classification_json(rep);
  CHECK(j["function"] == "jump");
  CHECK(j["arity"] == 1);
  CHECK(j["budget"] == 20000);
  REQUIRE(j["properties"].size() == 7);
  CHECK(j["properties"][0]["property"] == "VanishesAtZero");
  CHECK(j["properties"][6]["property"] == "ContinuousAtZero");
  CHECK(j["properties"][6]["verdict"]["status"] == "Falsified");
  REQUIRE(j["classes"].size() == 16);
  bool found = false;
  for (const auto& c : j["classes"])
    if (c["class"] == "strongly-QPM-agg(products)") {
      found = true;
      CHECK(c["state"] == "Excluded");
      CHECK(c["blockers"][0] == "ContinuousAtZero");
    }
  CHECK(found);
}

TEST_CASE("classification JSON is byte-identical across runs and workers") {
  mf::CheckConfig base;
  base.sampler.budget = 20000;
  mf::CheckConfig threaded = base;
  threaded.workers = 3;
  const std::string a =
      mf::render(mf::classification_json(mf::classify(mf::make_min(2), base)));
  const std::string b =
      mf::render(mf::classification_json(mf::classify(mf::make_min(2), base)));
  const std::string c = mf::render(
      mf::classification_json(mf::classify(mf::make_min(2), threaded)));
  CHECK(a == b);
  CHECK(a == c);
}

TEST_CASE("space and violation serialization") {
  const mf::Json j = mf::space_json(mf::discrete_space(2));
  CHECK(j["points"] == mf::Json::array({"p", "q"}));
  CHECK(j["matrix"][0][1] == 1.0);
  CHECK(j["axiom_class"] == "Metric");

  try {
    mf::validate_space({"a", "b", "c"},
                       {{0.0, 1.0, 5.0}, {1.0, 0.0, 1.0}, {5.0, 1.0, 0.0}});
    FAIL("expected AxiomError");
  } catch (const mf::AxiomError& e) {
    const mf::Json v = mf::violation_json(e.violation(), {"a", "b", "c"});
    CHECK(v["axiom"] == "triangle");
    CHECK(v["lhs"] == 5.0);
    CHECK(v["rhs"] == 2.0);
    CHECK(v["description"].get<std::string>().find("c") != std::string::npos);
  }
}

TEST_CASE("inclusion report serialization for the projection example") {
  const auto fam = mf::make_family(
      mf::AggMode::Sets, {mf::discrete_space(2), mf::indiscrete_space(2)});
  const auto rep = mf::check_sup_inclusion(mf::make_projection(2, 2), fam);
  const mf::Json j = mf::inclusion_json(rep);
  CHECK(j["order"] == "SecondCoarserStrict");
  CHECK(j["base_subset_aggregated"] == false);
  CHECK(j["aggregated_subset_base"] == true);
  CHECK(j["witness_point"] == "p");
  CHECK(j["left_U"] == mf::Json::array({"p"}));
  CHECK(j["right_U"] == mf::Json::array({"p", "q"}));
  CHECK(j["aggregated_axiom_class"] == "Pseudometric");
  CHECK(j["points"] == 2);
}

TEST_CASE("probe report serialization carries the convergence pair") {
  const mf::ProbeReport rep =
      mf::run_probe_scenario(mf::make_jump(), "null-seq");
  const mf::Json j = mf::probe_json(rep);
  CHECK(j["scenario"] == "null-seq");
  CHECK(j["verdict"]["status"] == "Falsified");
  REQUIRE(j["convergences"].size() == 2);
  CHECK(j["convergences"][0]["mode"] == "ProductTopology");
  CHECK(j["convergences"][0]["converges"] == true);
  CHECK(j["convergences"][1]["mode"] == "Aggregated");
  CHECK(j["convergences"][1]["converges"] == false);
  CHECK(j["convergences"][1]["epsilon"] == 1e-6);
  const std::string once = mf::render(j);
  const std::string twice =
      mf::render(mf::probe_json(mf::run_probe_scenario(mf::make_jump(), "null-seq")));
  CHECK(once == twice);
}

TEST_CASE("all nine demos pass their own checks") {
  const std::vector<std::string> names = mf::demo_names();
  REQUIRE(names.size() == 9);
  for (const auto& name : names) {
    CAPTURE(name);
    const mf::DemoResult res = mf::run_demo(name);
    CHECK(res.name == name);
    CHECK(!res.claim.empty());
    CHECK(!res.checks.empty());
    CHECK(res.passed);
    for (const auto& line : res.checks) {
      CAPTURE(line);
      CHECK(line.rfind("ok: ", 0) == 0);
    }
  }
}

TEST_CASE("unknown demo names are rejected") {
  CHECK_THROWS_AS(mf::run_demo("frobnicate"), mf::DomainError);
}
