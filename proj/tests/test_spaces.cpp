#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "metriforge/spaces.hpp"
#include "space_helpers.hpp"

using namespace metriforge;
namespace mt = metriforge::testing;

TEST_CASE("validation classifies the textbook two-point matrices") {
  const FiniteSpace disc = validate_space({"p", "q"}, {{0, 1}, {1, 0}});
  CHECK(disc.axiom_class == MetricFamily::Metric);

  // one-way zero: asymmetric, but never zero in both directions
  const FiniteSpace ow = validate_space({"p", "q"}, {{0, 0}, {1, 0}});
  CHECK(ow.axiom_class == MetricFamily::QuasiMetric);

  const FiniteSpace ind = validate_space({"p", "q"}, {{0, 0}, {0, 0}});
  CHECK(ind.axiom_class == MetricFamily::Pseudometric);

  const FiniteSpace glued =
      validate_space({"p", "q", "r"},
                     {{0, 0, 1}, {0, 0, 1}, {1, 1, 0}});
  CHECK(glued.axiom_class == MetricFamily::Pseudometric);
}

TEST_CASE("validation rejects each axiom with a witness") {
  CHECK_THROWS_AS(validate_space({"p"}, std::vector<double>{-1.0}),
                  AxiomError);
  CHECK_THROWS_AS(validate_space({"p", "q"}, {{0, 1}, {1, 0.5}}), AxiomError);

  try {
    validate_space({"a", "b", "c"}, {{0, 1, 5}, {1, 0, 1}, {5, 1, 0}});
    FAIL("triangle violation not detected");
  } catch (const AxiomError& e) {
    CHECK(e.violation().axiom == Axiom::Triangle);
    CHECK(e.violation().i == 0);
    CHECK(e.violation().j == 1);
    CHECK(e.violation().k == 2);
    CHECK(e.violation().lhs == 5.0);
    CHECK(e.violation().rhs == 2.0);
    CHECK(std::string(e.what()).find("a") != std::string::npos);
  }

  const std::vector<std::vector<double>> short_matrix = {{0.0, 1.0}};
  CHECK_THROWS_AS(validate_space({"p", "q"}, short_matrix), DimensionError);
  CHECK_THROWS_AS(validate_space({"p", "p"}, {{0, 1}, {1, 0}}), DomainError);
}

TEST_CASE("validation agrees with the brute-force axiom oracle") {
  int valid_seen = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    DrawStream s(seed, 99);
    const std::size_t n = 2 + s.next_u64() % 4;
    std::vector<double> d(n * n);
    for (auto& x : d) {
      const double u = s.next_unit();
      x = u < 0.15 ? 0.0 : 3.0 * s.next_unit() - (u < 0.2 ? 0.5 : 0.0);
    }
    // half the time force a plausible diagonal
    if (seed % 2 == 0)
      for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 0.0;

    const mt::OracleResult oracle = mt::axiom_oracle(d, n);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i));
    try {
      const FiniteSpace sp = validate_space(labels, std::vector<double>(d));
      CHECK(oracle.valid);
      CHECK(sp.axiom_class == oracle.family);
      ++valid_seen;
    } catch (const AxiomError& e) {
      CHECK_FALSE(oracle.valid);
      // the reported witness must actually violate the named axiom
      const auto& v = e.violation();
      if (v.axiom == Axiom::Nonnegative) CHECK(d[v.i * n + v.j] < 0.0);
      if (v.axiom == Axiom::ZeroDiagonal) CHECK(d[v.i * n + v.i] != 0.0);
      if (v.axiom == Axiom::Triangle)
        CHECK(d[v.i * n + v.k] > d[v.i * n + v.j] + d[v.j * n + v.k]);
    }
  }
  CHECK(valid_seen > 0);  // the sample covers both outcomes
}

TEST_CASE("random closed spaces validate exactly and cover all families") {
  bool saw_qpm = false, saw_metric = false;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const bool sym = seed % 2 == 0;
    const bool sep = seed % 4 < 2;
    const FiniteSpace sp = mt::random_space(seed, 2 + seed % 4, sym, sep);
    if (sp.axiom_class == MetricFamily::QuasiPseudometric) saw_qpm = true;
    if (sp.axiom_class == MetricFamily::Metric) saw_metric = true;
  }
  CHECK(saw_qpm);
  CHECK(saw_metric);
}

TEST_CASE("product aggregation of max over two discrete spaces") {
  const SpaceFamily fam = make_family(
      AggMode::Products, {discrete_space(2), discrete_space(2)});
  const FiniteSpace p = product_aggregate(make_max(2), fam);
  REQUIRE(p.size() == 4);
  CHECK(p.points[0] == "(p,p)");
  CHECK(p.points[1] == "(p,q)");
  CHECK(p.points[3] == "(q,q)");
  CHECK(p.axiom_class == MetricFamily::Metric);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      CHECK(p.at(i, j) == (i == j ? 0.0 : 1.0));
}

TEST_CASE("an aggregation failure surfaces the witnessing product points") {
  const AggregatorSpec square = make_custom(
      "square", 1, [](std::span<const double> a) { return a[0] * a[0]; });
  const SpaceFamily fam =
      make_family(AggMode::Products, {euclid_points_space({0.0, 1.0, 2.0})});
  try {
    product_aggregate(square, fam);
    FAIL("expected a triangle violation");
  } catch (const AxiomError& e) {
    CHECK(e.violation().axiom == Axiom::Triangle);
    CHECK(e.violation().lhs == 4.0);
    CHECK(e.violation().rhs == 2.0);
    CHECK(std::string(e.what()).find("(0)") != std::string::npos);
    CHECK(std::string(e.what()).find("(2)") != std::string::npos);
  }
}

TEST_CASE("product preconditions") {
  CHECK_THROWS_AS(make_family(AggMode::Products, {}), DimensionError);
  const SpaceFamily fam = make_family(
      AggMode::Products, {discrete_space(2), discrete_space(2)});
  CHECK_THROWS_AS(product_aggregate(make_max(3), fam), DimensionError);
  const SpaceFamily big = make_family(
      AggMode::Products,
      {discrete_space(17), discrete_space(17), discrete_space(17)});
  CHECK_THROWS_AS(product_aggregate(make_max(3), big), EnumerationError);
  CHECK_THROWS_AS(product_aggregate(make_max(2),
                                    make_family(AggMode::Sets,
                                                {discrete_space(2),
                                                 discrete_space(2)})),
                  ContractError);
}

TEST_CASE("set aggregation reproduces the two classic examples") {
  const SpaceFamily pair = make_family(
      AggMode::Sets, {discrete_space(2), discrete_space(2)});
  const FiniteSpace ind = set_aggregate(make_indicator(), pair);
  CHECK(ind.axiom_class == MetricFamily::Metric);
  CHECK(ind.at(0, 1) == 1.0);
  CHECK(ind.points == std::vector<std::string>{"p", "q"});

  const SpaceFamily mixed = make_family(
      AggMode::Sets, {discrete_space(2), indiscrete_space(2)});
  const FiniteSpace proj = set_aggregate(make_projection(2, 2), mixed);
  CHECK(proj.axiom_class == MetricFamily::Pseudometric);
  CHECK(proj.at(0, 1) == 0.0);
  CHECK(proj.at(1, 0) == 0.0);
}

TEST_CASE("set aggregation by max over one member is the identity") {
  const FiniteSpace s = oneway_space(2);
  const SpaceFamily fam = make_family(AggMode::Sets, {s});
  const FiniteSpace out = set_aggregate(make_max(1), fam);
  CHECK(out.points == s.points);
  CHECK(out.d == s.d);
  CHECK(out.axiom_class == MetricFamily::QuasiMetric);
}

TEST_CASE("sets mode requires one shared carrier") {
  CHECK_THROWS_AS(
      make_family(AggMode::Sets, {discrete_space(2), discrete_space(3)}),
      ContractError);
}

TEST_CASE("aggregation oracle: admissible aggregators never break the axioms") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    DrawStream s(seed, 3);
    const int members = 1 + static_cast<int>(s.next_u64() % 3);
    const int n = 2 + static_cast<int>(s.next_u64() % 4);

    std::vector<FiniteSpace> shared;
    std::vector<FiniteSpace> separate;
    for (int i = 0; i < members; ++i) {
      shared.push_back(mt::random_space(1000 + seed * 7 + i, n));
      separate.push_back(
          mt::random_space(2000 + seed * 7 + i,
                           2 + static_cast<int>(s.next_u64() % 3)));
    }
    const SpaceFamily sets_fam = make_family(AggMode::Sets, shared);
    const SpaceFamily prod_fam = make_family(AggMode::Products, separate);

    for (const AggregatorSpec& f :
         {make_max(members), make_pnorm(2.0, members),
          make_weighted_sum(std::vector<double>(members, 1.0)),
          make_series(members)}) {
      CHECK_NOTHROW(product_aggregate(f, prod_fam));
      const FiniteSpace agg = set_aggregate(f, sets_fam);
      CHECK(agg.size() == static_cast<std::size_t>(n));
    }
  }
}

TEST_CASE("aggregation oracle: separation carries through for separating "
          "aggregators") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::vector<FiniteSpace> ms;
    for (int i = 0; i < 2; ++i)
      ms.push_back(mt::random_space(3000 + seed * 2 + i, 3, false, true));
    const FiniteSpace p =
        product_aggregate(make_max(2), make_family(AggMode::Products, ms));
    CHECK((p.axiom_class == MetricFamily::QuasiMetric ||
           p.axiom_class == MetricFamily::Metric));
  }
}

TEST_CASE("aggregation oracle: symmetry carries through for triplet "
          "preservers") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::vector<FiniteSpace> ms;
    for (int i = 0; i < 2; ++i)
      ms.push_back(mt::random_space(4000 + seed * 2 + i, 4, true, false));
    for (const AggregatorSpec& f : {make_max(2), make_pnorm(1.5, 2)}) {
      const FiniteSpace p =
          product_aggregate(f, make_family(AggMode::Products, ms));
      CHECK((p.axiom_class == MetricFamily::Pseudometric ||
             p.axiom_class == MetricFamily::Metric));
    }
    const FiniteSpace d = product_aggregate(
        make_dobos(),
        make_family(AggMode::Products, {mt::random_space(5000 + seed, 4, true,
                                                         true)}));
    CHECK((d.axiom_class == MetricFamily::Pseudometric ||
           d.axiom_class == MetricFamily::Metric));
  }
}

TEST_CASE("built-in spaces match their definitions") {
  const FiniteSpace d2 = discrete_space(2);
  CHECK(d2.d == std::vector<double>{0, 1, 1, 0});
  CHECK(indiscrete_space(3).axiom_class == MetricFamily::Pseudometric);
  CHECK(scaled_discrete_space(2, 0.0).axiom_class ==
        MetricFamily::Pseudometric);
  CHECK(scaled_discrete_space(2, 2.5).at(0, 1) == 2.5);

  const FiniteSpace e = euclid_points_space({0.0, 1.0, 2.5});
  CHECK(e.axiom_class == MetricFamily::Metric);
  CHECK(e.at(0, 2) == 2.5);
  CHECK(e.points[2] == "2.5");

  const FiniteSpace ow = oneway_space(2);
  CHECK(ow.at(0, 1) == 0.0);
  CHECK(ow.at(1, 0) == 1.0);
  CHECK(ow.axiom_class == MetricFamily::QuasiMetric);
  CHECK(oneway_space(3).axiom_class == MetricFamily::QuasiMetric);
}

TEST_CASE("the grid quasi-metrics realize coordinates as distances from the "
          "origin") {
  const std::vector<double> vals = {0.0, 0.25, 0.5};
  const SpaceFamily fam = lu_grid_family(vals, 2);
  REQUIRE(fam.members.size() == 2);
  for (const auto& m : fam.members)
    CHECK(m.axiom_class == MetricFamily::QuasiMetric);

  const FiniteSpace& m1 = fam.members[0];
  const FiniteSpace& m2 = fam.members[1];
  const std::size_t x0 = m1.index_of("(0,0)");
  for (std::size_t y = 0; y < m1.size(); ++y) {
    // against the origin each member reads off its own coordinate
    const std::size_t yi = y / vals.size();
    const std::size_t yj = y % vals.size();
    CHECK(m1.at(x0, y) == vals[yi]);
    CHECK(m2.at(x0, y) == vals[yj]);
  }

  // the set-mode image from the origin is the full grid [0,1)^2 slice
  const auto img = image_of_ddelta(fam, "(0,0)");
  CHECK(img.size() == 9);
}

TEST_CASE("set-mode images enumerate distinct distance tuples") {
  const SpaceFamily pair = make_family(
      AggMode::Sets, {discrete_space(2), discrete_space(2)});
  const auto img = image_of_ddelta(pair, "p");
  REQUIRE(img.size() == 2);
  CHECK(img[0] == NonNegTuple({0.0, 0.0}));
  CHECK(img[1] == NonNegTuple({1.0, 1.0}));

  const auto scaled = image_of_ddelta(two_point_pq_family({1.0, 2.0}), "p");
  REQUIRE(scaled.size() == 2);
  CHECK(scaled[1] == NonNegTuple({1.0, 2.0}));

  const SpaceFamily single = make_family(AggMode::Sets, {indiscrete_space(2)});
  CHECK(image_of_ddelta(single, "q") ==
        std::vector<NonNegTuple>{NonNegTuple({0.0})});
  CHECK_THROWS_AS(image_of_ddelta(single, "zz"), DomainError);
}

TEST_CASE("builtin parsing") {
  CHECK(parse_builtin_spaces("discrete(3)").front().size() == 3);
  CHECK(parse_builtin_spaces(" Scaled_Discrete( 2 , 0.5 ) ").front().at(0, 1) ==
        0.5);
  CHECK(parse_builtin_spaces("euclid_points(0,1,2)").front().size() == 3);
  CHECK(parse_builtin_spaces("oneway(2)").front().axiom_class ==
        MetricFamily::QuasiMetric);
  CHECK(parse_builtin_spaces("two_point_pq(0,1)").size() == 2);
  CHECK(parse_builtin_spaces("lu_grid(1,2,0,0.5)").front().size() == 4);
  CHECK_THROWS_AS(parse_builtin_spaces("banach(2)"), ParseError);
  CHECK_THROWS_AS(parse_builtin_spaces("discrete"), ParseError);
  CHECK_THROWS_AS(parse_builtin_spaces("discrete(0)"), ParseError);
  CHECK_THROWS_AS(parse_builtin_spaces("discrete(2)x"), ParseError);
}

TEST_CASE("space files round-trip") {
  const FiniteSpace s = oneway_space(2);
  const std::string path = "/tmp/metriforge_test_space.json";
  {
    std::ofstream out(path);
    out << space_to_json(s);
  }
  const FiniteSpace back = load_space(path);
  CHECK(back.points == s.points);
  CHECK(back.d == s.d);
  CHECK(back.axiom_class == s.axiom_class);
  std::remove(path.c_str());

  CHECK_THROWS_AS(load_space("/tmp/definitely_missing_space.json"),
                  DomainError);
  {
    std::ofstream out(path);
    out << "{ not json";
  }
  CHECK_THROWS_AS(load_space(path), ParseError);
  std::remove(path.c_str());
}
