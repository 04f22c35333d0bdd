#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "metriforge/core.hpp"

using namespace metriforge;

TEST_CASE("tuple construction validates entries") {
  CHECK_THROWS_AS(NonNegTuple({}), DimensionError);
  CHECK_THROWS_AS(NonNegTuple({1.0, -0.5}), DomainError);
  CHECK_THROWS_AS(NonNegTuple({std::nan("")}), DomainError);
  CHECK_THROWS_AS(NonNegTuple({std::numeric_limits<double>::infinity()}),
                  DomainError);

  const NonNegTuple t({0.0, 2.5, 1.0});
  CHECK(t.arity() == 3);
  CHECK(t[1] == 2.5);
  CHECK_FALSE(t.is_zero());
  CHECK(NonNegTuple::zeros(4).is_zero());
}

TEST_CASE("tuple sum and orders") {
  const NonNegTuple a({1.0, 0.0});
  const NonNegTuple b({0.5, 2.0});
  const NonNegTuple s = a + b;
  CHECK(s[0] == 1.5);
  CHECK(s[1] == 2.0);
  CHECK(a.leq(s));
  CHECK_FALSE(s.leq(a));
  CHECK(b.lex_less(a));
  CHECK_THROWS_AS(a + NonNegTuple({1.0}), DimensionError);
}

TEST_CASE("triangle triplet predicate") {
  const NonNegTuple a({2.0}), b({1.0}), c({1.5});
  CHECK(is_triangle_triplet(a, b, c));
  CHECK_FALSE(is_triangle_triplet(NonNegTuple({3.0}), b, c));
  CHECK_THROWS_AS(TriangleTriplet(NonNegTuple({3.0}), b, c), ContractError);
  // degenerate: all zero is a triplet
  const NonNegTuple z = NonNegTuple::zeros(2);
  CHECK(is_triangle_triplet(z, z, z));
}

TEST_CASE("draw streams are reproducible and decoupled") {
  DrawStream s1(42, 7), s2(42, 7), s3(42, 8);
  for (int i = 0; i < 16; ++i) {
    const std::uint64_t a = s1.next_u64();
    CHECK(a == s2.next_u64());
  }
  // distinct draw indices decorrelate immediately
  DrawStream s4(42, 7);
  CHECK(s4.next_u64() != s3.next_u64());
  DrawStream u(9, 0);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.next_unit();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("mixture sampling hits atoms, bulk, and tail") {
  SamplerConfig cfg;
  cfg.scale = 2.0;
  int zeros = 0, beyond = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    DrawStream s(cfg.seed, static_cast<std::uint64_t>(i));
    const double x = s.next_mixture(cfg.scale);
    CHECK(x >= 0.0);
    if (x == 0.0) ++zeros;
    if (x > cfg.scale) ++beyond;  // only the exponential branch reaches here
  }
  CHECK(zeros > n / 5);
  CHECK(zeros < n * 3 / 10);
  CHECK(beyond > 5);
}

TEST_CASE("sampled triplets satisfy the componentwise inequalities exactly") {
  SamplerConfig cfg;
  for (int arity : {1, 2, 5}) {
    for (std::uint64_t d = 0; d < 500; ++d) {
      const TriangleTriplet t = sample_triplet(cfg, arity, d);
      CHECK(is_triangle_triplet(t.a(), t.b(), t.c()));
    }
  }
}

TEST_CASE("sampled dominated triples satisfy a <= b + c exactly") {
  SamplerConfig cfg;
  for (int arity : {1, 3}) {
    for (std::uint64_t d = 0; d < 500; ++d) {
      const DominatedTriple t = sample_dominated(cfg, arity, d);
      for (int i = 0; i < arity; ++i) CHECK(t.a[i] <= t.b[i] + t.c[i]);
    }
  }
}

TEST_CASE("corner stream enumerates the grid in lexicographic order") {
  SamplerConfig cfg;
  const auto grid = corner_stream(cfg, 2);
  CHECK(grid.size() == 49);
  CHECK(grid.front() == NonNegTuple({0.0, 0.0}));
  CHECK(grid[1] == NonNegTuple({0.0, 1e-9}));
  CHECK(grid.back() == NonNegTuple({1e3, 1e3}));
  for (std::size_t i = 1; i < grid.size(); ++i)
    CHECK(grid[i - 1].lex_less(grid[i]));
  CHECK_THROWS_AS(corner_stream(cfg, 6), EnumerationError);  // 7^6 > cap
}

TEST_CASE("sampler config validation") {
  SamplerConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  SamplerConfig bad = cfg;
  bad.scale = 0.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = cfg;
  bad.budget = 0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = cfg;
  bad.grid_levels = {1.0, -2.0};
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("parse error carries a position") {
  try {
    throw ParseError("boom", 17);
  } catch (const ParseError& e) {
    CHECK(e.position == 17);
  }
}
