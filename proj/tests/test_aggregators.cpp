#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "metriforge/aggregators.hpp"
#include "metriforge/core.hpp"

using namespace metriforge;

TEST_CASE("pointwise values of the built-in aggregators") {
  CHECK(evaluate(make_max(3), NonNegTuple({1.0, 5.0, 2.0})) == 5.0);
  CHECK(evaluate(make_min(3), NonNegTuple({1.0, 5.0, 2.0})) == 1.0);
  CHECK(evaluate(make_weighted_sum({0.5, 2.0}), NonNegTuple({2.0, 1.0})) == 3.0);
  CHECK(evaluate(make_pnorm(2.0, 2), NonNegTuple({3.0, 4.0})) ==
        doctest::Approx(5.0));
  CHECK(evaluate(make_projection(2, 3), NonNegTuple({5.0, 7.0, 9.0})) == 7.0);

  const AggregatorSpec dobos = make_dobos();
  CHECK(evaluate(dobos, NonNegTuple({0.0})) == 0.0);
  CHECK(evaluate(dobos, NonNegTuple({2.0})) == 2.0);
  CHECK(evaluate(dobos, NonNegTuple({3.0})) == 1.5);
  CHECK(evaluate(dobos, NonNegTuple({1001.0})) == doctest::Approx(1.001));

  const AggregatorSpec jump = make_jump();
  CHECK(evaluate(jump, NonNegTuple({0.0})) == 0.0);
  CHECK(evaluate(jump, NonNegTuple({1e-300})) == 1.0);

  const AggregatorSpec ind = make_indicator();
  CHECK(evaluate(ind, NonNegTuple({0.0, 5.0})) == 0.0);
  CHECK(evaluate(ind, NonNegTuple({5.0, 0.0})) == 0.0);
  CHECK(evaluate(ind, NonNegTuple({0.5, 0.25})) == 1.0);

  // each term is 2^-(i+1) * 1/2, so the total is (1/2 + 1/4 + 1/8) / 2
  CHECK(evaluate(make_series(3), NonNegTuple({1.0, 1.0, 1.0})) == 0.4375);
}

TEST_CASE("series tail bound") {
  CHECK(series_tail_bound(16) == std::ldexp(1.0, -16));
  CHECK(series_tail_bound(1) == 0.5);
  // truncation error is below the bound for a saturated tail
  const AggregatorSpec s4 = make_series(4);
  const AggregatorSpec s8 = make_series(8);
  const double v4 = evaluate(s4, NonNegTuple({1, 1, 1, 1}));
  const double v8 = evaluate(s8, NonNegTuple({1, 1, 1, 1, 1, 1, 1, 1}));
  CHECK(v8 - v4 <= series_tail_bound(4));
}

TEST_CASE("evaluate validates arity and sign") {
  CHECK_THROWS_AS(evaluate(make_max(2), std::vector<double>{1.0}),
                  DimensionError);
  CHECK_THROWS_AS(evaluate(make_max(2), std::vector<double>{1.0, -2.0}),
                  DomainError);
}

TEST_CASE("pnorm dominates max and is dominated by the sum") {
  const AggregatorSpec p3 = make_pnorm(3.0, 4);
  const AggregatorSpec mx = make_max(4);
  SamplerConfig cfg;
  for (std::uint64_t d = 0; d < 2000; ++d) {
    const NonNegTuple a = sample_mixture_tuple(cfg, 4, d);
    const double pv = evaluate(p3, a);
    double sum = 0;
    for (int i = 0; i < 4; ++i) sum += a[i];
    CHECK(pv >= evaluate(mx, a) - 1e-12);
    CHECK(pv <= sum + 1e-9 * (1.0 + sum));
  }
}

TEST_CASE("batch evaluation equals pointwise evaluation") {
  SamplerConfig cfg;
  const std::size_t n = 131;
  for (const AggregatorSpec& f :
       {make_max(3), make_min(3), make_weighted_sum({1.0, 0.5, 0.0}),
        make_pnorm(2.5, 3), make_series(3), make_projection(3, 3)}) {
    SoaBatch batch(3, n);
    for (std::size_t s = 0; s < n; ++s)
      batch.set_column(s, sample_mixture_tuple(cfg, 3, s).values());
    std::vector<double> out(n);
    evaluate_batch(f, batch, out);
    std::vector<double> col(3);
    for (std::size_t s = 0; s < n; ++s) {
      batch.get_column(s, col);
      CHECK(out[s] == evaluate(f, col));
    }
  }
}

TEST_CASE("spec parsing accepts the documented grammar") {
  CHECK(parse_spec("max").kind == AggKind::Max);
  CHECK(parse_spec(" MIN ").kind == AggKind::Min);
  CHECK(parse_spec("dobos").kind == AggKind::Dobos);
  CHECK(parse_spec("Jump").kind == AggKind::Jump);
  CHECK(parse_spec("indicator").arity == 2);

  const AggregatorSpec w = parse_spec("wsum( 1 , 0.5 )");
  CHECK(w.kind == AggKind::WeightedSum);
  CHECK(w.arity == 2);
  CHECK(w.weights == std::vector<double>{1.0, 0.5});

  CHECK(parse_spec("pnorm(2)").p == 2.0);
  CHECK(parse_spec("series(16)").truncation == 16);
  CHECK(parse_spec("series(16)").arity == 16);
  CHECK(parse_spec("proj(2)").coordinate == 2);
}

TEST_CASE("spec parsing rejects malformed input with positions") {
  CHECK_THROWS_AS(parse_spec(""), ParseError);
  CHECK_THROWS_AS(parse_spec("frobnicate"), ParseError);
  CHECK_THROWS_AS(parse_spec("max(2)"), ParseError);
  CHECK_THROWS_AS(parse_spec("wsum()"), ParseError);
  CHECK_THROWS_AS(parse_spec("wsum(1,-2)"), ParseError);
  CHECK_THROWS_AS(parse_spec("proj(0)"), ParseError);
  CHECK_THROWS_AS(parse_spec("series(2.5)"), ParseError);
  CHECK_THROWS_AS(parse_spec("pnorm(0.5)"), ParseError);
  try {
    parse_spec("pnorm(0.5)");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("p >= 1") != std::string::npos);
    CHECK(e.position == 5);  // anchored at the argument list
  }
}

TEST_CASE("arity instantiation rules") {
  CHECK(implied_arity(parse_spec("wsum(1,2,3)")) == 3);
  CHECK(implied_arity(parse_spec("dobos")) == 1);
  CHECK(implied_arity(parse_spec("max")) == std::nullopt);

  CHECK(with_arity(parse_spec("max"), 5).arity == 5);
  CHECK(with_arity(parse_spec("pnorm(2)"), 4).arity == 4);
  CHECK(with_arity(parse_spec("proj(2)"), 6).arity == 6);
  CHECK_THROWS_AS(with_arity(parse_spec("proj(3)"), 2), DimensionError);
  CHECK_THROWS_AS(with_arity(parse_spec("dobos"), 2), DimensionError);
  CHECK(with_arity(parse_spec("series(4)"), 4).arity == 4);
}

TEST_CASE("custom aggregators evaluate through the same path") {
  const AggregatorSpec f = make_custom("half-sum", 2, [](std::span<const double> a) {
    return 0.5 * (a[0] + a[1]);
  });
  CHECK(evaluate(f, NonNegTuple({1.0, 3.0})) == 2.0);
  CHECK_THROWS_AS(make_custom("bad", 1, nullptr), DomainError);
}
