#include "metriforge/aggregators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "metriforge/kernels.hpp"

namespace metriforge {

std::string agg_kind_name(AggKind k) {
  switch (k) {
    case AggKind::Max: return "Max";
    case AggKind::Min: return "Min";
    case AggKind::WeightedSum: return "WeightedSum";
    case AggKind::PNorm: return "PNorm";
    case AggKind::Series: return "Series";
    case AggKind::Projection: return "Projection";
    case AggKind::Dobos: return "Dobos";
    case AggKind::Jump: return "Jump";
    case AggKind::Indicator: return "Indicator";
    case AggKind::Custom: return "Custom";
  }
  return "?";
}

namespace {

std::string format_number(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

void check_arity_param(int arity) {
  if (arity < 1) throw DimensionError("aggregator arity must be at least 1");
}

}  // namespace

AggregatorSpec make_max(int arity) {
  check_arity_param(arity);
  return {AggKind::Max, arity, {}, 0.0, 0, 0, "max", nullptr};
}

AggregatorSpec make_min(int arity) {
  check_arity_param(arity);
  return {AggKind::Min, arity, {}, 0.0, 0, 0, "min", nullptr};
}

AggregatorSpec make_weighted_sum(std::vector<double> weights) {
  if (weights.empty()) throw DimensionError("wsum needs at least one weight");
  std::string name = "wsum(";
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] >= 0.0))
      throw DomainError("wsum weights must be nonnegative");
    if (i) name += ",";
    name += format_number(weights[i]);
  }
  name += ")";
  const int arity = static_cast<int>(weights.size());
  return {AggKind::WeightedSum, arity, std::move(weights), 0.0, 0, 0,
          std::move(name), nullptr};
}

AggregatorSpec make_pnorm(double p, int arity) {
  check_arity_param(arity);
  if (!(p >= 1.0)) throw DomainError("pnorm exponent must satisfy p >= 1");
  return {AggKind::PNorm, arity, {}, p, 0, 0, "pnorm(" + format_number(p) + ")",
          nullptr};
}

AggregatorSpec make_series(int truncation) {
  if (truncation < 1) throw DomainError("series truncation must be >= 1");
  return {AggKind::Series, truncation, {}, 0.0, truncation, 0,
          "series(" + std::to_string(truncation) + ")", nullptr};
}

AggregatorSpec make_projection(int coordinate, int arity) {
  check_arity_param(arity);
  if (coordinate < 1 || coordinate > arity)
    throw DimensionError("projection coordinate out of range 1.." +
                         std::to_string(arity));
  return {AggKind::Projection, arity, {}, 0.0, 0, coordinate,
          "proj(" + std::to_string(coordinate) + ")", nullptr};
}

AggregatorSpec make_dobos() {
  return {AggKind::Dobos, 1, {}, 0.0, 0, 0, "dobos", nullptr};
}

AggregatorSpec make_jump() {
  return {AggKind::Jump, 1, {}, 0.0, 0, 0, "jump", nullptr};
}

AggregatorSpec make_indicator() {
  return {AggKind::Indicator, 2, {}, 0.0, 0, 0, "indicator", nullptr};
}

AggregatorSpec make_custom(std::string label, int arity,
                           std::function<double(std::span<const double>)> fn) {
  check_arity_param(arity);
  if (!fn) throw DomainError("custom aggregator needs a callable");
  return {AggKind::Custom, arity, {}, 0.0, 0, 0, std::move(label),
          std::move(fn)};
}

namespace {

// Core formulas on validated input.
double evaluate_raw(const AggregatorSpec& f, std::span<const double> a) {
  switch (f.kind) {
    case AggKind::Max: {
      double acc = a[0];
      for (std::size_t i = 1; i < a.size(); ++i) acc = std::max(acc, a[i]);
      return acc;
    }
    case AggKind::Min: {
      double acc = a[0];
      for (std::size_t i = 1; i < a.size(); ++i) acc = std::min(acc, a[i]);
      return acc;
    }
    case AggKind::WeightedSum: {
      double acc = f.weights[0] * a[0];
      for (std::size_t i = 1; i < a.size(); ++i) acc += f.weights[i] * a[i];
      return acc;
    }
    case AggKind::PNorm: {
      double acc = 0.0;
      for (double x : a) acc += std::pow(x, f.p);
      return std::pow(acc, 1.0 / f.p);
    }
    case AggKind::Series: {
      double acc = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i)
        acc += std::ldexp(a[i] / (1.0 + a[i]), -static_cast<int>(i) - 1);
      return acc;
    }
    case AggKind::Projection:
      return a[static_cast<std::size_t>(f.coordinate) - 1];
    case AggKind::Dobos: {
      const double x = a[0];
      return x <= 2.0 ? x : 1.0 + 1.0 / (x - 1.0);
    }
    case AggKind::Jump:
      return a[0] == 0.0 ? 0.0 : 1.0;
    case AggKind::Indicator:
      return a[0] * a[1] == 0.0 ? 0.0 : 1.0;
    case AggKind::Custom:
      return f.custom(a);
  }
  throw DomainError("unreachable aggregator kind");
}

}  // namespace

double evaluate(const AggregatorSpec& f, std::span<const double> a) {
  if (static_cast<int>(a.size()) != f.arity)
    throw DimensionError("aggregator " + f.name + " expects arity " +
                         std::to_string(f.arity) + ", got " +
                         std::to_string(a.size()));
  for (double x : a)
    if (!(x >= 0.0))
      throw DomainError("aggregator input must be nonnegative, got " +
                        format_number(x));
  return evaluate_raw(f, a);
}

double evaluate(const AggregatorSpec& f, const NonNegTuple& a) {
  if (a.arity() != f.arity)
    throw DimensionError("aggregator " + f.name + " expects arity " +
                         std::to_string(f.arity) + ", got " +
                         std::to_string(a.arity()));
  return evaluate_raw(f, a.values());
}

void evaluate_batch(const AggregatorSpec& f, const SoaBatch& batch,
                    std::span<double> out) {
  if (batch.arity != f.arity)
    throw DimensionError("batch arity mismatch for " + f.name);
  if (out.size() < batch.count)
    throw DimensionError("batch output span too small");
  const auto& table = kernels::active_table();
  switch (f.kind) {
    case AggKind::Max:
      table.reduce_max(batch.data.data(), batch.count, batch.arity,
                       batch.count, out.data());
      return;
    case AggKind::Min:
      table.reduce_min(batch.data.data(), batch.count, batch.arity,
                       batch.count, out.data());
      return;
    case AggKind::WeightedSum:
      table.weighted_sum(batch.data.data(), batch.count, batch.arity,
                         batch.count, f.weights.data(), out.data());
      return;
    default: {
      std::vector<double> column(static_cast<std::size_t>(batch.arity));
      for (std::size_t s = 0; s < batch.count; ++s) {
        batch.get_column(s, column);
        out[s] = evaluate_raw(f, column);
      }
      return;
    }
  }
}

double series_tail_bound(int truncation) {
  if (truncation < 1) throw DomainError("series truncation must be >= 1");
  return std::ldexp(1.0, -truncation);
}

// ---------------------------------------------------------------------------
// Grammar
// ---------------------------------------------------------------------------

namespace {

struct Cursor {
  std::string text;                  // lowered, whitespace stripped
  std::vector<std::size_t> offsets;  // map back to original positions
  std::size_t pos = 0;

  explicit Cursor(const std::string& raw) {
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const unsigned char c = static_cast<unsigned char>(raw[i]);
      if (std::isspace(c)) continue;
      text.push_back(static_cast<char>(std::tolower(c)));
      offsets.push_back(i);
    }
  }

  std::size_t original_pos() const {
    return pos < offsets.size() ? offsets[pos]
                                : (offsets.empty() ? 0 : offsets.back() + 1);
  }
  bool done() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }
};

std::string read_ident(Cursor& c) {
  std::string out;
  while (!c.done() && (std::isalpha(static_cast<unsigned char>(c.peek())) ||
                       c.peek() == '_')) {
    out.push_back(c.peek());
    ++c.pos;
  }
  return out;
}

double read_number(Cursor& c) {
  const std::size_t start = c.pos;
  while (!c.done() && (std::isdigit(static_cast<unsigned char>(c.peek())) ||
                       c.peek() == '.' || c.peek() == '-' || c.peek() == '+' ||
                       c.peek() == 'e')) {
    ++c.pos;
  }
  if (c.pos == start) throw ParseError("expected a number", c.original_pos());
  const std::string token = c.text.substr(start, c.pos - start);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(token, &used);
  } catch (const std::exception&) {
    throw ParseError("malformed number '" + token + "'",
                     c.offsets[start]);
  }
  if (used != token.size())
    throw ParseError("malformed number '" + token + "'", c.offsets[start]);
  return value;
}

std::vector<double> read_args(Cursor& c) {
  if (c.done() || c.peek() != '(')
    throw ParseError("expected '('", c.original_pos());
  ++c.pos;
  std::vector<double> args;
  while (true) {
    args.push_back(read_number(c));
    if (c.done()) throw ParseError("expected ',' or ')'", c.original_pos());
    if (c.peek() == ',') {
      ++c.pos;
      continue;
    }
    if (c.peek() == ')') {
      ++c.pos;
      return args;
    }
    throw ParseError("expected ',' or ')'", c.original_pos());
  }
}

int require_positive_int(double x, const char* what, std::size_t pos) {
  if (!(x >= 1.0) || x != std::floor(x) || x > 1e6)
    throw ParseError(std::string(what) + " must be a positive integer", pos);
  return static_cast<int>(x);
}

}  // namespace

AggregatorSpec parse_spec(const std::string& raw) {
  Cursor c(raw);
  if (c.done()) throw ParseError("empty aggregator spec", 0);
  const std::size_t ident_pos = c.original_pos();
  const std::string ident = read_ident(c);
  if (ident.empty())
    throw ParseError("expected an aggregator name", c.original_pos());

  AggregatorSpec out;
  if (ident == "max" || ident == "min" || ident == "dobos" ||
      ident == "jump" || ident == "indicator") {
    if (!c.done())
      throw ParseError("unexpected trailing text after '" + ident + "'",
                       c.original_pos());
    if (ident == "max") return make_max(1);
    if (ident == "min") return make_min(1);
    if (ident == "dobos") return make_dobos();
    if (ident == "jump") return make_jump();
    return make_indicator();
  }

  if (ident == "proj" || ident == "wsum" || ident == "pnorm" ||
      ident == "series") {
    const std::size_t args_pos = c.original_pos();
    const std::vector<double> args = read_args(c);
    if (!c.done())
      throw ParseError("unexpected trailing text", c.original_pos());
    if (ident == "proj") {
      if (args.size() != 1)
        throw ParseError("proj takes exactly one argument", args_pos);
      const int k = require_positive_int(args[0], "projection coordinate",
                                         args_pos);
      return make_projection(k, k);  // widen later via with_arity
    }
    if (ident == "wsum") {
      for (double w : args)
        if (!(w >= 0.0))
          throw ParseError("wsum weights must be nonnegative", args_pos);
      return make_weighted_sum(args);
    }
    if (ident == "pnorm") {
      if (args.size() != 1)
        throw ParseError("pnorm takes exactly one argument", args_pos);
      if (!(args[0] >= 1.0))
        throw ParseError("pnorm exponent must satisfy p >= 1", args_pos);
      return make_pnorm(args[0], 1);
    }
    if (args.size() != 1)
      throw ParseError("series takes exactly one argument", args_pos);
    const int k = require_positive_int(args[0], "series truncation", args_pos);
    return make_series(k);
  }

  throw ParseError("unknown aggregator '" + ident + "'", ident_pos);
}

std::optional<int> implied_arity(const AggregatorSpec& f) {
  switch (f.kind) {
    case AggKind::WeightedSum:
      return static_cast<int>(f.weights.size());
    case AggKind::Series:
      return f.truncation;
    case AggKind::Projection:
      return f.coordinate;  // minimum workable arity
    case AggKind::Dobos:
    case AggKind::Jump:
      return 1;
    case AggKind::Indicator:
      return 2;
    case AggKind::Custom:
      return f.arity;
    default:
      return std::nullopt;
  }
}

AggregatorSpec with_arity(AggregatorSpec f, int arity) {
  check_arity_param(arity);
  switch (f.kind) {
    case AggKind::Max:
    case AggKind::Min:
    case AggKind::PNorm:
      f.arity = arity;
      return f;
    case AggKind::Projection:
      if (arity < f.coordinate)
        throw DimensionError("projection coordinate " +
                             std::to_string(f.coordinate) +
                             " exceeds requested arity " +
                             std::to_string(arity));
      f.arity = arity;
      return f;
    default:
      if (arity != f.arity)
        throw DimensionError("aggregator " + f.name + " has fixed arity " +
                             std::to_string(f.arity));
      return f;
  }
}

}  // namespace metriforge
