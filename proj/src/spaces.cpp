#include "metriforge/spaces.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "metriforge/kernels.hpp"

namespace metriforge {

std::string axiom_name(Axiom a) {
  switch (a) {
    case Axiom::Nonnegative: return "nonnegative";
    case Axiom::ZeroDiagonal: return "zero-diagonal";
    case Axiom::Triangle: return "triangle";
  }
  return "?";
}

std::string AxiomViolation::describe(
    const std::vector<std::string>& labels) const {
  std::ostringstream os;
  switch (axiom) {
    case Axiom::Nonnegative:
      os << "negative distance d(" << labels[i] << "," << labels[j]
         << ") = " << lhs;
      break;
    case Axiom::ZeroDiagonal:
      os << "nonzero diagonal d(" << labels[i] << "," << labels[i]
         << ") = " << lhs;
      break;
    case Axiom::Triangle:
      os << "triangle violation d(" << labels[i] << "," << labels[k]
         << ") = " << lhs << " > d(" << labels[i] << "," << labels[j]
         << ") + d(" << labels[j] << "," << labels[k] << ") = " << rhs;
      break;
  }
  return os.str();
}

AxiomError::AxiomError(AxiomViolation v, const std::vector<std::string>& labels)
    : Error(v.describe(labels)), violation_(v) {}

std::size_t FiniteSpace::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < points.size(); ++i)
    if (points[i] == label) return i;
  throw DomainError("unknown point '" + label + "'");
}

FiniteSpace validate_space(std::vector<std::string> points,
                           std::vector<double> matrix, double tol) {
  const std::size_t n = points.size();
  if (n == 0) throw DimensionError("a space needs at least one point");
  if (matrix.size() != n * n)
    throw DimensionError("matrix size " + std::to_string(matrix.size()) +
                         " does not match " + std::to_string(n) + " points");
  {
    std::set<std::string> seen(points.begin(), points.end());
    if (seen.size() != n) throw DomainError("point labels must be distinct");
  }
  for (double x : matrix)
    if (!std::isfinite(x)) throw DomainError("distances must be finite");

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (matrix[i * n + j] < 0.0)
        throw AxiomError({Axiom::Nonnegative, i, j, 0, matrix[i * n + j], 0.0},
                         points);
  for (std::size_t i = 0; i < n; ++i)
    if (matrix[i * n + i] > tol)
      throw AxiomError({Axiom::ZeroDiagonal, i, 0, 0, matrix[i * n + i], 0.0},
                       points);

  kernels::TriangleHit hit{};
  if (kernels::active_table().first_triangle_violation(matrix.data(), n, tol,
                                                       &hit))
    throw AxiomError(
        {Axiom::Triangle, hit.x, hit.y, hit.z, hit.lhs, hit.rhs}, points);

  bool symmetric = true;
  bool separated = true;
  for (std::size_t i = 0; i < n && (symmetric || separated); ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::fabs(matrix[i * n + j] - matrix[j * n + i]) > tol)
        symmetric = false;
      if (!(std::max(matrix[i * n + j], matrix[j * n + i]) > tol))
        separated = false;
    }
  }
  const MetricFamily family =
      symmetric ? (separated ? MetricFamily::Metric : MetricFamily::Pseudometric)
                : (separated ? MetricFamily::QuasiMetric
                             : MetricFamily::QuasiPseudometric);
  return FiniteSpace{std::move(points), std::move(matrix), family};
}

FiniteSpace validate_space(std::vector<std::string> points,
                           const std::vector<std::vector<double>>& matrix,
                           double tol) {
  std::vector<double> flat;
  flat.reserve(points.size() * points.size());
  if (matrix.size() != points.size())
    throw DimensionError("matrix row count does not match points");
  for (const auto& row : matrix) {
    if (row.size() != points.size())
      throw DimensionError("matrix must be square");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return validate_space(std::move(points), std::move(flat), tol);
}

SpaceFamily make_family(AggMode mode, std::vector<FiniteSpace> members) {
  if (members.empty()) throw DimensionError("a family needs members");
  if (mode == AggMode::Sets) {
    for (const auto& m : members)
      if (m.points != members.front().points)
        throw ContractError(
            "sets-mode members must share the identical point list");
  }
  return SpaceFamily{mode, std::move(members)};
}

namespace {

// Aggregation rounds, so downstream validation allows for it.
constexpr double kAggregatedTol = 1e-9;

}  // namespace

std::string tuple_label(const std::vector<std::string>& parts) {
  std::string out = "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ",";
    out += parts[i];
  }
  return out + ")";
}

FiniteSpace product_aggregate(const AggregatorSpec& F, const SpaceFamily& fam,
                              std::size_t cap) {
  if (fam.mode != AggMode::Products)
    throw ContractError("product_aggregate needs a products-mode family");
  const std::size_t m = fam.members.size();
  if (static_cast<std::size_t>(F.arity) != m)
    throw DimensionError("aggregator arity " + std::to_string(F.arity) +
                         " does not match " + std::to_string(m) + " members");

  std::size_t total = 1;
  for (const auto& s : fam.members) {
    if (total > cap / s.size())
      throw EnumerationError("product space exceeds the cap of " +
                             std::to_string(cap) + " points");
    total *= s.size();
  }

  // odometer over member point indices, last member fastest
  std::vector<std::vector<std::size_t>> coords;
  coords.reserve(total);
  std::vector<std::size_t> cur(m, 0);
  for (std::size_t p = 0; p < total; ++p) {
    coords.push_back(cur);
    for (std::size_t i = m; i-- > 0;) {
      if (++cur[i] < fam.members[i].size()) break;
      cur[i] = 0;
    }
  }

  std::vector<std::string> labels;
  labels.reserve(total);
  std::vector<std::string> parts(m);
  for (const auto& c : coords) {
    for (std::size_t i = 0; i < m; ++i)
      parts[i] = fam.members[i].points[c[i]];
    labels.push_back(tuple_label(parts));
  }

  std::vector<double> matrix(total * total);
  SoaBatch batch(static_cast<int>(m), total);
  std::vector<double> out(total);
  for (std::size_t x = 0; x < total; ++x) {
    for (std::size_t y = 0; y < total; ++y)
      for (std::size_t i = 0; i < m; ++i)
        batch.row(static_cast<int>(i))[y] =
            fam.members[i].at(coords[x][i], coords[y][i]);
    evaluate_batch(F, batch, out);
    std::copy(out.begin(), out.end(), matrix.begin() + x * total);
  }
  return validate_space(std::move(labels), std::move(matrix), kAggregatedTol);
}

FiniteSpace set_aggregate(const AggregatorSpec& F, const SpaceFamily& fam) {
  if (fam.mode != AggMode::Sets)
    throw ContractError("set_aggregate needs a sets-mode family");
  const std::size_t m = fam.members.size();
  if (static_cast<std::size_t>(F.arity) != m)
    throw DimensionError("aggregator arity " + std::to_string(F.arity) +
                         " does not match " + std::to_string(m) + " members");
  const std::size_t n = fam.members.front().size();

  std::vector<double> matrix(n * n);
  SoaBatch batch(static_cast<int>(m), n);
  std::vector<double> out(n);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t i = 0; i < m; ++i)
        batch.row(static_cast<int>(i))[y] = fam.members[i].at(x, y);
    evaluate_batch(F, batch, out);
    std::copy(out.begin(), out.end(), matrix.begin() + x * n);
  }
  return validate_space(fam.members.front().points, std::move(matrix),
                        kAggregatedTol);
}

std::vector<NonNegTuple> image_of_ddelta(const SpaceFamily& fam,
                                         const std::string& x) {
  if (fam.mode != AggMode::Sets)
    throw ContractError("image_of_ddelta needs a sets-mode family");
  const std::size_t xi = fam.members.front().index_of(x);
  const std::size_t n = fam.members.front().size();
  std::vector<NonNegTuple> image;
  for (std::size_t y = 0; y < n; ++y) {
    std::vector<double> row;
    row.reserve(fam.members.size());
    for (const auto& s : fam.members) row.push_back(s.at(xi, y));
    NonNegTuple t(std::move(row));
    if (std::find(image.begin(), image.end(), t) == image.end())
      image.push_back(std::move(t));
  }
  return image;
}

// ---------------------------------------------------------------------------
// Built-ins
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> default_labels(int n) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (i < 11) out.emplace_back(1, static_cast<char>('p' + i));
    else out.push_back("x" + std::to_string(i));
  }
  return out;
}

std::string format_real(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

FiniteSpace discrete_space(int n) { return scaled_discrete_space(n, 1.0); }

FiniteSpace indiscrete_space(int n) {
  if (n < 1) throw DimensionError("a space needs at least one point");
  return validate_space(default_labels(n),
                        std::vector<double>(static_cast<std::size_t>(n) *
                                                static_cast<std::size_t>(n),
                                            0.0));
}

FiniteSpace scaled_discrete_space(int n, double a) {
  if (n < 1) throw DimensionError("a space needs at least one point");
  if (!(a >= 0.0) || !std::isfinite(a))
    throw DomainError("scale must be finite and nonnegative");
  const auto un = static_cast<std::size_t>(n);
  std::vector<double> d(un * un, a);
  for (std::size_t i = 0; i < un; ++i) d[i * un + i] = 0.0;
  return validate_space(default_labels(n), std::move(d));
}

FiniteSpace euclid_points_space(const std::vector<double>& xs) {
  if (xs.empty()) throw DimensionError("a space needs at least one point");
  const std::size_t n = xs.size();
  std::vector<std::string> labels;
  labels.reserve(n);
  for (double x : xs) labels.push_back(format_real(x));
  std::vector<double> d(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[i * n + j] = std::fabs(xs[i] - xs[j]);
  return validate_space(std::move(labels), std::move(d));
}

FiniteSpace oneway_space(int n) {
  if (n < 2) throw DimensionError("oneway needs at least two points");
  const auto un = static_cast<std::size_t>(n);
  std::vector<double> d(un * un, 1.0);
  for (std::size_t i = 0; i < un; ++i) d[i * un + i] = 0.0;
  d[0 * un + 1] = 0.0;  // the designated one-way pair (p, q)
  return validate_space(default_labels(n), std::move(d));
}

FiniteSpace random_valid_space(std::uint64_t seed, int n, bool symmetric,
                               bool separated) {
  if (n < 1) throw DimensionError("random space needs at least one point");
  const auto un = static_cast<std::size_t>(n);
  std::vector<double> d(un * un, 0.0);
  DrawStream s(seed, 0);
  for (std::size_t i = 0; i < un; ++i) {
    for (std::size_t j = symmetric ? i + 1 : 0; j < un; ++j) {
      if (i == j) continue;
      double v = separated ? 0.05 + s.next_unit()
                           : (s.next_unit() < 0.25 ? 0.0 : s.next_unit());
      d[i * un + j] = v;
      if (symmetric) d[j * un + i] = v;
    }
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t k = 0; k < un; ++k)
      for (std::size_t i = 0; i < un; ++i)
        for (std::size_t j = 0; j < un; ++j) {
          const double via = d[i * un + k] + d[k * un + j];
          if (via < d[i * un + j]) {
            d[i * un + j] = via;
            changed = true;
          }
        }
  }
  std::vector<std::string> labels;
  labels.reserve(un);
  for (int i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i));
  return validate_space(std::move(labels), std::move(d));
}

FiniteSpace lu_grid_space(const std::vector<double>& values, int coordinate,
                          int dim, std::size_t cap) {
  if (dim < 1) throw DimensionError("grid dimension must be at least 1");
  if (coordinate < 1 || coordinate > dim)
    throw DimensionError("grid coordinate out of range 1.." +
                         std::to_string(dim));
  if (values.empty()) throw DimensionError("grid needs at least one value");
  for (double v : values)
    if (!(v >= 0.0) || !(v < 1.0))
      throw DomainError("grid values must lie in [0, 1)");

  std::size_t total = 1;
  for (int i = 0; i < dim; ++i) {
    if (total > cap / values.size())
      throw EnumerationError("grid exceeds the cap of " + std::to_string(cap) +
                             " points");
    total *= values.size();
  }

  const auto ud = static_cast<std::size_t>(dim);
  std::vector<std::vector<double>> pts;
  pts.reserve(total);
  std::vector<std::size_t> cur(ud, 0);
  std::vector<std::string> labels;
  labels.reserve(total);
  std::vector<std::string> parts(ud);
  for (std::size_t p = 0; p < total; ++p) {
    std::vector<double> tup(ud);
    for (std::size_t i = 0; i < ud; ++i) {
      tup[i] = values[cur[i]];
      parts[i] = format_real(tup[i]);
    }
    pts.push_back(std::move(tup));
    labels.push_back(dim == 1 ? parts[0] : tuple_label(parts));
    for (std::size_t i = ud; i-- > 0;) {
      if (++cur[i] < values.size()) break;
      cur[i] = 0;
    }
  }

  const std::size_t ci = static_cast<std::size_t>(coordinate) - 1;
  std::vector<double> d(total * total);
  for (std::size_t x = 0; x < total; ++x) {
    for (std::size_t y = 0; y < total; ++y) {
      double off = 0.0;  // max over j != i of the forward excess
      for (std::size_t j = 0; j < ud; ++j) {
        if (j == ci) continue;
        off = std::max(off, std::max(pts[x][j] - pts[y][j], 0.0));
      }
      const double back = std::max(pts[y][ci] - pts[x][ci], 0.0);
      d[x * total + y] = std::min(1.0, std::max(off, back));
    }
  }
  return validate_space(std::move(labels), std::move(d));
}

SpaceFamily two_point_pq_family(const std::vector<double>& a) {
  if (a.empty()) throw DimensionError("a family needs members");
  std::vector<FiniteSpace> members;
  members.reserve(a.size());
  for (double ai : a) members.push_back(scaled_discrete_space(2, ai));
  return make_family(AggMode::Sets, std::move(members));
}

SpaceFamily lu_grid_family(const std::vector<double>& values, int dim,
                           std::size_t cap) {
  std::vector<FiniteSpace> members;
  members.reserve(static_cast<std::size_t>(dim));
  for (int i = 1; i <= dim; ++i)
    members.push_back(lu_grid_space(values, i, dim, cap));
  return make_family(AggMode::Sets, std::move(members));
}

// ---------------------------------------------------------------------------
// Parsing and files
// ---------------------------------------------------------------------------

namespace {

struct SpaceCursor {
  std::string text;               // lowercased, whitespace stripped
  std::vector<std::size_t> offsets;  // position in the original string
  std::size_t pos = 0;

  explicit SpaceCursor(const std::string& original) {
    for (std::size_t i = 0; i < original.size(); ++i) {
      if (std::isspace(static_cast<unsigned char>(original[i]))) continue;
      text += static_cast<char>(
          std::tolower(static_cast<unsigned char>(original[i])));
      offsets.push_back(i);
    }
  }
  bool done() const { return pos >= text.size(); }
  std::size_t original_pos() const {
    return pos < offsets.size() ? offsets[pos] : (offsets.empty() ? 0 : offsets.back() + 1);
  }
};

std::string read_name(SpaceCursor& c) {
  const std::size_t start = c.pos;
  while (!c.done() && (std::isalpha(static_cast<unsigned char>(c.text[c.pos])) ||
                       c.text[c.pos] == '_'))
    ++c.pos;
  return c.text.substr(start, c.pos - start);
}

std::vector<double> read_number_args(SpaceCursor& c) {
  if (c.done() || c.text[c.pos] != '(')
    throw ParseError("expected '('", c.original_pos());
  ++c.pos;
  std::vector<double> args;
  while (true) {
    const std::size_t start = c.pos;
    while (!c.done() && (std::isdigit(static_cast<unsigned char>(c.text[c.pos])) ||
                         c.text[c.pos] == '.' || c.text[c.pos] == '-' ||
                         c.text[c.pos] == '+' || c.text[c.pos] == 'e'))
      ++c.pos;
    if (c.pos == start) throw ParseError("expected a number", c.original_pos());
    const std::string token = c.text.substr(start, c.pos - start);
    std::size_t used = 0;
    double value = 0;
    try {
      value = std::stod(token, &used);
    } catch (const std::exception&) {
      throw ParseError("malformed number '" + token + "'", c.offsets[start]);
    }
    if (used != token.size())
      throw ParseError("malformed number '" + token + "'", c.offsets[start]);
    args.push_back(value);
    if (c.done()) throw ParseError("expected ',' or ')'", c.original_pos());
    if (c.text[c.pos] == ',') {
      ++c.pos;
      continue;
    }
    if (c.text[c.pos] == ')') {
      ++c.pos;
      return args;
    }
    throw ParseError("expected ',' or ')'", c.original_pos());
  }
}

int as_positive_int(double x, const char* what, std::size_t pos) {
  if (x < 1.0 || x != std::floor(x) || x > 1e6)
    throw ParseError(std::string(what) + " must be a positive integer", pos);
  return static_cast<int>(x);
}

}  // namespace

std::vector<FiniteSpace> parse_builtin_spaces(const std::string& text) {
  SpaceCursor c(text);
  if (c.done()) throw ParseError("empty space spec", 0);
  const std::size_t name_pos = c.original_pos();
  const std::string name = read_name(c);
  if (name.empty())
    throw ParseError("expected a space name", c.original_pos());
  const std::size_t args_pos = c.original_pos();
  const std::vector<double> args = read_number_args(c);
  if (!c.done())
    throw ParseError("unexpected trailing text", c.original_pos());

  if (name == "discrete") {
    if (args.size() != 1)
      throw ParseError("discrete takes exactly one argument", args_pos);
    return {discrete_space(as_positive_int(args[0], "point count", args_pos))};
  }
  if (name == "indiscrete") {
    if (args.size() != 1)
      throw ParseError("indiscrete takes exactly one argument", args_pos);
    return {
        indiscrete_space(as_positive_int(args[0], "point count", args_pos))};
  }
  if (name == "scaled_discrete") {
    if (args.size() != 2)
      throw ParseError("scaled_discrete takes (n, a)", args_pos);
    if (!(args[1] >= 0.0))
      throw ParseError("scale must be nonnegative", args_pos);
    return {scaled_discrete_space(
        as_positive_int(args[0], "point count", args_pos), args[1])};
  }
  if (name == "euclid_points") return {euclid_points_space(args)};
  if (name == "oneway") {
    if (args.size() != 1)
      throw ParseError("oneway takes exactly one argument", args_pos);
    return {oneway_space(as_positive_int(args[0], "point count", args_pos))};
  }
  if (name == "two_point_pq") {
    for (double a : args)
      if (!(a >= 0.0))
        throw ParseError("weights must be nonnegative", args_pos);
    return two_point_pq_family(args).members;
  }
  if (name == "lu_grid") {
    if (args.size() < 3)
      throw ParseError("lu_grid takes (i, dim, v1, ...)", args_pos);
    const int i = as_positive_int(args[0], "coordinate", args_pos);
    const int dim = as_positive_int(args[1], "dimension", args_pos);
    return {lu_grid_space(std::vector<double>(args.begin() + 2, args.end()), i,
                          dim)};
  }
  throw ParseError("unknown space '" + name + "'", name_pos);
}

FiniteSpace load_space(const std::string& path, double tol) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(),
                     static_cast<std::size_t>(e.byte));
  }
  try {
    std::vector<std::string> points =
        j.at("points").get<std::vector<std::string>>();
    std::vector<std::vector<double>> matrix =
        j.at("matrix").get<std::vector<std::vector<double>>>();
    return validate_space(std::move(points), matrix, tol);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad space file: ") + e.what(), 0);
  }
}

std::string space_to_json(const FiniteSpace& s) {
  nlohmann::ordered_json j;
  j["points"] = s.points;
  const std::size_t n = s.size();
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < n; ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (std::size_t jx = 0; jx < n; ++jx) row.push_back(s.at(i, jx));
    rows.push_back(std::move(row));
  }
  j["matrix"] = std::move(rows);
  j["axiom_class"] = metric_family_name(s.axiom_class);
  return j.dump(2);
}

}  // namespace metriforge
