#include "metriforge/probe.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <utility>

#include <json.hpp>

namespace metriforge {

std::string seq_kind_name(SeqKind k) {
  switch (k) {
    case SeqKind::Euclid: return "Euclid";
    case SeqKind::Lower: return "Lower";
    case SeqKind::Upper: return "Upper";
  }
  throw DomainError("unreachable sequence kind");
}

double SequenceSpace::distance(double x, double y) const {
  switch (kind) {
    case SeqKind::Euclid: return std::abs(x - y);
    case SeqKind::Lower: return std::max(x - y, 0.0);
    case SeqKind::Upper: return std::max(y - x, 0.0);
  }
  throw DomainError("unreachable sequence kind");
}

SequenceSpace make_null_space(SeqKind kind, std::size_t K) {
  if (K < 10) throw DimensionError("a null space needs depth at least 10");
  return SequenceSpace{kind, K};
}

ProbeSequence null_probe_sequence(std::size_t K) {
  ProbeSequence s;
  s.name = "1/k";
  s.pts.resize(K);
  for (std::size_t k = 0; k < K; ++k)
    s.pts[k] = 1.0 / static_cast<double>(k + 1);
  s.limit = 0.0;
  return s;
}

ProbeSequence constant_probe_sequence(std::size_t K, double at) {
  return ProbeSequence{"constant", std::vector<double>(K, at), at};
}

std::string probe_mode_name(ProbeMode m) {
  switch (m) {
    case ProbeMode::ProductTopology: return "ProductTopology";
    case ProbeMode::SupTopology: return "SupTopology";
    case ProbeMode::Aggregated: return "Aggregated";
  }
  throw DomainError("unreachable probe mode");
}

ConvergenceVerdict converges(const std::vector<SequenceSpace>& members,
                             const AggregatorSpec* F, const ProbeSequence& seq,
                             ProbeMode mode, const TailProtocol& proto) {
  if (members.empty())
    throw DimensionError("convergence needs at least one member");
  const std::size_t n = seq.pts.size();
  if (n < 100) throw DimensionError("a probe sequence needs at least 100 terms");
  if (mode == ProbeMode::Aggregated) {
    if (!F) throw ContractError("aggregated mode needs an aggregation function");
    if (static_cast<std::size_t>(F->arity) != members.size())
      throw DimensionError("aggregator arity " + std::to_string(F->arity) +
                           " does not match " +
                           std::to_string(members.size()) + " members");
  }
  if (mode == ProbeMode::SupTopology)
    for (const auto& m : members)
      if (m.K != members.front().K)
        throw ContractError("the supremum mode needs one shared carrier");

  const std::size_t tail =
      std::max<std::size_t>(1, static_cast<std::size_t>(
                                   proto.tail_fraction * static_cast<double>(n)));
  std::vector<double> buf(members.size());
  for (std::size_t k = n - tail; k < n; ++k) {
    for (std::size_t i = 0; i < members.size(); ++i)
      buf[i] = members[i].distance(seq.limit, seq.pts[k]);
    const double v = mode == ProbeMode::Aggregated
                         ? evaluate(*F, buf)
                         : *std::max_element(buf.begin(), buf.end());
    if (!(v < proto.tau))
      return ConvergenceVerdict{mode, false, {{proto.tau, k}}};
  }
  return ConvergenceVerdict{mode, true, std::nullopt};
}

StrongnessProbe strongness_probe(const AggregatorSpec& F, std::size_t K,
                                 const TailProtocol& proto) {
  const NonNegTuple zero(std::vector<double>(F.arity, 0.0));
  if (evaluate(F, zero) > Tolerances{}.zero)
    throw ContractError(
        "the strongness probe needs a vanishing aggregation function");

  const std::vector<SequenceSpace> members(
      static_cast<std::size_t>(F.arity), make_null_space(SeqKind::Euclid, K));
  const ProbeSequence seq = null_probe_sequence(K);

  StrongnessProbe out;
  out.product = converges(members, nullptr, seq, ProbeMode::ProductTopology,
                          proto);
  out.aggregated = converges(members, &F, seq, ProbeMode::Aggregated, proto);

  const std::size_t tail =
      std::max<std::size_t>(1, static_cast<std::size_t>(
                                   proto.tail_fraction *
                                   static_cast<double>(seq.pts.size())));
  out.verdict.samples_used = 2 * tail;
  out.verdict.seed = 0;
  if (out.product.converges == out.aggregated.converges) {
    out.verdict.status = VerdictStatus::ConsistentAfterBudget;
    return out;
  }

  const auto& failing =
      out.product.converges ? out.aggregated : out.product;
  const std::size_t idx = failing.epsilon_witness->second;
  std::vector<double> tup(members.size());
  for (std::size_t i = 0; i < members.size(); ++i)
    tup[i] = members[i].distance(seq.limit, seq.pts[idx]);

  out.verdict.status = VerdictStatus::Falsified;
  Witness w;
  w.tuples = {NonNegTuple(std::move(tup))};
  w.delta = proto.tau;
  w.origin = "sequence";
  w.draw_index = idx;
  out.verdict.witness = std::move(w);
  return out;
}

// ---------------------------------------------------------------------------
// Structured images
// ---------------------------------------------------------------------------

int StructuredImage::arity() const {
  std::optional<int> n;
  const auto take = [&n](int m) {
    if (n && *n != m)
      throw DimensionError("image tuples disagree on arity");
    n = m;
  };
  for (const auto& t : isolated) take(t.arity());
  for (const auto& r : rays) {
    take(r.base.arity());
    take(r.direction.arity());
  }
  if (!n) throw DimensionError("the image needs at least one tuple");
  return *n;
}

std::vector<NonNegTuple> image_samples(const StructuredImage& img) {
  const int n = img.arity();
  std::vector<NonNegTuple> out = img.isolated;
  std::vector<double> coords(static_cast<std::size_t>(n));
  for (const auto& r : img.rays)
    for (int j = 0; j <= kRayLevels; ++j) {
      const double t = std::ldexp(1.0, -j);
      for (int i = 0; i < n; ++i)
        coords[static_cast<std::size_t>(i)] = r.base[i] + t * r.direction[i];
      out.emplace_back(coords);
    }
  return out;
}

StructuredImage load_image(const std::string& path) {
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
    StructuredImage img;
    if (j.contains("isolated"))
      for (const auto& row : j.at("isolated"))
        img.isolated.emplace_back(row.get<std::vector<double>>());
    std::optional<int> arity;
    if (j.contains("arity")) arity = j.at("arity").get<int>();
    if (!arity && !img.isolated.empty()) arity = img.isolated.front().arity();
    if (j.contains("rays"))
      for (const auto& r : j.at("rays")) {
        if (r.contains("curve")) {
          const std::string name = r.at("curve").get<std::string>();
          if (name != "diag")
            throw ParseError("unknown curve '" + name + "'", 0);
          if (!arity)
            throw ParseError("curve 'diag' needs an explicit arity", 0);
          const std::size_t un = static_cast<std::size_t>(*arity);
          img.rays.push_back(Ray{NonNegTuple(std::vector<double>(un, 0.0)),
                                 NonNegTuple(std::vector<double>(un, 1.0)),
                                 "diag"});
        } else {
          Ray ray{NonNegTuple(r.at("base").get<std::vector<double>>()),
                  NonNegTuple(r.at("direction").get<std::vector<double>>()),
                  r.contains("name") ? r.at("name").get<std::string>() : ""};
          if (!arity) arity = ray.base.arity();
          img.rays.push_back(std::move(ray));
        }
      }
    img.arity();  // validates shape and nonemptiness
    return img;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad image file: ") + e.what(), 0);
  }
}

std::vector<double> usc_radius_grid() {
  std::vector<double> g;
  for (int j = 0; j <= 20; ++j) g.push_back(std::ldexp(1.0, -j));
  return g;
}

std::vector<double> usc_delta_grid() {
  std::vector<double> g;
  for (int j = 0; j <= 30; ++j) g.push_back(std::ldexp(1.0, -j));
  return g;
}

namespace {

void check_grid(const std::vector<double>& g, const std::string& what) {
  if (g.empty()) throw ContractError(what + " grid must not be empty");
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(g[i] > 0.0))
      throw ContractError(what + " grid must be strictly positive");
    if (i && !(g[i] < g[i - 1]))
      throw ContractError(what + " grid must be strictly descending");
  }
}

}  // namespace

Verdict check_usc_at_zero(const AggregatorSpec& F, const StructuredImage& img,
                          const std::vector<double>& radius_grid,
                          const std::vector<double>& delta_grid) {
  check_grid(radius_grid, "radius");
  check_grid(delta_grid, "delta");
  const std::vector<NonNegTuple> samples = image_samples(img);
  const int n = img.arity();

  std::vector<double> vals;
  vals.reserve(samples.size());
  for (const auto& a : samples) vals.push_back(evaluate(F, a));

  std::vector<std::size_t> zero_set;
  for (std::size_t s = 0; s < samples.size(); ++s)
    if (vals[s] == 0.0) zero_set.push_back(s);

  const auto inside = [&](const NonNegTuple& a, double r) {
    for (std::size_t zi : zero_set) {
      const NonNegTuple& z = samples[zi];
      bool in = true;
      for (int i = 0; i < n && in; ++i)
        in = a[i] >= std::max(0.0, z[i] - r) && a[i] < z[i] + r;
      if (in) return true;
    }
    return false;
  };

  Verdict v;
  v.samples_used = samples.size();
  for (double r : radius_grid) {
    bool every_delta_escapes = true;
    double esc_delta = 0.0;
    std::size_t esc_sample = 0;
    for (double delta : delta_grid) {
      bool found = false;
      for (std::size_t s = 0; s < samples.size() && !found; ++s)
        if (vals[s] < delta && !inside(samples[s], r)) {
          found = true;
          esc_delta = delta;
          esc_sample = s;
        }
      if (!found) {
        every_delta_escapes = false;
        break;
      }
    }
    if (every_delta_escapes) {
      v.status = VerdictStatus::Falsified;
      Witness w;
      w.tuples = {samples[esc_sample]};
      w.delta = esc_delta;
      w.radius = r;
      w.origin = "image";
      v.witness = std::move(w);
      return v;
    }
  }
  v.status = VerdictStatus::ConsistentAfterBudget;
  return v;
}

Verdict check_restricted_continuity_at_zero(const AggregatorSpec& F,
                                            const StructuredImage& img,
                                            const std::vector<double>& delta_grid,
                                            const Tolerances& tol) {
  check_grid(delta_grid, "delta");
  const std::vector<NonNegTuple> samples = image_samples(img);
  const int n = img.arity();

  bool zero_realized = false;
  for (const auto& a : samples) {
    bool all_zero = true;
    for (int i = 0; i < n && all_zero; ++i) all_zero = a[i] == 0.0;
    if (all_zero) zero_realized = true;
  }
  if (!zero_realized)
    throw ContractError("the image must realize the zero tuple");

  std::vector<double> vals;
  vals.reserve(samples.size());
  for (const auto& a : samples) vals.push_back(evaluate(F, a));

  const auto in_box = [&](const NonNegTuple& a, double delta) {
    for (int i = 0; i < n; ++i)
      if (!(a[i] < delta)) return false;
    return true;
  };

  Verdict v;
  v.samples_used = samples.size();
  double bad_delta = 0.0;
  std::size_t bad_sample = 0;
  for (double delta : delta_grid) {
    bool found = false;
    for (std::size_t s = 0; s < samples.size() && !found; ++s)
      if (in_box(samples[s], delta) && vals[s] > tol.cont) {
        found = true;
        bad_delta = delta;
        bad_sample = s;
      }
    // boxes nest, so one clean level settles every smaller one
    if (!found) {
      v.status = VerdictStatus::ConsistentAfterBudget;
      return v;
    }
  }
  v.status = VerdictStatus::Falsified;
  Witness w;
  w.tuples = {samples[bad_sample]};
  w.delta = bad_delta;
  w.origin = "image";
  v.witness = std::move(w);
  return v;
}

// ---------------------------------------------------------------------------
// Scenarios
// ---------------------------------------------------------------------------

std::vector<std::string> probe_scenario_names() {
  return {"null-seq", "usc-projection", "restricted-axis", "restricted-diag"};
}

namespace {

StructuredImage axis_image(int arity) {
  std::vector<double> zero(static_cast<std::size_t>(arity), 0.0);
  std::vector<double> dir(static_cast<std::size_t>(arity), 0.0);
  dir[0] = 1.0;
  StructuredImage img;
  img.isolated = {NonNegTuple(zero)};
  img.rays = {Ray{NonNegTuple(zero), NonNegTuple(dir), "axis"}};
  return img;
}

StructuredImage diag_image(int arity) {
  std::vector<double> zero(static_cast<std::size_t>(arity), 0.0);
  std::vector<double> ones(static_cast<std::size_t>(arity), 1.0);
  StructuredImage img;
  img.isolated = {NonNegTuple(zero)};
  img.rays = {Ray{NonNegTuple(zero), NonNegTuple(ones), "diag"}};
  return img;
}

StructuredImage projection_image() {
  StructuredImage img;
  img.isolated = {NonNegTuple({0.0, 0.0})};
  img.rays = {Ray{NonNegTuple({1.0, 0.0}), NonNegTuple({0.0, 1.0}),
                  "vertical"}};
  return img;
}

}  // namespace

ProbeReport run_probe_scenario(const AggregatorSpec& F,
                               const std::string& scenario, std::size_t K) {
  ProbeReport rep;
  rep.scenario = scenario;
  if (scenario == "null-seq") {
    StrongnessProbe p = strongness_probe(F, K);
    rep.verdict = std::move(p.verdict);
    rep.convergences = {p.product, p.aggregated};
    rep.description = "product vs aggregated convergence of 1/k on " +
                      std::to_string(F.arity) +
                      " Euclidean null spaces, depth " + std::to_string(K);
    return rep;
  }
  if (scenario == "usc-projection") {
    rep.verdict = check_usc_at_zero(F, projection_image());
    rep.description =
        "upper semicontinuity at 0 on {(0,0)} plus the ray t -> (1, t)";
    return rep;
  }
  if (scenario == "restricted-axis") {
    rep.verdict = check_restricted_continuity_at_zero(F, axis_image(F.arity));
    rep.description =
        "continuity at 0 restricted to the first axis of the image";
    return rep;
  }
  if (scenario == "restricted-diag") {
    rep.verdict = check_restricted_continuity_at_zero(F, diag_image(F.arity));
    rep.description =
        "continuity at 0 restricted to the diagonal of the image";
    return rep;
  }
  std::string known;
  for (const auto& s : probe_scenario_names())
    known += (known.empty() ? "" : ", ") + s;
  throw DomainError("unknown probe scenario '" + scenario + "'; known: " +
                    known);
}

}  // namespace metriforge
