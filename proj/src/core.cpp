#include "metriforge/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace metriforge {

// ---------------------------------------------------------------------------
// NonNegTuple
// ---------------------------------------------------------------------------

NonNegTuple::NonNegTuple(std::vector<double> values) : v_(std::move(values)) {
  if (v_.empty()) throw DimensionError("tuple arity must be at least 1");
  for (double x : v_) {
    if (!(x >= 0.0) || !std::isfinite(x)) {  // also rejects NaN and +inf
      throw DomainError("tuple entries must be finite and nonnegative, got " +
                        std::to_string(x));
    }
  }
}

NonNegTuple NonNegTuple::zeros(int arity) {
  if (arity < 1) throw DimensionError("tuple arity must be at least 1");
  return NonNegTuple(std::vector<double>(static_cast<std::size_t>(arity), 0.0));
}

bool NonNegTuple::is_zero() const {
  return std::all_of(v_.begin(), v_.end(), [](double x) { return x == 0.0; });
}

NonNegTuple NonNegTuple::operator+(const NonNegTuple& o) const {
  if (v_.size() != o.v_.size())
    throw DimensionError("tuple arity mismatch in sum");
  std::vector<double> r(v_.size());
  for (std::size_t i = 0; i < v_.size(); ++i) r[i] = v_[i] + o.v_[i];
  return NonNegTuple(std::move(r));
}

bool NonNegTuple::leq(const NonNegTuple& o) const {
  if (v_.size() != o.v_.size())
    throw DimensionError("tuple arity mismatch in comparison");
  for (std::size_t i = 0; i < v_.size(); ++i)
    if (v_[i] > o.v_[i]) return false;
  return true;
}

bool NonNegTuple::lex_less(const NonNegTuple& o) const {
  return std::lexicographical_compare(v_.begin(), v_.end(), o.v_.begin(),
                                      o.v_.end());
}

std::string NonNegTuple::str() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v_.size(); ++i) {
    if (i) os << ", ";
    os << v_[i];
  }
  os << ')';
  return os.str();
}

// ---------------------------------------------------------------------------
// Triangle triplets
// ---------------------------------------------------------------------------

bool is_triangle_triplet(const NonNegTuple& a, const NonNegTuple& b,
                         const NonNegTuple& c) {
  if (a.arity() != b.arity() || a.arity() != c.arity())
    throw DimensionError("triplet arity mismatch");
  for (int i = 0; i < a.arity(); ++i) {
    if (a[i] > b[i] + c[i]) return false;
    if (b[i] > a[i] + c[i]) return false;
    if (c[i] > a[i] + b[i]) return false;
  }
  return true;
}

TriangleTriplet::TriangleTriplet(NonNegTuple a, NonNegTuple b, NonNegTuple c)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {
  if (!is_triangle_triplet(a_, b_, c_))
    throw ContractError("tuples do not form a triangle triplet");
}

// ---------------------------------------------------------------------------
// Random streams
// ---------------------------------------------------------------------------

namespace {

inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return x;
}

}  // namespace

DrawStream::DrawStream(std::uint64_t seed, std::uint64_t draw_index)
    : state_(mix64(seed ^ 0x9e3779b97f4a7c15ULL) ^
             mix64(draw_index + 0x632be59bd9b4e019ULL)) {}

std::uint64_t DrawStream::next_u64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return mix64(state_);
}

double DrawStream::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double DrawStream::next_mixture(double scale) {
  const double selector = next_unit();
  const double value = next_unit();  // consumed on every branch
  if (selector < 0.25) return 0.0;
  if (selector < 0.75) return value * scale;
  // Exponential with mean scale/4 via inversion; value < 1 keeps log finite.
  return -(scale / 4.0) * std::log1p(-value);
}

// ---------------------------------------------------------------------------
// Samplers
// ---------------------------------------------------------------------------

void SamplerConfig::validate() const {
  if (!(scale > 0.0)) throw DomainError("sampler scale must be positive");
  if (budget == 0) throw DomainError("sampler budget must be positive");
  if (grid_levels.empty()) throw DomainError("grid_levels must be nonempty");
  for (double g : grid_levels)
    if (!(g >= 0.0)) throw DomainError("grid_levels must be nonnegative");
}

NonNegTuple sample_mixture_tuple(const SamplerConfig& cfg, int arity,
                                 std::uint64_t draw_index) {
  if (arity < 1) throw DimensionError("arity must be at least 1");
  DrawStream s(cfg.seed, draw_index);
  std::vector<double> v(static_cast<std::size_t>(arity));
  for (auto& x : v) x = s.next_mixture(cfg.scale);
  return NonNegTuple(std::move(v));
}

TriangleTriplet sample_triplet(const SamplerConfig& cfg, int arity,
                               std::uint64_t draw_index) {
  if (arity < 1) throw DimensionError("arity must be at least 1");
  DrawStream s(cfg.seed, draw_index);
  std::vector<double> b(static_cast<std::size_t>(arity));
  std::vector<double> c(static_cast<std::size_t>(arity));
  std::vector<double> a(static_cast<std::size_t>(arity));
  for (auto& x : b) x = s.next_mixture(cfg.scale);
  for (auto& x : c) x = s.next_mixture(cfg.scale);
  for (int i = 0; i < arity; ++i) {
    const double lo = std::fabs(b[i] - c[i]);
    const double hi = b[i] + c[i];
    double x = lo + s.next_unit() * (hi - lo);
    x = std::clamp(x, lo, hi);
    // The interval endpoints are rounded, so the exact floating-point
    // triangle checks can still fail by one ulp; fall back to max(b, c),
    // which always satisfies all three checks exactly.
    if (x > b[i] + c[i] || b[i] > x + c[i] || c[i] > x + b[i])
      x = std::max(b[i], c[i]);
    a[i] = x;
  }
  return TriangleTriplet(NonNegTuple(std::move(a)), NonNegTuple(std::move(b)),
                         NonNegTuple(std::move(c)));
}

DominatedTriple sample_dominated(const SamplerConfig& cfg, int arity,
                                 std::uint64_t draw_index) {
  if (arity < 1) throw DimensionError("arity must be at least 1");
  DrawStream s(cfg.seed, draw_index);
  std::vector<double> b(static_cast<std::size_t>(arity));
  std::vector<double> c(static_cast<std::size_t>(arity));
  std::vector<double> a(static_cast<std::size_t>(arity));
  for (auto& x : b) x = s.next_mixture(cfg.scale);
  for (auto& x : c) x = s.next_mixture(cfg.scale);
  for (int i = 0; i < arity; ++i) {
    const double hi = b[i] + c[i];
    a[i] = std::min(s.next_unit() * hi, hi);
  }
  return DominatedTriple{NonNegTuple(std::move(a)), NonNegTuple(std::move(b)),
                         NonNegTuple(std::move(c))};
}

std::vector<NonNegTuple> corner_stream(const SamplerConfig& cfg, int arity,
                                       std::size_t cap) {
  if (arity < 1) throw DimensionError("arity must be at least 1");
  cfg.validate();
  const std::size_t g = cfg.grid_levels.size();
  std::size_t total = 1;
  for (int i = 0; i < arity; ++i) {
    if (total > cap / g) {
      throw EnumerationError("corner grid of size " + std::to_string(g) + "^" +
                             std::to_string(arity) + " exceeds cap " +
                             std::to_string(cap));
    }
    total *= g;
  }
  std::vector<NonNegTuple> out;
  out.reserve(total);
  std::vector<std::size_t> idx(static_cast<std::size_t>(arity), 0);
  for (std::size_t n = 0; n < total; ++n) {
    std::vector<double> v(static_cast<std::size_t>(arity));
    for (int i = 0; i < arity; ++i) v[static_cast<std::size_t>(i)] = cfg.grid_levels[idx[static_cast<std::size_t>(i)]];
    out.emplace_back(std::move(v));
    // lexicographic increment, last coordinate fastest
    for (int i = arity - 1; i >= 0; --i) {
      auto& d = idx[static_cast<std::size_t>(i)];
      if (++d < g) break;
      d = 0;
    }
  }
  return out;
}

std::string verdict_status_name(VerdictStatus s) {
  return s == VerdictStatus::Falsified ? "Falsified" : "ConsistentAfterBudget";
}

std::string metric_family_name(MetricFamily f) {
  switch (f) {
    case MetricFamily::QuasiPseudometric: return "QuasiPseudometric";
    case MetricFamily::QuasiMetric: return "QuasiMetric";
    case MetricFamily::Pseudometric: return "Pseudometric";
    case MetricFamily::Metric: return "Metric";
  }
  return "?";
}

std::string agg_mode_name(AggMode m) {
  return m == AggMode::Products ? "products" : "sets";
}

}  // namespace metriforge
