#include "metriforge/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <thread>

namespace metriforge {

std::string property_kind_name(PropertyKind k) {
  switch (k) {
    case PropertyKind::VanishesAtZero: return "VanishesAtZero";
    case PropertyKind::ZeroPreimageTrivial: return "ZeroPreimageTrivial";
    case PropertyKind::Monotone: return "Monotone";
    case PropertyKind::Subadditive: return "Subadditive";
    case PropertyKind::TripletPreserving: return "TripletPreserving";
    case PropertyKind::AsymmetricTriplet: return "AsymmetricTriplet";
    case PropertyKind::ContinuousAtZero: return "ContinuousAtZero";
  }
  return "?";
}

namespace {

double max_entry(const NonNegTuple& a) {
  double m = 0.0;
  for (int i = 0; i < a.arity(); ++i) m = std::max(m, a[i]);
  return m;
}

NonNegTuple replace_entry(const NonNegTuple& t, int i, double v) {
  std::vector<double> vals(t.values().begin(), t.values().end());
  vals[static_cast<std::size_t>(i)] = v;
  return NonNegTuple(std::move(vals));
}

// Corner grid when it fits under the cap, empty otherwise (checkers skip the
// deterministic pass rather than truncate it).
std::vector<NonNegTuple> corner_grid_or_empty(const CheckConfig& cfg,
                                              int arity) {
  const std::size_t g = cfg.sampler.grid_levels.size();
  std::size_t total = 1;
  for (int i = 0; i < arity; ++i) {
    if (total > cfg.corner_cap / g) return {};
    total *= g;
  }
  return corner_stream(cfg.sampler, arity, cfg.corner_cap);
}

std::vector<double> grid_values(const AggregatorSpec& f,
                                const std::vector<NonNegTuple>& grid) {
  SoaBatch batch(f.arity, grid.size());
  for (std::size_t s = 0; s < grid.size(); ++s)
    batch.set_column(s, grid[s].values());
  std::vector<double> out(grid.size());
  evaluate_batch(f, batch, out);
  return out;
}

// ---------------------------------------------------------------------------
// Deterministic parallel scan over draw indices
// ---------------------------------------------------------------------------

constexpr std::size_t kBlock = 1024;

struct Hit {
  std::uint64_t index;
  Witness witness;
};

// block(start, count) -> earliest hit in [start, start+count).
using BlockFn =
    std::function<std::optional<Hit>(std::uint64_t, std::size_t)>;

// Scans [0, total) in consecutive blocks; with workers > 1, each round hands
// `workers` consecutive blocks to independent threads and keeps the earliest
// hit.  Per-draw streams make results independent of the worker count.
std::optional<Hit> first_hit(std::uint64_t total, int workers,
                             const std::function<BlockFn()>& make_block_fn) {
  if (total == 0) return std::nullopt;
  const std::uint64_t blocks = (total + kBlock - 1) / kBlock;
  if (workers <= 1) {
    BlockFn fn = make_block_fn();
    for (std::uint64_t b = 0; b < blocks; ++b) {
      const std::uint64_t start = b * kBlock;
      const std::size_t count =
          static_cast<std::size_t>(std::min<std::uint64_t>(kBlock, total - start));
      if (auto hit = fn(start, count)) return hit;
    }
    return std::nullopt;
  }

  const std::size_t w = static_cast<std::size_t>(workers);
  std::vector<BlockFn> fns;
  fns.reserve(w);
  for (std::size_t i = 0; i < w; ++i) fns.push_back(make_block_fn());
  for (std::uint64_t round = 0; round * w < blocks; ++round) {
    std::vector<std::optional<Hit>> results(w);
    std::vector<std::thread> threads;
    const std::uint64_t base = round * w;
    for (std::size_t i = 0; i < w && base + i < blocks; ++i) {
      const std::uint64_t start = (base + i) * kBlock;
      const std::size_t count =
          static_cast<std::size_t>(std::min<std::uint64_t>(kBlock, total - start));
      threads.emplace_back(
          [&results, &fns, i, start, count] { results[i] = fns[i](start, count); });
    }
    for (auto& t : threads) t.join();
    for (const auto& r : results)
      if (r) return r;  // blocks are consecutive, first slot wins
  }
  return std::nullopt;
}

Verdict consistent_verdict(std::uint64_t samples, std::uint64_t seed) {
  return Verdict{VerdictStatus::ConsistentAfterBudget, std::nullopt, samples,
                 seed};
}

Verdict falsified_verdict(Witness w, std::uint64_t samples,
                          std::uint64_t seed) {
  return Verdict{VerdictStatus::Falsified, std::move(w), samples, seed};
}

Witness corner_witness(std::vector<NonNegTuple> tuples) {
  return Witness{std::move(tuples), std::nullopt, std::nullopt, "corner-grid",
                 0};
}

Witness sample_witness(std::vector<NonNegTuple> tuples, std::uint64_t index) {
  return Witness{std::move(tuples), std::nullopt, std::nullopt, "sample",
                 index};
}

}  // namespace

// ---------------------------------------------------------------------------
// Checkers
// ---------------------------------------------------------------------------

Verdict check_vanishes_at_zero(const AggregatorSpec& f,
                               const CheckConfig& cfg) {
  const NonNegTuple zero = NonNegTuple::zeros(f.arity);
  if (evaluate(f, zero) > cfg.tol.zero)
    return falsified_verdict(corner_witness({zero}), 1, cfg.sampler.seed);
  return consistent_verdict(1, cfg.sampler.seed);
}

Verdict check_zero_preimage(const AggregatorSpec& f, const CheckConfig& cfg) {
  const Verdict vanish = check_vanishes_at_zero(f, cfg);
  if (vanish.falsified()) return vanish;

  const auto grid = corner_grid_or_empty(cfg, f.arity);
  if (!grid.empty()) {
    const auto values = grid_values(f, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (max_entry(grid[i]) > cfg.tol.zero && values[i] <= cfg.tol.zero)
        return falsified_verdict(corner_witness({grid[i]}), 0,
                                 cfg.sampler.seed);
    }
  }

  const auto make_fn = [&]() -> BlockFn {
    auto batch = std::make_shared<SoaBatch>(f.arity, kBlock);
    auto out = std::make_shared<std::vector<double>>(kBlock);
    return [&f, &cfg, batch, out](std::uint64_t start,
                                  std::size_t count) -> std::optional<Hit> {
      std::vector<NonNegTuple> drawn;
      drawn.reserve(count);
      for (std::size_t s = 0; s < count; ++s) {
        drawn.push_back(sample_mixture_tuple(cfg.sampler, f.arity, start + s));
        batch->set_column(s, drawn.back().values());
      }
      evaluate_batch(f, *batch, *out);  // full block; tail ignored below
      for (std::size_t s = 0; s < count; ++s) {
        if (max_entry(drawn[s]) > cfg.tol.zero && (*out)[s] <= cfg.tol.zero)
          return Hit{start + s, sample_witness({drawn[s]}, start + s)};
      }
      return std::nullopt;
    };
  };
  if (auto hit = first_hit(cfg.sampler.budget, cfg.workers, make_fn))
    return falsified_verdict(hit->witness, hit->index + 1, cfg.sampler.seed);
  return consistent_verdict(cfg.sampler.budget, cfg.sampler.seed);
}

Verdict check_monotone(const AggregatorSpec& f, const CheckConfig& cfg) {
  const auto grid = corner_grid_or_empty(cfg, f.arity);
  if (!grid.empty() && grid.size() * grid.size() <= cfg.corner_pair_cap) {
    const auto values = grid_values(f, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      for (std::size_t j = 0; j < grid.size(); ++j) {
        if (grid[i].leq(grid[j]) && values[i] > values[j] + cfg.tol.cmp)
          return falsified_verdict(corner_witness({grid[i], grid[j]}), 0,
                                   cfg.sampler.seed);
      }
    }
  }

  const auto make_fn = [&]() -> BlockFn {
    auto ba = std::make_shared<SoaBatch>(f.arity, kBlock);
    auto bb = std::make_shared<SoaBatch>(f.arity, kBlock);
    auto fa = std::make_shared<std::vector<double>>(kBlock);
    auto fb = std::make_shared<std::vector<double>>(kBlock);
    return [&f, &cfg, ba, bb, fa, fb](std::uint64_t start,
                                      std::size_t count) -> std::optional<Hit> {
      const int n = f.arity;
      for (std::size_t s = 0; s < count; ++s) {
        DrawStream stream(cfg.sampler.seed, start + s);
        for (int i = 0; i < n; ++i) {
          const double a = stream.next_mixture(cfg.sampler.scale);
          ba->row(i)[s] = a;
        }
        for (int i = 0; i < n; ++i) {
          const double e = stream.next_mixture(cfg.sampler.scale);
          bb->row(i)[s] = ba->row(i)[s] + e;
        }
      }
      evaluate_batch(f, *ba, *fa);
      evaluate_batch(f, *bb, *fb);
      for (std::size_t s = 0; s < count; ++s) {
        if ((*fa)[s] > (*fb)[s] + cfg.tol.cmp) {
          std::vector<double> va(static_cast<std::size_t>(n));
          std::vector<double> vb(static_cast<std::size_t>(n));
          ba->get_column(s, va);
          bb->get_column(s, vb);
          return Hit{start + s,
                     sample_witness({NonNegTuple(va), NonNegTuple(vb)},
                                    start + s)};
        }
      }
      return std::nullopt;
    };
  };
  if (auto hit = first_hit(cfg.sampler.budget, cfg.workers, make_fn))
    return falsified_verdict(hit->witness, hit->index + 1, cfg.sampler.seed);
  return consistent_verdict(cfg.sampler.budget, cfg.sampler.seed);
}

Verdict check_subadditive(const AggregatorSpec& f, const CheckConfig& cfg) {
  const auto grid = corner_grid_or_empty(cfg, f.arity);
  if (!grid.empty() && grid.size() * grid.size() <= cfg.corner_pair_cap) {
    const auto values = grid_values(f, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      for (std::size_t j = 0; j < grid.size(); ++j) {
        const double sum = evaluate(f, grid[i] + grid[j]);
        if (sum > values[i] + values[j] + cfg.tol.cmp)
          return falsified_verdict(corner_witness({grid[i], grid[j]}), 0,
                                   cfg.sampler.seed);
      }
    }
  }

  const auto make_fn = [&]() -> BlockFn {
    auto ba = std::make_shared<SoaBatch>(f.arity, kBlock);
    auto bb = std::make_shared<SoaBatch>(f.arity, kBlock);
    auto bs = std::make_shared<SoaBatch>(f.arity, kBlock);
    auto fa = std::make_shared<std::vector<double>>(kBlock);
    auto fb = std::make_shared<std::vector<double>>(kBlock);
    auto fs = std::make_shared<std::vector<double>>(kBlock);
    return [&f, &cfg, ba, bb, bs, fa, fb,
            fs](std::uint64_t start, std::size_t count) -> std::optional<Hit> {
      const int n = f.arity;
      for (std::size_t s = 0; s < count; ++s) {
        DrawStream stream(cfg.sampler.seed, start + s);
        for (int i = 0; i < n; ++i)
          ba->row(i)[s] = stream.next_mixture(cfg.sampler.scale);
        for (int i = 0; i < n; ++i) {
          bb->row(i)[s] = stream.next_mixture(cfg.sampler.scale);
          bs->row(i)[s] = ba->row(i)[s] + bb->row(i)[s];
        }
      }
      evaluate_batch(f, *ba, *fa);
      evaluate_batch(f, *bb, *fb);
      evaluate_batch(f, *bs, *fs);
      for (std::size_t s = 0; s < count; ++s) {
        if ((*fs)[s] > (*fa)[s] + (*fb)[s] + cfg.tol.cmp) {
          std::vector<double> va(static_cast<std::size_t>(n));
          std::vector<double> vb(static_cast<std::size_t>(n));
          ba->get_column(s, va);
          bb->get_column(s, vb);
          return Hit{start + s,
                     sample_witness({NonNegTuple(va), NonNegTuple(vb)},
                                    start + s)};
        }
      }
      return std::nullopt;
    };
  };
  if (auto hit = first_hit(cfg.sampler.budget, cfg.workers, make_fn))
    return falsified_verdict(hit->witness, hit->index + 1, cfg.sampler.seed);
  return consistent_verdict(cfg.sampler.budget, cfg.sampler.seed);
}

namespace {

// max violation of the three scalar triangle-triplet inequalities
double triplet_violation(double fa, double fb, double fc) {
  return std::max({fa - (fb + fc), fb - (fa + fc), fc - (fa + fb)});
}

}  // namespace

Verdict check_triplet_preservation(const AggregatorSpec& f,
                                   const CheckConfig& cfg) {
  const auto grid = corner_grid_or_empty(cfg, f.arity);
  if (!grid.empty() &&
      grid.size() * grid.size() <= cfg.corner_pair_cap / grid.size()) {
    const auto values = grid_values(f, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
      for (std::size_t j = 0; j < grid.size(); ++j)
        for (std::size_t k = 0; k < grid.size(); ++k) {
          if (!is_triangle_triplet(grid[i], grid[j], grid[k])) continue;
          if (triplet_violation(values[i], values[j], values[k]) > cfg.tol.cmp)
            return falsified_verdict(
                corner_witness({grid[i], grid[j], grid[k]}), 0,
                cfg.sampler.seed);
        }
  }

  const auto make_fn = [&]() -> BlockFn {
    auto ba = std::make_shared<SoaBatch>(f.arity, kBlock);
    auto bb = std::make_shared<SoaBatch>(f.arity, kBlock);
    auto bc = std::make_shared<SoaBatch>(f.arity, kBlock);
    auto fa = std::make_shared<std::vector<double>>(kBlock);
    auto fb = std::make_shared<std::vector<double>>(kBlock);
    auto fc = std::make_shared<std::vector<double>>(kBlock);
    return [&f, &cfg, ba, bb, bc, fa, fb,
            fc](std::uint64_t start, std::size_t count) -> std::optional<Hit> {
      for (std::size_t s = 0; s < count; ++s) {
        const TriangleTriplet t =
            sample_triplet(cfg.sampler, f.arity, start + s);
        ba->set_column(s, t.a().values());
        bb->set_column(s, t.b().values());
        bc->set_column(s, t.c().values());
      }
      evaluate_batch(f, *ba, *fa);
      evaluate_batch(f, *bb, *fb);
      evaluate_batch(f, *bc, *fc);
      for (std::size_t s = 0; s < count; ++s) {
        if (triplet_violation((*fa)[s], (*fb)[s], (*fc)[s]) > cfg.tol.cmp) {
          const int n = f.arity;
          std::vector<double> va(static_cast<std::size_t>(n)),
              vb(static_cast<std::size_t>(n)), vc(static_cast<std::size_t>(n));
          ba->get_column(s, va);
          bb->get_column(s, vb);
          bc->get_column(s, vc);
          return Hit{start + s,
                     sample_witness({NonNegTuple(va), NonNegTuple(vb),
                                     NonNegTuple(vc)},
                                    start + s)};
        }
      }
      return std::nullopt;
    };
  };
  if (auto hit = first_hit(cfg.sampler.budget, cfg.workers, make_fn))
    return falsified_verdict(hit->witness, hit->index + 1, cfg.sampler.seed);
  return consistent_verdict(cfg.sampler.budget, cfg.sampler.seed);
}

Verdict check_asymmetric_triplet(const AggregatorSpec& f,
                                 const CheckConfig& cfg) {
  const auto grid = corner_grid_or_empty(cfg, f.arity);
  if (!grid.empty() &&
      grid.size() * grid.size() <= cfg.corner_pair_cap / grid.size()) {
    const auto values = grid_values(f, grid);
    const auto dominated = [](const NonNegTuple& a, const NonNegTuple& b,
                              const NonNegTuple& c) {
      for (int i = 0; i < a.arity(); ++i)
        if (a[i] > b[i] + c[i]) return false;
      return true;
    };
    for (std::size_t i = 0; i < grid.size(); ++i)
      for (std::size_t j = 0; j < grid.size(); ++j)
        for (std::size_t k = 0; k < grid.size(); ++k) {
          if (!dominated(grid[i], grid[j], grid[k])) continue;
          if (values[i] > values[j] + values[k] + cfg.tol.cmp)
            return falsified_verdict(
                corner_witness({grid[i], grid[j], grid[k]}), 0,
                cfg.sampler.seed);
        }
  }

  const auto make_fn = [&]() -> BlockFn {
    auto ba = std::make_shared<SoaBatch>(f.arity, kBlock);
    auto bb = std::make_shared<SoaBatch>(f.arity, kBlock);
    auto bc = std::make_shared<SoaBatch>(f.arity, kBlock);
    auto fa = std::make_shared<std::vector<double>>(kBlock);
    auto fb = std::make_shared<std::vector<double>>(kBlock);
    auto fc = std::make_shared<std::vector<double>>(kBlock);
    return [&f, &cfg, ba, bb, bc, fa, fb,
            fc](std::uint64_t start, std::size_t count) -> std::optional<Hit> {
      for (std::size_t s = 0; s < count; ++s) {
        const DominatedTriple t =
            sample_dominated(cfg.sampler, f.arity, start + s);
        ba->set_column(s, t.a.values());
        bb->set_column(s, t.b.values());
        bc->set_column(s, t.c.values());
      }
      evaluate_batch(f, *ba, *fa);
      evaluate_batch(f, *bb, *fb);
      evaluate_batch(f, *bc, *fc);
      for (std::size_t s = 0; s < count; ++s) {
        if ((*fa)[s] > (*fb)[s] + (*fc)[s] + cfg.tol.cmp) {
          const int n = f.arity;
          std::vector<double> va(static_cast<std::size_t>(n)),
              vb(static_cast<std::size_t>(n)), vc(static_cast<std::size_t>(n));
          ba->get_column(s, va);
          bb->get_column(s, vb);
          bc->get_column(s, vc);
          return Hit{start + s,
                     sample_witness({NonNegTuple(va), NonNegTuple(vb),
                                     NonNegTuple(vc)},
                                    start + s)};
        }
      }
      return std::nullopt;
    };
  };
  if (auto hit = first_hit(cfg.sampler.budget, cfg.workers, make_fn))
    return falsified_verdict(hit->witness, hit->index + 1, cfg.sampler.seed);
  return consistent_verdict(cfg.sampler.budget, cfg.sampler.seed);
}

Verdict check_continuity_at_zero(const AggregatorSpec& f,
                                 const CheckConfig& cfg) {
  const int levels = cfg.cont_levels + 1;  // j = 0..cont_levels
  const std::uint64_t budget = cfg.sampler.budget;
  const std::uint64_t base_per_level = budget / static_cast<std::uint64_t>(levels);
  const std::uint64_t remainder = budget % static_cast<std::uint64_t>(levels);
  const auto grid = corner_grid_or_empty(cfg, f.arity);

  std::uint64_t used = 0;
  std::optional<Witness> final_exceed;
  double final_max = 0.0;
  for (int j = 0; j < levels; ++j) {
    const double delta = std::ldexp(cfg.sampler.scale, -j);
    const bool last = (j == levels - 1);
    double level_max = 0.0;
    std::optional<Witness> level_exceed;

    for (const auto& t : grid) {
      if (max_entry(t) >= delta) continue;
      const double v = evaluate(f, t);
      level_max = std::max(level_max, v);
      if (last && !level_exceed && v > cfg.tol.cont) {
        Witness w = corner_witness({t});
        w.delta = delta;
        level_exceed = std::move(w);
      }
    }

    const std::uint64_t per_level =
        base_per_level + (static_cast<std::uint64_t>(j) < remainder ? 1 : 0);
    SoaBatch batch(f.arity, static_cast<std::size_t>(per_level));
    for (std::uint64_t s = 0; s < per_level; ++s) {
      DrawStream stream(cfg.sampler.seed,
                        static_cast<std::uint64_t>(j) * budget + s);
      for (int i = 0; i < f.arity; ++i)
        batch.row(i)[static_cast<std::size_t>(s)] = delta * stream.next_unit();
    }
    std::vector<double> out(static_cast<std::size_t>(per_level));
    evaluate_batch(f, batch, out);
    used += per_level;
    for (std::uint64_t s = 0; s < per_level; ++s) {
      const double v = out[static_cast<std::size_t>(s)];
      level_max = std::max(level_max, v);
      if (last && !level_exceed && v > cfg.tol.cont) {
        std::vector<double> col(static_cast<std::size_t>(f.arity));
        batch.get_column(static_cast<std::size_t>(s), col);
        Witness w = sample_witness({NonNegTuple(col)},
                                   static_cast<std::uint64_t>(j) * budget + s);
        w.delta = delta;
        level_exceed = std::move(w);
      }
    }

    if (last) {
      final_max = level_max;
      final_exceed = std::move(level_exceed);
    }
  }

  if (final_max > cfg.tol.cont && final_exceed)
    return falsified_verdict(*final_exceed, used, cfg.sampler.seed);
  return consistent_verdict(used, cfg.sampler.seed);
}

Verdict check_property(PropertyKind k, const AggregatorSpec& f,
                       const CheckConfig& cfg) {
  switch (k) {
    case PropertyKind::VanishesAtZero: return check_vanishes_at_zero(f, cfg);
    case PropertyKind::ZeroPreimageTrivial: return check_zero_preimage(f, cfg);
    case PropertyKind::Monotone: return check_monotone(f, cfg);
    case PropertyKind::Subadditive: return check_subadditive(f, cfg);
    case PropertyKind::TripletPreserving:
      return check_triplet_preservation(f, cfg);
    case PropertyKind::AsymmetricTriplet:
      return check_asymmetric_triplet(f, cfg);
    case PropertyKind::ContinuousAtZero:
      return check_continuity_at_zero(f, cfg);
  }
  throw DomainError("unreachable property kind");
}

// ---------------------------------------------------------------------------
// Witness utilities
// ---------------------------------------------------------------------------

bool witness_falsifies(PropertyKind k, const AggregatorSpec& f,
                       const Witness& w, const Tolerances& tol) {
  switch (k) {
    case PropertyKind::VanishesAtZero:
      return w.tuples.size() == 1 && w.tuples[0].is_zero() &&
             evaluate(f, w.tuples[0]) > tol.zero;
    case PropertyKind::ZeroPreimageTrivial: {
      // either side of F^{-1}(0) = {0} can fail: a nonzero point mapped to
      // zero, or the origin mapped away from zero
      if (w.tuples.size() != 1) return false;
      const double v = evaluate(f, w.tuples[0]);
      if (w.tuples[0].is_zero()) return v > tol.zero;
      return max_entry(w.tuples[0]) > tol.zero && v <= tol.zero;
    }
    case PropertyKind::Monotone:
      return w.tuples.size() == 2 && w.tuples[0].leq(w.tuples[1]) &&
             evaluate(f, w.tuples[0]) > evaluate(f, w.tuples[1]) + tol.cmp;
    case PropertyKind::Subadditive:
      return w.tuples.size() == 2 &&
             evaluate(f, w.tuples[0] + w.tuples[1]) >
                 evaluate(f, w.tuples[0]) + evaluate(f, w.tuples[1]) + tol.cmp;
    case PropertyKind::TripletPreserving: {
      if (w.tuples.size() != 3) return false;
      if (!is_triangle_triplet(w.tuples[0], w.tuples[1], w.tuples[2]))
        return false;
      const double fa = evaluate(f, w.tuples[0]);
      const double fb = evaluate(f, w.tuples[1]);
      const double fc = evaluate(f, w.tuples[2]);
      return std::max({fa - (fb + fc), fb - (fa + fc), fc - (fa + fb)}) >
             tol.cmp;
    }
    case PropertyKind::AsymmetricTriplet: {
      if (w.tuples.size() != 3) return false;
      const auto& a = w.tuples[0];
      const auto& b = w.tuples[1];
      const auto& c = w.tuples[2];
      for (int i = 0; i < a.arity(); ++i)
        if (a[i] > b[i] + c[i]) return false;
      return evaluate(f, a) > evaluate(f, b) + evaluate(f, c) + tol.cmp;
    }
    case PropertyKind::ContinuousAtZero: {
      if (w.tuples.size() != 1) return false;
      if (w.delta && max_entry(w.tuples[0]) >= *w.delta) return false;
      return evaluate(f, w.tuples[0]) > tol.cont;
    }
  }
  return false;
}

namespace {

std::vector<double> shrink_candidates(double x) {
  std::vector<double> out;
  const auto push = [&](double c) {
    if (c < x && std::find(out.begin(), out.end(), c) == out.end())
      out.push_back(c);
  };
  if (x == 0.0) return out;
  push(0.0);
  push(1.0);
  push(std::floor(x));
  if (x > 1.0) push(x / 2.0);
  return out;
}

}  // namespace

Witness shrink_witness(const AggregatorSpec& f, PropertyKind k, Witness w,
                       const Tolerances& tol) {
  if (!witness_falsifies(k, f, w, tol))
    throw ContractError("shrink_witness requires a falsifying witness for " +
                        property_kind_name(k));
  for (int round = 0; round < 64; ++round) {
    bool changed = false;
    for (std::size_t t = 0; t < w.tuples.size(); ++t) {
      for (int i = 0; i < w.tuples[t].arity(); ++i) {
        for (double cand : shrink_candidates(w.tuples[t][i])) {
          Witness trial = w;
          trial.tuples[t] = replace_entry(trial.tuples[t], i, cand);
          if (witness_falsifies(k, f, trial, tol)) {
            w = std::move(trial);
            changed = true;
            break;
          }
        }
      }
    }
    if (!changed) break;
  }
  return w;
}

std::pair<PropertyKind, Witness> propagate_triplet_witness(
    const AggregatorSpec& f, const NonNegTuple& a, const NonNegTuple& b,
    const NonNegTuple& c, const Tolerances& tol) {
  for (int i = 0; i < a.arity(); ++i)
    if (a[i] > b[i] + c[i])
      throw ContractError(
          "propagate_triplet_witness requires a <= b + c componentwise");
  const double fa = evaluate(f, a);
  const double fb = evaluate(f, b);
  const double fc = evaluate(f, c);
  if (!(fa > fb + fc + tol.cmp))
    throw ContractError(
        "propagate_triplet_witness requires F(a) > F(b) + F(c)");
  const NonNegTuple bpc = b + c;
  if (fa > evaluate(f, bpc) + tol.cmp) {
    Witness w{{a, bpc}, std::nullopt, std::nullopt, "derived", 0};
    return {PropertyKind::Monotone, std::move(w)};
  }
  Witness w{{b, c}, std::nullopt, std::nullopt, "derived", 0};
  return {PropertyKind::Subadditive, std::move(w)};
}

// ---------------------------------------------------------------------------
// The class lattice
// ---------------------------------------------------------------------------

std::string class_id_name(const ClassId& id) {
  std::string fam;
  switch (id.family) {
    case MetricFamily::QuasiPseudometric: fam = "QPM"; break;
    case MetricFamily::QuasiMetric: fam = "QM"; break;
    case MetricFamily::Pseudometric: fam = "PM"; break;
    case MetricFamily::Metric: fam = "M"; break;
  }
  std::string out = id.strongly ? "strongly-" + fam : fam;
  out += "-agg(" + agg_mode_name(id.mode) + ")";
  return out;
}

std::string class_state_name(ClassState s) {
  switch (s) {
    case ClassState::ConsistentWith: return "ConsistentWith";
    case ClassState::Excluded: return "Excluded";
    case ClassState::Undetermined: return "Undetermined";
  }
  return "?";
}

const Verdict& ClassificationReport::property(PropertyKind k) const {
  for (const auto& [kind, v] : properties)
    if (kind == k) return v;
  throw DomainError("property missing from report");
}

const ClassVerdict& ClassificationReport::class_verdict(
    const ClassId& id) const {
  for (const auto& [cid, v] : classes)
    if (cid == id) return v;
  throw DomainError("class missing from report");
}

namespace {

// True when F stays above the continuity threshold along the diagonal
// (t, ..., t) as t -> 0; such an F breaks aggregated convergence of the
// diagonal null sequence in any nontrivial metric family, which rules out
// strong set-mode aggregation constructively.
bool diagonally_discontinuous(const AggregatorSpec& f, const Tolerances& tol) {
  for (int j = 40; j <= 60; ++j) {
    const double t = std::ldexp(1.0, -j);
    const NonNegTuple diag(
        std::vector<double>(static_cast<std::size_t>(f.arity), t));
    if (!(evaluate(f, diag) > tol.cont)) return false;
  }
  return true;
}

struct Rules {
  const ClassificationReport& report;

  bool consistent(std::initializer_list<PropertyKind> props) const {
    for (PropertyKind k : props)
      if (!report.property(k).consistent()) return false;
    return true;
  }
  std::vector<PropertyKind> falsified(
      std::initializer_list<PropertyKind> props) const {
    std::vector<PropertyKind> out;
    for (PropertyKind k : props)
      if (report.property(k).falsified()) out.push_back(k);
    return out;
  }

  // ConsistentWith iff every prerequisite survived, Excluded otherwise.
  ClassVerdict all_of(std::initializer_list<PropertyKind> prereqs) const {
    auto blockers = falsified(prereqs);
    if (blockers.empty()) return {ClassState::ConsistentWith, {}, ""};
    return {ClassState::Excluded, std::move(blockers),
            "excluded by falsified prerequisite"};
  }
};

}  // namespace

ClassificationReport classify(const AggregatorSpec& f,
                              const CheckConfig& cfg) {
  ClassificationReport report;
  report.function_name = f.name;
  report.arity = f.arity;
  report.seed = cfg.sampler.seed;
  report.budget = cfg.sampler.budget;

  for (PropertyKind k : kAllProperties) {
    Verdict v = check_property(k, f, cfg);
    const bool shrinkable = k == PropertyKind::ZeroPreimageTrivial ||
                            k == PropertyKind::Monotone ||
                            k == PropertyKind::Subadditive ||
                            k == PropertyKind::TripletPreserving ||
                            k == PropertyKind::AsymmetricTriplet;
    if (v.falsified() && shrinkable)
      v.witness = shrink_witness(f, k, *v.witness, cfg.tol);
    report.properties.emplace_back(k, std::move(v));
  }

  using PK = PropertyKind;
  const Rules r{report};

  const auto vanish = PK::VanishesAtZero;
  const auto zp = PK::ZeroPreimageTrivial;
  const auto mono = PK::Monotone;
  const auto sub = PK::Subadditive;
  const auto trip = PK::TripletPreserving;
  const auto asym = PK::AsymmetricTriplet;
  const auto cont = PK::ContinuousAtZero;

  const auto qpm = MetricFamily::QuasiPseudometric;
  const auto qm = MetricFamily::QuasiMetric;
  const auto pm = MetricFamily::Pseudometric;
  const auto m = MetricFamily::Metric;
  const auto prod = AggMode::Products;
  const auto sets = AggMode::Sets;

  const auto add = [&](MetricFamily fam, AggMode mode, bool strongly,
                       ClassVerdict v) {
    report.classes.emplace_back(ClassId{fam, mode, strongly}, std::move(v));
  };

  // Plain classes.  Quasi-pseudometric and pseudometric aggregation coincide
  // on products and sets; quasi-metric and metric aggregation on products
  // imply the set-mode classes by restriction to the diagonal.
  add(qpm, prod, false, r.all_of({vanish, sub, mono}));
  add(qpm, sets, false, r.all_of({vanish, sub, mono}));
  add(qm, prod, false, r.all_of({zp, sub, mono}));
  {
    // Set-mode quasi-metric families realize every dominated triple (one-way
    // zeros are allowed), so violations of these four properties exclude.
    ClassVerdict v;
    auto blockers = r.falsified({vanish, sub, mono, asym});
    if (!blockers.empty()) {
      v = {ClassState::Excluded, std::move(blockers),
           "violation realizable by a quasi-metric family on a shared set"};
    } else if (r.consistent({zp, sub, mono})) {
      v = {ClassState::ConsistentWith, {},
           "via products-mode membership, restricted to the diagonal"};
    } else {
      v = {ClassState::Undetermined, {},
           "set-mode membership is not decided by the sampled global "
           "properties"};
    }
    add(qm, sets, false, std::move(v));
  }
  add(pm, prod, false, r.all_of({vanish, trip}));
  add(pm, sets, false, r.all_of({vanish, trip}));
  add(m, prod, false, r.all_of({zp, trip}));
  {
    ClassVerdict v;
    if (f.kind == AggKind::Indicator) {
      v = {ClassState::ConsistentWith, {},
           "certified: the aggregated distance on sets is the discrete "
           "metric for every family of metrics"};
    } else if (report.property(vanish).falsified()) {
      v = {ClassState::Excluded, {vanish},
           "a nonvanishing origin breaks d(x, x) = 0 on every family"};
    } else if (r.consistent({zp, trip})) {
      v = {ClassState::ConsistentWith, {},
           "via products-mode membership, restricted to the diagonal"};
    } else {
      v = {ClassState::Undetermined, {},
           "set-mode metric membership is not decided by the sampled global "
           "properties"};
    }
    add(m, sets, false, std::move(v));
  }

  // Strong classes.  Strong quasi-pseudometric, quasi-metric, and
  // pseudometric aggregation coincide across products and sets; only the
  // strong metric set-mode class resists a global characterization.
  add(qpm, prod, true, r.all_of({zp, sub, mono, cont}));
  add(qpm, sets, true, r.all_of({zp, sub, mono, cont}));
  add(qm, prod, true, r.all_of({zp, sub, mono, cont}));
  add(qm, sets, true, r.all_of({zp, sub, mono, cont}));
  add(pm, prod, true, r.all_of({zp, trip, cont}));
  add(pm, sets, true, r.all_of({zp, trip, cont}));
  add(m, prod, true, r.all_of({zp, trip, cont}));
  {
    // Exclusions must be realizable by families of genuine metrics, and the
    // sampled witnesses may contain zero coordinates that no metric family
    // can produce.  Two routes are always sound: a nonvanishing origin, and a
    // diagonal null family whose aggregated distances stay bounded away from
    // zero.
    ClassVerdict v;
    if (report.property(vanish).falsified()) {
      v = {ClassState::Excluded, {vanish},
           "a nonvanishing origin breaks d(x, x) = 0 on every family"};
    } else if (r.consistent({zp, trip, cont})) {
      v = {ClassState::ConsistentWith, {},
           "via strong products-mode membership"};
    } else if (diagonally_discontinuous(f, cfg.tol)) {
      v = {ClassState::Excluded, {cont},
           "the diagonal null family separates supremum and aggregated "
           "convergence"};
    } else {
      v = {ClassState::Undetermined, {},
           "not fully decidable from global properties; the remaining "
           "conditions are space-relative"};
    }
    add(m, sets, true, std::move(v));
  }

  return report;
}

}  // namespace metriforge
