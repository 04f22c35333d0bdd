#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "metriforge/demos.hpp"
#include "metriforge/report.hpp"

namespace mf = metriforge;

namespace {

// Exit codes: 0 the command ran (verdicts, including falsifications, are
// results); 1 a demo's own expectations failed; 2 usage, parse, or file
// errors.

std::uint64_t env_seed(std::uint64_t fallback) {
  const char* s = std::getenv("METRIFORGE_SEED");
  if (!s || !*s) return fallback;
  try {
    return std::stoull(s);
  } catch (...) {
    throw mf::DomainError("METRIFORGE_SEED must be a nonnegative integer");
  }
}

// parse_spec plus the CLI-only "zero" sugar for the constant-zero function.
mf::AggregatorSpec parse_fn(const std::string& text, int arity) {
  std::string folded;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch)))
      folded += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (folded == "zero")
    return mf::make_custom("zero", arity > 0 ? arity : 2,
                           [](std::span<const double>) { return 0.0; });
  mf::AggregatorSpec f = mf::parse_spec(text);
  if (arity > 0 && arity != f.arity) f = mf::with_arity(std::move(f), arity);
  return f;
}

// Each --space value is a file path when it exists on disk or looks like
// one, otherwise a builtin spec; builtins may expand to several members.
std::vector<mf::FiniteSpace> collect_members(
    const std::vector<std::string>& specs) {
  std::vector<mf::FiniteSpace> out;
  for (const auto& s : specs) {
    const bool pathlike = s.find('/') != std::string::npos ||
                          s.find(".json") != std::string::npos;
    if (pathlike || std::filesystem::exists(s)) {
      out.push_back(mf::load_space(s));
    } else {
      for (auto& m : mf::parse_builtin_spaces(s)) out.push_back(std::move(m));
    }
  }
  return out;
}

mf::AggMode parse_mode(const std::string& text) {
  if (text == "products") return mf::AggMode::Products;
  if (text == "sets") return mf::AggMode::Sets;
  throw mf::DomainError("mode must be 'products' or 'sets', not '" + text +
                        "'");
}

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

std::string tuple_str(const mf::NonNegTuple& t) {
  std::string out = "(";
  for (int i = 0; i < t.arity(); ++i) {
    if (i) out += ", ";
    out += num(t[i]);
  }
  return out + ")";
}

std::string witness_str(const mf::Witness& w) {
  std::string out;
  for (const auto& t : w.tuples) {
    if (!out.empty()) out += " ";
    out += tuple_str(t);
  }
  out += "  origin=" + w.origin;
  if (w.origin == "sample" || w.origin == "sequence")
    out += "#" + std::to_string(w.draw_index);
  if (w.delta) out += " delta=" + num(*w.delta);
  if (w.radius) out += " radius=" + num(*w.radius);
  return out;
}

void print_verdict(const std::string& indent, const mf::Verdict& v) {
  std::cout << mf::verdict_status_name(v.status) << " (samples "
            << v.samples_used << ")\n";
  if (v.witness)
    std::cout << indent << "witness: " << witness_str(*v.witness) << "\n";
}

void emit(const mf::Json& j) { std::cout << mf::render(j); }

int cmd_classify(const std::string& fn, int arity, std::uint64_t samples,
                 std::uint64_t seed, double scale, int workers, bool json) {
  mf::CheckConfig cfg;
  cfg.sampler.seed = seed;
  cfg.sampler.budget = samples;
  cfg.sampler.scale = scale;
  cfg.workers = workers;
  const mf::AggregatorSpec f = parse_fn(fn, arity);
  const mf::ClassificationReport rep = mf::classify(f, cfg);

  if (json) {
    // workers is an execution knob, not an input: the report is identical
    // for every worker count, so echoing it would break byte determinism.
    mf::Json inputs;
    inputs["fn"] = fn;
    inputs["arity"] = rep.arity;
    inputs["samples"] = samples;
    inputs["scale"] = scale;
    mf::Json env = mf::envelope("classify", seed, inputs);
    const mf::Json payload = mf::classification_json(rep);
    for (const auto& [k, v] : payload.items()) env[k] = v;
    emit(env);
    return 0;
  }

  std::cout << "function: " << rep.function_name << " (arity " << rep.arity
            << ")\n";
  std::cout << "seed: " << rep.seed << "  budget: " << rep.budget << "\n";
  std::cout << "properties:\n";
  for (const auto& [kind, verdict] : rep.properties) {
    std::cout << "  " << mf::property_kind_name(kind) << ": ";
    print_verdict("    ", verdict);
  }
  std::cout << "classes:\n";
  for (const auto& [id, cv] : rep.classes) {
    std::cout << "  " << mf::class_id_name(id) << ": "
              << mf::class_state_name(cv.state);
    if (!cv.blockers.empty()) {
      std::cout << " [";
      for (std::size_t i = 0; i < cv.blockers.size(); ++i)
        std::cout << (i ? ", " : "") << mf::property_kind_name(cv.blockers[i]);
      std::cout << "]";
    }
    if (!cv.note.empty()) std::cout << "  " << cv.note;
    std::cout << "\n";
  }
  return 0;
}

int cmd_axioms(const std::string& fn, int arity, const std::string& mode_text,
               const std::vector<std::string>& spaces, bool json) {
  auto members = collect_members(spaces);
  const mf::AggMode mode = parse_mode(mode_text);
  const mf::AggregatorSpec f =
      parse_fn(fn, arity > 0 ? arity : static_cast<int>(members.size()));
  mf::SpaceFamily fam = mf::make_family(mode, std::move(members));

  mf::Json inputs;
  inputs["fn"] = fn;
  inputs["mode"] = mode_text;
  inputs["spaces"] = spaces;

  try {
    const mf::FiniteSpace agg = mode == mf::AggMode::Products
                                    ? mf::product_aggregate(f, fam)
                                    : mf::set_aggregate(f, fam);
    if (json) {
      mf::Json env = mf::envelope("axioms", 0, inputs);
      env["axiom_class"] = mf::metric_family_name(agg.axiom_class);
      env["space"] = mf::space_json(agg);
      emit(env);
    } else {
      std::cout << "axiom_class: " << mf::metric_family_name(agg.axiom_class)
                << "\n";
      std::cout << "points: " << agg.size() << "\n";
      if (agg.size() <= 12) std::cout << mf::space_to_json(agg) << "\n";
    }
  } catch (const mf::AxiomError& e) {
    if (json) {
      mf::Json env = mf::envelope("axioms", 0, inputs);
      env["axiom_class"] = nullptr;
      mf::Json v;
      v["axiom"] = mf::axiom_name(e.violation().axiom);
      v["message"] = e.what();
      v["lhs"] = e.violation().lhs;
      v["rhs"] = e.violation().rhs;
      env["violation"] = v;
      emit(env);
    } else {
      std::cout << "aggregation failed: " << e.what() << "\n";
    }
  }
  return 0;
}

int cmd_topology(const std::string& fn, int arity, const std::string& mode_text,
                 const std::vector<std::string>& spaces, bool json) {
  auto members = collect_members(spaces);
  const mf::AggMode mode = parse_mode(mode_text);
  const mf::AggregatorSpec f =
      parse_fn(fn, arity > 0 ? arity : static_cast<int>(members.size()));
  mf::SpaceFamily fam = mf::make_family(mode, std::move(members));

  mf::Json inputs;
  inputs["fn"] = fn;
  inputs["mode"] = mode_text;
  inputs["spaces"] = spaces;

  try {
    const mf::InclusionReport rep = mode == mf::AggMode::Products
                                        ? mf::check_product_inclusion(f, fam)
                                        : mf::check_sup_inclusion(f, fam);
    if (json) {
      mf::Json env = mf::envelope("topology", 0, inputs);
      const mf::Json payload = mf::inclusion_json(rep);
      for (const auto& [k, v] : payload.items()) env[k] = v;
      emit(env);
    } else {
      const char* base =
          mode == mf::AggMode::Products ? "product" : "supremum";
      std::cout << "order: " << mf::topology_order_name(rep.order) << "\n";
      std::cout << base << " topology inside aggregated: "
                << (rep.base_subset_aggregated ? "yes" : "no") << "\n";
      std::cout << "aggregated topology inside " << base << ": "
                << (rep.aggregated_subset_base ? "yes" : "no") << "\n";
      if (rep.witness_point) {
        std::cout << "witness point: " << *rep.witness_point << "\n";
        std::cout << "  U_" << base << ": ";
        for (const auto& p : rep.witness_base_u) std::cout << p << " ";
        std::cout << "\n  U_aggregated: ";
        for (const auto& p : rep.witness_agg_u) std::cout << p << " ";
        std::cout << "\n";
      }
      if (!rep.note.empty()) std::cout << "note: " << rep.note << "\n";
    }
  } catch (const mf::AxiomError& e) {
    if (json) {
      mf::Json env = mf::envelope("topology", 0, inputs);
      env["order"] = nullptr;
      env["aggregation_error"] = e.what();
      emit(env);
    } else {
      std::cout << "aggregation failed: " << e.what() << "\n";
    }
  }
  return 0;
}

int cmd_probe(const std::string& fn, int arity, const std::string& scenario,
              std::size_t K, bool json) {
  const mf::AggregatorSpec f = parse_fn(fn, arity);
  const mf::ProbeReport rep = mf::run_probe_scenario(f, scenario, K);
  if (json) {
    mf::Json inputs;
    inputs["fn"] = fn;
    inputs["scenario"] = scenario;
    inputs["K"] = K;
    mf::Json env = mf::envelope("probe", 0, inputs);
    const mf::Json payload = mf::probe_json(rep);
    for (const auto& [k, v] : payload.items()) env[k] = v;
    emit(env);
    return 0;
  }
  std::cout << "scenario: " << rep.scenario << "\n";
  std::cout << rep.description << "\n";
  std::cout << "verdict: ";
  print_verdict("  ", rep.verdict);
  for (const auto& c : rep.convergences) {
    std::cout << "  " << mf::probe_mode_name(c.mode) << ": "
              << (c.converges ? "converges" : "does not converge");
    if (c.epsilon_witness)
      std::cout << " (epsilon " << c.epsilon_witness->first << " at index "
                << c.epsilon_witness->second << ")";
    std::cout << "\n";
  }
  return 0;
}

int cmd_demo(const std::string& name, bool json) {
  const mf::DemoResult res = mf::run_demo(name);
  if (json) {
    mf::Json inputs;
    inputs["name"] = name;
    mf::Json env = mf::envelope("demo", 0, inputs);
    env["claim"] = res.claim;
    env["passed"] = res.passed;
    env["checks"] = res.checks;
    emit(env);
  } else {
    std::cout << res.name << ": " << res.claim << "\n";
    for (const auto& line : res.checks) std::cout << "  " << line << "\n";
    std::cout << (res.passed ? "demo passed" : "demo FAILED") << "\n";
  }
  return res.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "metriforge: aggregation functions on families of generalized metrics"};
  app.require_subcommand(1);

  std::string fn, mode, scenario, demo_name;
  std::vector<std::string> spaces;
  int arity = 0, workers = 1;
  std::uint64_t samples = 100000, seed = 0;
  double scale = 1.0;
  std::size_t K = mf::kDefaultSequenceDepth;
  bool json_classify = false, json_axioms = false, json_topology = false,
       json_probe = false, json_demo = false;

  auto* classify = app.add_subcommand(
      "classify", "sample the seven properties and place the function");
  classify->add_option("--fn", fn, "aggregator spec, e.g. max, wsum(1,2), pnorm(2), series(8), proj(2), dobos, jump, indicator, zero")
      ->required();
  classify->add_option("--arity", arity, "number of coordinates");
  classify->add_option("--samples", samples, "sampling budget per property");
  auto* seed_opt = classify->add_option("--seed", seed, "sampler seed");
  classify->add_option("--scale", scale, "sampling scale");
  classify->add_option("--workers", workers, "worker threads");
  classify->add_flag("--json", json_classify, "emit a JSON report");

  auto* axioms = app.add_subcommand(
      "axioms", "aggregate a family and report the axiom class");
  axioms->add_option("--fn", fn, "aggregator spec")->required();
  axioms->add_option("--arity", arity, "number of coordinates");
  axioms->add_option("--mode", mode, "products or sets")->required();
  axioms->add_option("--space", spaces,
                     "member space: a JSON file or a builtin such as "
                     "discrete(2), oneway(2), two_point_pq(0,1)")
      ->required();
  axioms->add_flag("--json", json_axioms, "emit a JSON report");

  auto* topology = app.add_subcommand(
      "topology", "compare the aggregated topology with the base topology");
  topology->add_option("--fn", fn, "aggregator spec")->required();
  topology->add_option("--arity", arity, "number of coordinates");
  topology->add_option("--mode", mode, "products or sets")->required();
  topology->add_option("--space", spaces, "member spaces, as in axioms")
      ->required();
  topology->add_flag("--json", json_topology, "emit a JSON report");

  auto* probe = app.add_subcommand(
      "probe", "run a countable scenario: null sequences and image grids");
  probe->add_option("--fn", fn, "aggregator spec")->required();
  probe->add_option("--arity", arity, "number of coordinates");
  probe->add_option("--scenario", scenario,
                    "null-seq, usc-projection, restricted-axis or "
                    "restricted-diag")
      ->required();
  probe->add_option("--K", K, "sequence depth for null-seq");
  probe->add_flag("--json", json_probe, "emit a JSON report");

  auto* demo =
      app.add_subcommand("demo", "run a named end-to-end demonstration");
  demo->add_option("--name", demo_name, "one of the built-in demos")
      ->required();
  demo->add_flag("--json", json_demo, "emit a JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (classify->parsed()) {
      const std::uint64_t effective =
          seed_opt->count() > 0 ? seed : env_seed(42);
      return cmd_classify(fn, arity, samples, effective, scale, workers,
                          json_classify);
    }
    if (axioms->parsed()) return cmd_axioms(fn, arity, mode, spaces, json_axioms);
    if (topology->parsed())
      return cmd_topology(fn, arity, mode, spaces, json_topology);
    if (probe->parsed()) return cmd_probe(fn, arity, scenario, K, json_probe);
    if (demo->parsed()) return cmd_demo(demo_name, json_demo);
  } catch (const mf::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
