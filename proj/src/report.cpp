#include "metriforge/report.hpp"

namespace metriforge {

namespace {

Json tuple_json(const NonNegTuple& t) {
  Json arr = Json::array();
  for (double v : t.values()) arr.push_back(v);
  return arr;
}

Json string_list(const std::vector<std::string>& xs) {
  Json arr = Json::array();
  for (const auto& x : xs) arr.push_back(x);
  return arr;
}

}  // namespace

Json envelope(const std::string& command, std::uint64_t seed, Json inputs) {
  Json j;
  j["command"] = command;
  j["version"] = kVersion;
  j["seed"] = seed;
  j["inputs"] = std::move(inputs);
  return j;
}

Json witness_json(const Witness& w) {
  Json j;
  Json tuples = Json::array();
  for (const auto& t : w.tuples) tuples.push_back(tuple_json(t));
  j["tuples"] = std::move(tuples);
  if (w.delta) j["delta"] = *w.delta;
  if (w.radius) j["radius"] = *w.radius;
  j["origin"] = w.origin;
  if (w.origin == "sample" || w.origin == "sequence")
    j["draw_index"] = w.draw_index;
  return j;
}

Json verdict_json(const Verdict& v) {
  Json j;
  j["status"] = verdict_status_name(v.status);
  j["samples_used"] = v.samples_used;
  j["seed"] = v.seed;
  if (v.witness) j["witness"] = witness_json(*v.witness);
  return j;
}

Json classification_json(const ClassificationReport& rep) {
  Json j;
  j["function"] = rep.function_name;
  j["arity"] = rep.arity;
  j["seed"] = rep.seed;
  j["budget"] = rep.budget;
  Json props = Json::array();
  for (const auto& [kind, verdict] : rep.properties) {
    Json p;
    p["property"] = property_kind_name(kind);
    p["verdict"] = verdict_json(verdict);
    props.push_back(std::move(p));
  }
  j["properties"] = std::move(props);
  Json classes = Json::array();
  for (const auto& [id, cv] : rep.classes) {
    Json c;
    c["class"] = class_id_name(id);
    c["state"] = class_state_name(cv.state);
    Json blockers = Json::array();
    for (PropertyKind k : cv.blockers) blockers.push_back(property_kind_name(k));
    c["blockers"] = std::move(blockers);
    if (!cv.note.empty()) c["note"] = cv.note;
    classes.push_back(std::move(c));
  }
  j["classes"] = std::move(classes);
  return j;
}

Json space_json(const FiniteSpace& s) {
  Json j;
  j["points"] = string_list(s.points);
  Json rows = Json::array();
  for (std::size_t i = 0; i < s.size(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < s.size(); ++k) row.push_back(s.at(i, k));
    rows.push_back(std::move(row));
  }
  j["matrix"] = std::move(rows);
  j["axiom_class"] = metric_family_name(s.axiom_class);
  return j;
}

Json violation_json(const AxiomViolation& v,
                    const std::vector<std::string>& labels) {
  Json j;
  j["axiom"] = axiom_name(v.axiom);
  j["description"] = v.describe(labels);
  j["lhs"] = v.lhs;
  j["rhs"] = v.rhs;
  return j;
}

Json inclusion_json(const InclusionReport& r) {
  Json j;
  j["order"] = topology_order_name(r.order);
  j["base_subset_aggregated"] = r.base_subset_aggregated;
  j["aggregated_subset_base"] = r.aggregated_subset_base;
  if (r.witness_point) {
    j["witness_point"] = *r.witness_point;
    j["left_U"] = string_list(r.witness_base_u);
    j["right_U"] = string_list(r.witness_agg_u);
  } else {
    j["witness_point"] = nullptr;
  }
  j["all_members_metric"] = r.all_members_metric;
  if (!r.note.empty()) j["note"] = r.note;
  j["aggregated_axiom_class"] = metric_family_name(r.aggregated_space.axiom_class);
  j["points"] = r.aggregated_space.size();
  return j;
}

Json convergence_json(const ConvergenceVerdict& v) {
  Json j;
  j["mode"] = probe_mode_name(v.mode);
  j["converges"] = v.converges;
  if (v.epsilon_witness) {
    j["epsilon"] = v.epsilon_witness->first;
    j["index"] = v.epsilon_witness->second;
  }
  return j;
}

Json probe_json(const ProbeReport& rep) {
  Json j;
  j["scenario"] = rep.scenario;
  j["description"] = rep.description;
  j["verdict"] = verdict_json(rep.verdict);
  Json conv = Json::array();
  for (const auto& c : rep.convergences) conv.push_back(convergence_json(c));
  j["convergences"] = std::move(conv);
  return j;
}

std::string render(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace metriforge
