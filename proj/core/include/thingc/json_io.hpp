#pragma once

#include <json.hpp>

#include "thingc/events.hpp"
#include "thingc/model.hpp"
#include "thingc/sim.hpp"
#include "thingc/transform.hpp"

namespace thingc {

inline constexpr int kSchemaVersion = 1;  // "tm_schema" field in every export

nlohmann::ordered_json model_to_json(const Model& m);
nlohmann::ordered_json behavior_to_json(const BehaviorGraph& g);
nlohmann::ordered_json use_case_to_json(const UseCaseDiagram& d);
nlohmann::ordered_json flow_relation_to_json(const std::vector<FlowTuple>& rel);
nlohmann::ordered_json diagnostics_to_json(const std::vector<Diagnostic>& diags);
nlohmann::ordered_json events_to_json(const std::vector<EventDef>& events);
nlohmann::ordered_json occurrences_to_json(const std::vector<EventOccurrence>& occ);

// One JSON object per line for each step, then a final_state line.
std::string trace_to_jsonl(const Trace& t);

struct ModelImportResult {
  std::optional<Model> model;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return model.has_value() && !has_errors(diagnostics); }
};

ModelImportResult model_from_json(const nlohmann::json& j);
BehaviorGraph behavior_from_json(const nlohmann::json& j);

}  // namespace thingc
