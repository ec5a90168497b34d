#pragma once

#include "thingc/events.hpp"
#include "thingc/model.hpp"

namespace thingc {

struct Injection {
  long long tick = 0;
  std::string thing;
  std::string stage;  // must be a Transfer stage
};

struct Scenario {
  std::string name;
  long long horizon = 0;
  std::vector<Injection> injections;
};

struct ScenarioResult {
  std::optional<Scenario> scenario;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return scenario.has_value() && !has_errors(diagnostics); }
};

// `.tms` format: `horizon <n>`, `at <tick> inject <thing> into <stageId>`,
// optional `scenario <name>`, `#` comments.
ScenarioResult load_scenario(const std::string& text, const Model& m,
                             const std::string& filename = "<input>");

enum class StepKind { Move, Trigger, Assign, Create, Consume };
const char* to_string(StepKind k);

struct TraceStep {
  long long tick = 0;
  StepKind kind = StepKind::Move;
  std::string arc;       // move/trigger/assign steps
  std::string stage;     // create/consume steps and move target
  std::string source;    // move/trigger source stage
  std::string instance;  // thing instance id
  std::string thing;
  std::string var;       // assign steps
  Value value;           // assigned value
};

struct TokenState {
  std::string instance;
  std::string thing;
  std::string stage;
};

struct Trace {
  std::vector<TraceStep> steps;
  std::map<std::string, Value> final_variables;
  std::vector<TokenState> final_tokens;
};

struct SimOptions {
  long long max_steps_per_tick = 10000;
};

struct SimResult {
  std::optional<Trace> trace;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return trace.has_value() && !has_errors(diagnostics); }
};

// Deterministic synchronous execution. Per tick: injections land, every
// token advances at most one hop along its unique outgoing flow, then
// triggers fire in declaration-order sweeps over stages that first hosted
// activity this tick (guards read the variable state at sweep start).
SimResult simulate(const Model& m, const Scenario& s, const SimOptions& opts = {});

struct EventOccurrence {
  std::string event;
  long long start = 0;
  long long end = 0;
  friend bool operator==(const EventOccurrence&, const EventOccurrence&) = default;
};

struct OccurrenceResult {
  std::vector<EventOccurrence> occurrences;  // ordered by (start, declaration)
  std::vector<Diagnostic> diagnostics;       // behavior-order violations
};

// Maximal tick intervals of trace activity inside each event's region,
// checked for consistency against the behavior graph's edges.
OccurrenceResult trace_to_events(const Model& m, const Trace& t,
                                 const std::vector<EventDef>& events);

}  // namespace thingc
