#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "thingc/diagnostics.hpp"
#include "thingc/expr.hpp"

namespace thingc {

enum class StageKind { Create, Process, Release, Transfer, Receive };
enum class ArcKind { Flow, Trigger };

const char* to_string(StageKind k);
std::optional<StageKind> stage_kind_from_string(const std::string& s);

struct Machine {
  std::string id;
  std::string name;       // display string, defaults to id
  std::string parent;     // empty only for the root
  bool is_actor = false;
  std::string usecase;    // optional use-case grouping tag
  SourceSpan span;
};

struct Stage {
  std::string id;
  StageKind kind = StageKind::Create;
  std::string machine;
  std::string label;
  SourceSpan span;
};

// Flow arcs carry a thing name; trigger arcs may carry a guard and actions.
// Arc ids are assigned in declaration order: f1.. for flows, t1.. for triggers.
// Endpoints normally name stages; simplified models may anchor them at machines.
struct Arc {
  std::string id;
  ArcKind kind = ArcKind::Flow;
  std::string source;
  std::string target;
  std::string thing;
  ExprPtr guard;
  std::vector<Action> actions;
  SourceSpan span;
};

struct StateVar {
  std::string id;
  VarType type = VarType::Number;
  std::vector<std::string> enum_values;
  Value initial;
  SourceSpan span;
};

struct EventDef {
  std::string id;
  std::string name;
  std::vector<std::string> region;  // stage and arc ids
  std::string time;                 // optional annotation, carried verbatim
  SourceSpan span;
};

class Model {
 public:
  std::string name;
  std::vector<Machine> machines;  // pre-order, root first
  std::vector<Stage> stages;
  std::vector<Arc> arcs;
  std::vector<StateVar> variables;
  std::vector<EventDef> events;

  const Machine* machine(const std::string& id) const;
  const Stage* stage(const std::string& id) const;
  const Arc* arc(const std::string& id) const;
  const StateVar* variable(const std::string& id) const;
  const EventDef* event(const std::string& id) const;

  const Machine& root() const;

  // Machine that owns an arc endpoint: the stage's machine, or the
  // endpoint itself when it names a machine (simplified models).
  std::string owner_machine(const std::string& endpoint) const;

  std::vector<const Arc*> flows_out_of(const std::string& stage_id) const;
  std::vector<const Arc*> flows_into(const std::string& stage_id) const;
  std::vector<const Arc*> triggers_from(const std::string& stage_id) const;

  // True if `m` equals `ancestor` or is nested (transitively) inside it.
  bool within(const std::string& m, const std::string& ancestor) const;

  void rebuild_index();

 private:
  std::unordered_map<std::string, size_t> machine_ix_, stage_ix_, arc_ix_, var_ix_, event_ix_;
};

// Structural equality ignoring source spans; expressions compare by
// canonical text.
bool structurally_equal(const Model& a, const Model& b);

struct BuildResult {
  std::optional<Model> model;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return model.has_value() && !has_errors(diagnostics); }
};

// Assembles a Model from declarations in order, assigning arc ids and
// checking duplicate ids, dangling references and flow thing names.
class ModelBuilder {
 public:
  explicit ModelBuilder(std::string model_name);

  void begin_machine(const std::string& id, const std::string& name, bool is_actor,
                     const std::string& usecase, SourceSpan span = {});
  void end_machine(SourceSpan span = {});
  void add_stage(StageKind kind, const std::string& id, const std::string& label,
                 SourceSpan span = {});
  void add_flow(const std::string& thing, const std::string& source, const std::string& target,
                SourceSpan span = {});
  void add_trigger(const std::string& source, const std::string& target, ExprPtr guard,
                   std::vector<Action> actions, SourceSpan span = {});
  void add_variable(const std::string& id, VarType type, std::vector<std::string> enum_values,
                    Value initial, SourceSpan span = {});
  void add_event(const std::string& id, const std::string& name, std::vector<std::string> region,
                 const std::string& time, SourceSpan span = {});

  BuildResult finish();

 private:
  Model model_;
  std::vector<Diagnostic> diags_;
  std::vector<std::string> machine_stack_;
  int flow_count_ = 0;
  int trigger_count_ = 0;
  bool finished_ = false;

  bool claim_id(const std::string& id, const char* kind, const SourceSpan& span);
  std::unordered_map<std::string, std::string> ids_;  // id -> element kind
};

}  // namespace thingc
