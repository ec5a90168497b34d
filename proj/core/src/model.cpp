#include "thingc/model.hpp"

#include <algorithm>

namespace thingc {

const char* to_string(StageKind k) {
  switch (k) {
    case StageKind::Create: return "Create";
    case StageKind::Process: return "Process";
    case StageKind::Release: return "Release";
    case StageKind::Transfer: return "Transfer";
    case StageKind::Receive: return "Receive";
  }
  return "?";
}

std::optional<StageKind> stage_kind_from_string(const std::string& s) {
  if (s == "Create") return StageKind::Create;
  if (s == "Process") return StageKind::Process;
  if (s == "Release") return StageKind::Release;
  if (s == "Transfer") return StageKind::Transfer;
  if (s == "Receive") return StageKind::Receive;
  return std::nullopt;
}

namespace {
template <class T>
const T* find_in(const std::vector<T>& v, const std::unordered_map<std::string, size_t>& ix,
                 const std::string& id) {
  auto it = ix.find(id);
  return it == ix.end() ? nullptr : &v[it->second];
}
}  // namespace

const Machine* Model::machine(const std::string& id) const {
  return find_in(machines, machine_ix_, id);
}
const Stage* Model::stage(const std::string& id) const { return find_in(stages, stage_ix_, id); }
const Arc* Model::arc(const std::string& id) const { return find_in(arcs, arc_ix_, id); }
const StateVar* Model::variable(const std::string& id) const {
  return find_in(variables, var_ix_, id);
}
const EventDef* Model::event(const std::string& id) const {
  return find_in(events, event_ix_, id);
}

const Machine& Model::root() const { return machines.front(); }

std::string Model::owner_machine(const std::string& endpoint) const {
  if (const Stage* s = stage(endpoint)) return s->machine;
  if (machine(endpoint)) return endpoint;
  return {};
}

std::vector<const Arc*> Model::flows_out_of(const std::string& stage_id) const {
  std::vector<const Arc*> out;
  for (const auto& a : arcs)
    if (a.kind == ArcKind::Flow && a.source == stage_id) out.push_back(&a);
  return out;
}

std::vector<const Arc*> Model::flows_into(const std::string& stage_id) const {
  std::vector<const Arc*> out;
  for (const auto& a : arcs)
    if (a.kind == ArcKind::Flow && a.target == stage_id) out.push_back(&a);
  return out;
}

std::vector<const Arc*> Model::triggers_from(const std::string& stage_id) const {
  std::vector<const Arc*> out;
  for (const auto& a : arcs)
    if (a.kind == ArcKind::Trigger && a.source == stage_id) out.push_back(&a);
  return out;
}

bool Model::within(const std::string& m, const std::string& ancestor) const {
  std::string cur = m;
  while (!cur.empty()) {
    if (cur == ancestor) return true;
    const Machine* mm = machine(cur);
    if (!mm) return false;
    cur = mm->parent;
  }
  return false;
}

void Model::rebuild_index() {
  machine_ix_.clear();
  stage_ix_.clear();
  arc_ix_.clear();
  var_ix_.clear();
  event_ix_.clear();
  for (size_t i = 0; i < machines.size(); i++) machine_ix_[machines[i].id] = i;
  for (size_t i = 0; i < stages.size(); i++) stage_ix_[stages[i].id] = i;
  for (size_t i = 0; i < arcs.size(); i++) arc_ix_[arcs[i].id] = i;
  for (size_t i = 0; i < variables.size(); i++) var_ix_[variables[i].id] = i;
  for (size_t i = 0; i < events.size(); i++) event_ix_[events[i].id] = i;
}

bool structurally_equal(const Model& a, const Model& b) {
  if (a.name != b.name) return false;
  if (a.machines.size() != b.machines.size() || a.stages.size() != b.stages.size() ||
      a.arcs.size() != b.arcs.size() || a.variables.size() != b.variables.size() ||
      a.events.size() != b.events.size())
    return false;
  for (size_t i = 0; i < a.machines.size(); i++) {
    const auto& x = a.machines[i];
    const auto& y = b.machines[i];
    if (x.id != y.id || x.name != y.name || x.parent != y.parent || x.is_actor != y.is_actor ||
        x.usecase != y.usecase)
      return false;
  }
  for (size_t i = 0; i < a.stages.size(); i++) {
    const auto& x = a.stages[i];
    const auto& y = b.stages[i];
    if (x.id != y.id || x.kind != y.kind || x.machine != y.machine || x.label != y.label)
      return false;
  }
  for (size_t i = 0; i < a.arcs.size(); i++) {
    const auto& x = a.arcs[i];
    const auto& y = b.arcs[i];
    if (x.id != y.id || x.kind != y.kind || x.source != y.source || x.target != y.target ||
        x.thing != y.thing || to_string(x.guard) != to_string(y.guard))
      return false;
    if (x.actions.size() != y.actions.size()) return false;
    for (size_t k = 0; k < x.actions.size(); k++)
      if (to_string(x.actions[k]) != to_string(y.actions[k])) return false;
  }
  for (size_t i = 0; i < a.variables.size(); i++) {
    const auto& x = a.variables[i];
    const auto& y = b.variables[i];
    if (x.id != y.id || x.type != y.type || x.enum_values != y.enum_values ||
        !(x.initial == y.initial))
      return false;
  }
  for (size_t i = 0; i < a.events.size(); i++) {
    const auto& x = a.events[i];
    const auto& y = b.events[i];
    if (x.id != y.id || x.name != y.name || x.region != y.region || x.time != y.time)
      return false;
  }
  return true;
}

ModelBuilder::ModelBuilder(std::string model_name) {
  model_.name = model_name;
  Machine root;
  root.id = std::move(model_name);
  root.name = root.id;
  model_.machines.push_back(root);
  ids_[model_.machines.front().id] = "machine";
}

bool ModelBuilder::claim_id(const std::string& id, const char* kind, const SourceSpan& span) {
  auto [it, inserted] = ids_.emplace(id, kind);
  if (!inserted) {
    diags_.push_back(Diagnostic::error(
        "duplicate-identifier", "identifier '" + id + "' already declared as " + it->second, id,
        span));
    return false;
  }
  return true;
}

void ModelBuilder::begin_machine(const std::string& id, const std::string& name, bool is_actor,
                                 const std::string& usecase, SourceSpan span) {
  Machine m;
  m.id = id;
  m.name = name.empty() ? id : name;
  m.parent = machine_stack_.empty() ? model_.machines.front().id : machine_stack_.back();
  m.is_actor = is_actor;
  m.usecase = usecase;
  m.span = span;
  if (claim_id(id, "machine", span)) model_.machines.push_back(std::move(m));
  machine_stack_.push_back(id);
}

void ModelBuilder::end_machine(SourceSpan span) {
  if (machine_stack_.empty()) {
    diags_.push_back(Diagnostic::error("unbalanced-block", "'}' without matching machine", "",
                                       span));
    return;
  }
  machine_stack_.pop_back();
}

void ModelBuilder::add_stage(StageKind kind, const std::string& id, const std::string& label,
                             SourceSpan span) {
  Stage s;
  s.id = id;
  s.kind = kind;
  s.machine = machine_stack_.empty() ? model_.machines.front().id : machine_stack_.back();
  s.label = label;
  s.span = span;
  if (claim_id(id, "stage", span)) model_.stages.push_back(std::move(s));
}

void ModelBuilder::add_flow(const std::string& thing, const std::string& source,
                            const std::string& target, SourceSpan span) {
  Arc a;
  a.id = "f" + std::to_string(++flow_count_);
  a.kind = ArcKind::Flow;
  a.source = source;
  a.target = target;
  a.thing = thing;
  a.span = span;
  if (thing.empty()) {
    diags_.push_back(
        Diagnostic::error("flow-missing-thing", "flow arc must carry a thing name", a.id, span));
    return;
  }
  if (claim_id(a.id, "arc", span)) model_.arcs.push_back(std::move(a));
}

void ModelBuilder::add_trigger(const std::string& source, const std::string& target,
                               ExprPtr guard, std::vector<Action> actions, SourceSpan span) {
  Arc a;
  a.id = "t" + std::to_string(++trigger_count_);
  a.kind = ArcKind::Trigger;
  a.source = source;
  a.target = target;
  a.guard = std::move(guard);
  a.actions = std::move(actions);
  a.span = span;
  if (claim_id(a.id, "arc", span)) model_.arcs.push_back(std::move(a));
}

void ModelBuilder::add_variable(const std::string& id, VarType type,
                                std::vector<std::string> enum_values, Value initial,
                                SourceSpan span) {
  StateVar v;
  v.id = id;
  v.type = type;
  v.enum_values = std::move(enum_values);
  v.initial = std::move(initial);
  v.span = span;
  if (claim_id(id, "variable", span)) model_.variables.push_back(std::move(v));
}

void ModelBuilder::add_event(const std::string& id, const std::string& name,
                             std::vector<std::string> region, const std::string& time,
                             SourceSpan span) {
  EventDef e;
  e.id = id;
  e.name = name;
  e.region = std::move(region);
  e.time = time;
  e.span = span;
  if (claim_id(id, "event", span)) model_.events.push_back(std::move(e));
}

BuildResult ModelBuilder::finish() {
  if (!finished_) {
    finished_ = true;
    for (const auto& open : machine_stack_)
      diags_.push_back(
          Diagnostic::error("unbalanced-block", "machine '" + open + "' never closed", open));
    // Canonical stage order groups stages by machine (pre-order), keeping
    // declaration order within each machine; matches what reparsing the
    // canonical text form produces.
    {
      std::unordered_map<std::string, size_t> machine_order;
      for (size_t i = 0; i < model_.machines.size(); i++)
        machine_order[model_.machines[i].id] = i;
      std::stable_sort(model_.stages.begin(), model_.stages.end(),
                       [&](const Stage& a, const Stage& b) {
                         auto ia = machine_order.find(a.machine);
                         auto ib = machine_order.find(b.machine);
                         size_t ka = ia == machine_order.end() ? SIZE_MAX : ia->second;
                         size_t kb = ib == machine_order.end() ? SIZE_MAX : ib->second;
                         return ka < kb;
                       });
    }
    model_.rebuild_index();
    // Dangling references: arc endpoints may name stages or machines.
    for (const auto& a : model_.arcs) {
      for (const std::string* end : {&a.source, &a.target}) {
        if (!model_.stage(*end) && !model_.machine(*end))
          diags_.push_back(Diagnostic::error(
              "dangling-reference", "arc '" + a.id + "' references unknown element '" + *end + "'",
              a.id, a.span));
      }
    }
    for (const auto& v : model_.variables) {
      bool in_domain = v.type == VarType::Number
                           ? v.initial.type == VarType::Number
                           : v.initial.type == VarType::Enum &&
                                 std::find(v.enum_values.begin(), v.enum_values.end(),
                                           v.initial.sym) != v.enum_values.end();
      if (!in_domain)
        diags_.push_back(Diagnostic::error(
            "initial-out-of-domain",
            "initial value '" + v.initial.str() + "' outside domain of '" + v.id + "'", v.id,
            v.span));
    }
  }
  BuildResult r;
  r.diagnostics = diags_;
  if (!has_errors(diags_)) r.model = model_;
  return r;
}

}  // namespace thingc
