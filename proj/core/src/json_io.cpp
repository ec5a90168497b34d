#include "thingc/json_io.hpp"

#include <sstream>

namespace thingc {

using json = nlohmann::ordered_json;

namespace {

json value_to_json(const Value& v) {
  if (v.type == VarType::Number) return v.num;
  return v.sym;
}

Value value_from_json(const nlohmann::json& j) {
  if (j.is_number()) return Value::number(j.get<double>());
  return Value::symbol(j.get<std::string>());
}

}  // namespace

json model_to_json(const Model& m) {
  json j;
  j["tm_schema"] = kSchemaVersion;
  j["kind"] = "model";
  j["name"] = m.name;
  j["machines"] = json::array();
  for (const auto& mach : m.machines) {
    json jm;
    jm["id"] = mach.id;
    jm["name"] = mach.name;
    jm["parent"] = mach.parent;
    if (mach.is_actor) jm["actor"] = true;
    if (!mach.usecase.empty()) jm["usecase"] = mach.usecase;
    j["machines"].push_back(std::move(jm));
  }
  j["variables"] = json::array();
  for (const auto& v : m.variables) {
    json jv;
    jv["id"] = v.id;
    jv["type"] = v.type == VarType::Number ? "number" : "enum";
    if (v.type == VarType::Enum) jv["values"] = v.enum_values;
    jv["initial"] = value_to_json(v.initial);
    j["variables"].push_back(std::move(jv));
  }
  j["stages"] = json::array();
  for (const auto& s : m.stages) {
    json js;
    js["id"] = s.id;
    js["stage_kind"] = to_string(s.kind);
    js["machine"] = s.machine;
    if (!s.label.empty()) js["label"] = s.label;
    j["stages"].push_back(std::move(js));
  }
  j["arcs"] = json::array();
  for (const auto& a : m.arcs) {
    json ja;
    ja["id"] = a.id;
    ja["arc_kind"] = a.kind == ArcKind::Flow ? "flow" : "trigger";
    ja["source"] = a.source;
    ja["target"] = a.target;
    if (!a.thing.empty()) ja["thing"] = a.thing;
    if (a.guard) ja["guard"] = to_string(a.guard);
    if (!a.actions.empty()) {
      ja["actions"] = json::array();
      for (const auto& act : a.actions)
        ja["actions"].push_back({{"var", act.var}, {"expr", to_string(act.value)}});
    }
    j["arcs"].push_back(std::move(ja));
  }
  j["events"] = events_to_json(m.events)["events"];
  return j;
}

json events_to_json(const std::vector<EventDef>& events) {
  json j;
  j["tm_schema"] = kSchemaVersion;
  j["kind"] = "events";
  j["events"] = json::array();
  for (const auto& e : events) {
    json je;
    je["id"] = e.id;
    je["name"] = e.name;
    je["region"] = e.region;
    if (!e.time.empty()) je["time"] = e.time;
    j["events"].push_back(std::move(je));
  }
  return j;
}

json behavior_to_json(const BehaviorGraph& g) {
  json j;
  j["tm_schema"] = kSchemaVersion;
  j["kind"] = "behavior";
  j["nodes"] = g.nodes;
  j["edges"] = json::array();
  for (const auto& e : g.edges)
    j["edges"].push_back({{"from", e.from}, {"to", e.to}, {"witness", e.witness}});
  j["composed"] = json::object();
  for (const auto& [mega, members] : g.composed) j["composed"][mega] = members;
  return j;
}

json use_case_to_json(const UseCaseDiagram& d) {
  json j;
  j["tm_schema"] = kSchemaVersion;
  j["kind"] = "use_case";
  j["actors"] = d.actors;
  j["use_cases"] = d.use_cases;
  j["associations"] = json::array();
  for (const auto& [actor, uc] : d.associations)
    j["associations"].push_back({{"actor", actor}, {"use_case", uc}});
  return j;
}

json flow_relation_to_json(const std::vector<FlowTuple>& rel) {
  json j;
  j["tm_schema"] = kSchemaVersion;
  j["kind"] = "flow_relation";
  j["tuples"] = json::array();
  for (const auto& t : rel)
    j["tuples"].push_back(
        {{"source", t.source_machine}, {"thing", t.thing}, {"target", t.target_machine}});
  return j;
}

json diagnostics_to_json(const std::vector<Diagnostic>& diags) {
  json j;
  j["tm_schema"] = kSchemaVersion;
  j["kind"] = "diagnostics";
  j["items"] = json::array();
  for (const auto& d : diags) {
    json jd;
    jd["severity"] = d.severity == Severity::Error ? "error" : "warning";
    jd["code"] = d.code;
    jd["message"] = d.message;
    if (!d.location.empty()) jd["location"] = d.location;
    if (d.span.known()) {
      jd["file"] = d.span.file;
      jd["line"] = d.span.line;
    }
    j["items"].push_back(std::move(jd));
  }
  return j;
}

json occurrences_to_json(const std::vector<EventOccurrence>& occ) {
  json j;
  j["tm_schema"] = kSchemaVersion;
  j["kind"] = "occurrences";
  j["occurrences"] = json::array();
  for (const auto& o : occ)
    j["occurrences"].push_back({{"event", o.event}, {"start", o.start}, {"end", o.end}});
  return j;
}

std::string trace_to_jsonl(const Trace& t) {
  std::ostringstream out;
  for (const auto& s : t.steps) {
    json j;
    j["tick"] = s.tick;
    j["step"] = to_string(s.kind);
    switch (s.kind) {
      case StepKind::Move:
        j["arc"] = s.arc;
        j["from"] = s.source;
        j["to"] = s.stage;
        j["instance"] = s.instance;
        j["thing"] = s.thing;
        break;
      case StepKind::Trigger:
        j["arc"] = s.arc;
        j["from"] = s.source;
        j["to"] = s.stage;
        break;
      case StepKind::Assign:
        j["arc"] = s.arc;
        j["var"] = s.var;
        j["value"] = value_to_json(s.value);
        break;
      case StepKind::Create:
      case StepKind::Consume:
        j["stage"] = s.stage;
        j["instance"] = s.instance;
        j["thing"] = s.thing;
        break;
    }
    out << j.dump() << "\n";
  }
  json fin;
  fin["final_state"] = json::object();
  fin["final_state"]["variables"] = json::object();
  for (const auto& [name, v] : t.final_variables)
    fin["final_state"]["variables"][name] = value_to_json(v);
  fin["final_state"]["tokens"] = json::array();
  for (const auto& tok : t.final_tokens)
    fin["final_state"]["tokens"].push_back(
        {{"instance", tok.instance}, {"thing", tok.thing}, {"stage", tok.stage}});
  out << fin.dump() << "\n";
  return out.str();
}

ModelImportResult model_from_json(const nlohmann::json& j) {
  ModelImportResult result;
  auto fail = [&](const std::string& msg) {
    result.diagnostics.push_back(Diagnostic::error("json-schema", msg, ""));
  };
  try {
    if (!j.is_object() || j.value("kind", "") != "model") {
      fail("expected a model export object");
      return result;
    }
    if (j.value("tm_schema", 0) != kSchemaVersion) {
      fail("unsupported tm_schema version");
      return result;
    }
    Model m;
    m.name = j.at("name").get<std::string>();
    for (const auto& jm : j.value("machines", nlohmann::json::array())) {
      Machine mach;
      mach.id = jm.at("id").get<std::string>();
      mach.name = jm.value("name", mach.id);
      mach.parent = jm.value("parent", "");
      mach.is_actor = jm.value("actor", false);
      mach.usecase = jm.value("usecase", "");
      m.machines.push_back(std::move(mach));
    }
    if (m.machines.empty()) {
      fail("model has no machines");
      return result;
    }
    for (const auto& jv : j.value("variables", nlohmann::json::array())) {
      StateVar v;
      v.id = jv.at("id").get<std::string>();
      std::string type = jv.at("type").get<std::string>();
      if (type == "number") {
        v.type = VarType::Number;
      } else if (type == "enum") {
        v.type = VarType::Enum;
        v.enum_values = jv.at("values").get<std::vector<std::string>>();
      } else {
        fail("unknown variable type '" + type + "'");
        return result;
      }
      v.initial = value_from_json(jv.at("initial"));
      m.variables.push_back(std::move(v));
    }
    for (const auto& js : j.value("stages", nlohmann::json::array())) {
      Stage s;
      s.id = js.at("id").get<std::string>();
      auto kind = stage_kind_from_string(js.at("stage_kind").get<std::string>());
      if (!kind) {
        fail("unknown stage kind in stage '" + s.id + "'");
        return result;
      }
      s.kind = *kind;
      s.machine = js.at("machine").get<std::string>();
      s.label = js.value("label", "");
      m.stages.push_back(std::move(s));
    }
    for (const auto& ja : j.value("arcs", nlohmann::json::array())) {
      Arc a;
      a.id = ja.at("id").get<std::string>();
      std::string kind = ja.at("arc_kind").get<std::string>();
      if (kind == "flow") a.kind = ArcKind::Flow;
      else if (kind == "trigger") a.kind = ArcKind::Trigger;
      else {
        fail("unknown arc kind in arc '" + a.id + "'");
        return result;
      }
      a.source = ja.at("source").get<std::string>();
      a.target = ja.at("target").get<std::string>();
      a.thing = ja.value("thing", "");
      if (ja.contains("guard")) {
        std::string err;
        a.guard = parse_expr(ja["guard"].get<std::string>(), err);
        if (!a.guard) {
          fail("bad guard on arc '" + a.id + "': " + err);
          return result;
        }
      }
      for (const auto& jact : ja.value("actions", nlohmann::json::array())) {
        Action act;
        act.var = jact.at("var").get<std::string>();
        std::string err;
        act.value = parse_expr(jact.at("expr").get<std::string>(), err);
        if (!act.value) {
          fail("bad action on arc '" + a.id + "': " + err);
          return result;
        }
        a.actions.push_back(std::move(act));
      }
      m.arcs.push_back(std::move(a));
    }
    for (const auto& je : j.value("events", nlohmann::json::array())) {
      EventDef e;
      e.id = je.at("id").get<std::string>();
      e.name = je.value("name", "");
      e.region = je.at("region").get<std::vector<std::string>>();
      e.time = je.value("time", "");
      m.events.push_back(std::move(e));
    }
    m.rebuild_index();
    result.model = std::move(m);
  } catch (const nlohmann::json::exception& e) {
    fail(e.what());
  }
  return result;
}

BehaviorGraph behavior_from_json(const nlohmann::json& j) {
  BehaviorGraph g;
  g.nodes = j.value("nodes", std::vector<std::string>{});
  for (const auto& je : j.value("edges", nlohmann::json::array())) {
    BehaviorEdge e;
    e.from = je.at("from").get<std::string>();
    e.to = je.at("to").get<std::string>();
    e.witness = je.value("witness", std::vector<std::string>{});
    g.edges.push_back(std::move(e));
  }
  if (j.contains("composed"))
    for (auto it = j["composed"].begin(); it != j["composed"].end(); ++it)
      g.composed[it.key()] = it.value().get<std::vector<std::string>>();
  return g;
}

}  // namespace thingc
