#include "thingc/transform.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace thingc {

namespace {

void remap_regions(Model& m, const std::unordered_map<std::string, std::string>& stage_map,
                   const std::unordered_map<std::string, std::string>& arc_map) {
  for (auto& e : m.events) {
    std::vector<std::string> region;
    for (const auto& el : e.region) {
      std::string mapped = el;
      if (auto it = stage_map.find(el); it != stage_map.end()) mapped = it->second;
      if (auto it = arc_map.find(el); it != arc_map.end()) mapped = it->second;
      if (mapped.empty()) continue;
      if (std::find(region.begin(), region.end(), mapped) == region.end())
        region.push_back(mapped);
    }
    e.region = std::move(region);
  }
}

// Arc ids are positional (f1.., t1..); after removing arcs the survivors
// must be renumbered so the canonical text form reparses to the same model.
void renumber_arcs(Model& m) {
  std::unordered_map<std::string, std::string> arc_map;
  int flows = 0, triggers = 0;
  for (auto& a : m.arcs) {
    std::string fresh = a.kind == ArcKind::Flow ? "f" + std::to_string(++flows)
                                                : "t" + std::to_string(++triggers);
    arc_map[a.id] = fresh;
    a.id = fresh;
  }
  remap_regions(m, {}, arc_map);
  m.rebuild_index();
}

}  // namespace

TransformResult simplify_level1(const Model& m) {
  TransformResult result;

  bool any_rt = false;
  for (const auto& s : m.stages)
    if (s.kind == StageKind::Release || s.kind == StageKind::Transfer) any_rt = true;
  if (!any_rt) {
    result.model = m;  // already a fixpoint
    return result;
  }

  struct Chain {
    std::string release;                 // empty for boundary chains
    std::string entry;                   // first Transfer of a boundary chain
    std::vector<std::string> core_arcs;  // R -> T .. -> Receive
    std::vector<std::string> in_arcs;    // flows into R, to be retargeted
    std::string receive;
    std::string pred;  // source of the first in-arc, "" if none
  };
  std::vector<Chain> chains;
  std::unordered_set<std::string> transfers_seen;

  for (const auto& s : m.stages) {
    if (s.kind != StageKind::Release) continue;
    Chain c;
    c.release = s.id;
    auto outs = m.flows_out_of(s.id);
    if (outs.size() != 1) {
      result.diagnostics.push_back(Diagnostic::error(
          "unspliceable-chain",
          "Release '" + s.id + "' must have exactly one outgoing flow", s.id, s.span));
      continue;
    }
    const Arc* cur = outs.front();
    c.core_arcs.push_back(cur->id);
    bool ok = true;
    for (;;) {
      const Stage* t = m.stage(cur->target);
      if (!t) {
        ok = false;
        break;
      }
      if (t->kind == StageKind::Receive) {
        c.receive = t->id;
        break;
      }
      if (t->kind != StageKind::Transfer) {
        ok = false;
        break;
      }
      transfers_seen.insert(t->id);
      auto next = m.flows_out_of(t->id);
      std::vector<const Arc*> same_thing;
      for (const Arc* n : next)
        if (n->thing == cur->thing) same_thing.push_back(n);
      if (same_thing.size() != 1) {
        ok = false;
        break;
      }
      cur = same_thing.front();
      c.core_arcs.push_back(cur->id);
    }
    if (!ok) {
      result.diagnostics.push_back(Diagnostic::error(
          "unspliceable-chain",
          "chain from Release '" + s.id + "' does not end in a Receive stage", s.id, s.span));
      continue;
    }
    for (const Arc* in : m.flows_into(s.id)) c.in_arcs.push_back(in->id);
    if (c.in_arcs.empty()) {
      result.diagnostics.push_back(Diagnostic::error(
          "unspliceable-chain", "Release '" + s.id + "' has no incoming flow to splice", s.id,
          s.span));
      continue;
    }
    c.pred = m.arc(c.in_arcs.front())->source;
    chains.push_back(std::move(c));
  }

  // Boundary chains: a Transfer with no incoming flow is an entry point from
  // the environment; it forwards straight to its Receive and disappears.
  for (const auto& s : m.stages) {
    if (s.kind != StageKind::Transfer || transfers_seen.count(s.id)) continue;
    if (!m.flows_into(s.id).empty()) continue;
    auto outs = m.flows_out_of(s.id);
    if (outs.size() != 1) continue;
    Chain c;
    c.entry = s.id;
    transfers_seen.insert(s.id);
    const Arc* cur = outs.front();
    c.core_arcs.push_back(cur->id);
    bool ok = true;
    for (;;) {
      const Stage* t = m.stage(cur->target);
      if (!t) {
        ok = false;
        break;
      }
      if (t->kind == StageKind::Receive) {
        c.receive = t->id;
        break;
      }
      if (t->kind != StageKind::Transfer) {
        ok = false;
        break;
      }
      transfers_seen.insert(t->id);
      std::vector<const Arc*> same_thing;
      for (const Arc* n : m.flows_out_of(t->id))
        if (n->thing == cur->thing) same_thing.push_back(n);
      if (same_thing.size() != 1) {
        ok = false;
        break;
      }
      cur = same_thing.front();
      c.core_arcs.push_back(cur->id);
    }
    if (!ok) {
      result.diagnostics.push_back(Diagnostic::error(
          "unspliceable-chain",
          "chain from Transfer '" + s.id + "' does not end in a Receive stage", s.id, s.span));
      continue;
    }
    chains.push_back(std::move(c));
  }

  for (const auto& s : m.stages) {
    if (s.kind == StageKind::Transfer && !transfers_seen.count(s.id))
      result.diagnostics.push_back(Diagnostic::error(
          "unspliceable-chain", "Transfer '" + s.id + "' belongs to no Release chain", s.id,
          s.span));
  }
  if (has_errors(result.diagnostics)) return result;

  // removed stage -> (receive it forwards to, predecessor it came from)
  std::unordered_map<std::string, std::string> fwd, back;
  std::unordered_set<std::string> core;
  std::unordered_map<std::string, std::string> arc_map;  // removed arc -> surviving arc
  std::unordered_map<std::string, std::string> retarget;  // in-arc id -> new target
  for (const auto& c : chains) {
    if (!c.release.empty()) {
      fwd[c.release] = c.receive;
      back[c.release] = c.pred;
    }
    if (!c.entry.empty()) fwd[c.entry] = c.receive;
    for (const auto& aid : c.core_arcs) {
      core.insert(aid);
      arc_map[aid] = c.in_arcs.empty() ? c.receive : c.in_arcs.front();
      const Arc* a = m.arc(aid);
      const Stage* t = m.stage(a->target);
      if (t && t->kind == StageKind::Transfer) {
        fwd[t->id] = c.receive;
        back[t->id] = c.pred;
      }
    }
    for (const auto& in : c.in_arcs) retarget[in] = c.receive;
  }

  Model out = m;
  out.stages.erase(std::remove_if(out.stages.begin(), out.stages.end(),
                                  [](const Stage& s) {
                                    return s.kind == StageKind::Release ||
                                           s.kind == StageKind::Transfer;
                                  }),
                   out.stages.end());
  std::vector<Arc> arcs;
  for (const auto& a : m.arcs) {
    if (core.count(a.id)) continue;
    Arc na = a;
    if (auto it = retarget.find(a.id); it != retarget.end()) na.target = it->second;
    if (a.kind == ArcKind::Trigger) {
      if (auto it = fwd.find(a.target); it != fwd.end()) na.target = it->second;
      if (auto it = back.find(a.source); it != back.end()) na.source = it->second;
    }
    arcs.push_back(std::move(na));
  }
  out.arcs = std::move(arcs);

  std::unordered_map<std::string, std::string> stage_map(fwd.begin(), fwd.end());
  remap_regions(out, stage_map, arc_map);
  renumber_arcs(out);
  result.model = std::move(out);
  return result;
}

namespace {

struct Level2 {
  Model m;
  std::vector<Diagnostic>* diags;

  std::vector<const Arc*> incident(const std::string& sid, bool incoming, ArcKind kind) {
    std::vector<const Arc*> out;
    for (const auto& a : m.arcs) {
      const std::string& end = incoming ? a.target : a.source;
      if (a.kind == kind && end == sid) out.push_back(&a);
    }
    return out;
  }

  void drop_stage(const std::string& sid) {
    m.stages.erase(std::remove_if(m.stages.begin(), m.stages.end(),
                                  [&](const Stage& s) { return s.id == sid; }),
                   m.stages.end());
    for (auto& e : m.events)
      e.region.erase(std::remove(e.region.begin(), e.region.end(), sid), e.region.end());
  }

  void drop_arc(const std::string& aid) {
    m.arcs.erase(std::remove_if(m.arcs.begin(), m.arcs.end(),
                                [&](const Arc& a) { return a.id == aid; }),
                 m.arcs.end());
    for (auto& e : m.events)
      e.region.erase(std::remove(e.region.begin(), e.region.end(), aid), e.region.end());
  }

  void anchor(const std::string& arc_id, bool at_source, const std::string& machine_id) {
    for (auto& a : m.arcs) {
      if (a.id != arc_id) continue;
      (at_source ? a.source : a.target) = machine_id;
    }
  }

  // Create recoverable as the start of its outgoing arrows.
  bool try_erase_create(const Stage& s) {
    auto out_flows = incident(s.id, false, ArcKind::Flow);
    auto out_trigs = incident(s.id, false, ArcKind::Trigger);
    auto in_flows = incident(s.id, true, ArcKind::Flow);
    auto in_trigs = incident(s.id, true, ArcKind::Trigger);
    if (!out_trigs.empty() || !in_flows.empty()) return false;
    if (out_flows.empty() && in_trigs.empty()) return false;
    for (const Arc* a : out_flows) anchor(a->id, true, s.machine);
    for (const Arc* a : in_trigs) anchor(a->id, false, s.machine);
    drop_stage(s.id);
    return true;
  }

  // Receive recoverable as the end of its incoming arrows.
  bool try_erase_receive(const Stage& s) {
    auto in_flows = incident(s.id, true, ArcKind::Flow);
    if (in_flows.empty()) return false;
    if (!incident(s.id, false, ArcKind::Flow).empty() ||
        !incident(s.id, false, ArcKind::Trigger).empty() ||
        !incident(s.id, true, ArcKind::Trigger).empty())
      return false;
    for (const Arc* a : in_flows) anchor(a->id, false, s.machine);
    drop_stage(s.id);
    return true;
  }

  // Process recoverable as the start of its triggers.
  bool try_erase_process(const Stage& s) {
    auto out_trigs = incident(s.id, false, ArcKind::Trigger);
    if (out_trigs.empty()) return false;
    if (!incident(s.id, false, ArcKind::Flow).empty() ||
        !incident(s.id, true, ArcKind::Flow).empty() ||
        !incident(s.id, true, ArcKind::Trigger).empty())
      return false;
    for (const Arc* a : out_trigs) anchor(a->id, true, s.machine);
    drop_stage(s.id);
    return true;
  }

  // Receive feeding a Process that only sources triggers: both erasable,
  // the incoming arrow ends at the machine and the triggers start there.
  bool try_erase_receive_process(const Stage& s) {
    if (s.kind != StageKind::Receive) return false;
    auto r_out = incident(s.id, false, ArcKind::Flow);
    if (r_out.size() != 1) return false;
    const Arc* link = r_out.front();
    const Stage* p = m.stage(link->target);
    if (!p || p->kind != StageKind::Process || p->machine != s.machine) return false;
    if (!incident(s.id, false, ArcKind::Trigger).empty() ||
        !incident(s.id, true, ArcKind::Trigger).empty())
      return false;
    auto p_trigs = incident(p->id, false, ArcKind::Trigger);
    if (p_trigs.empty()) return false;
    if (!incident(p->id, false, ArcKind::Flow).empty()) return false;
    if (incident(p->id, true, ArcKind::Flow).size() != 1) return false;
    if (!incident(p->id, true, ArcKind::Trigger).empty()) return false;

    auto in_flows = incident(s.id, true, ArcKind::Flow);
    for (const Arc* a : in_flows) anchor(a->id, false, s.machine);
    for (const Arc* a : p_trigs) anchor(a->id, true, s.machine);
    std::string pid = p->id, link_id = link->id, sid = s.id;
    drop_arc(link_id);
    drop_stage(sid);
    drop_stage(pid);
    return true;
  }

  bool pass() {
    m.rebuild_index();  // rules mutate stages/arcs directly
    for (const auto& s : m.stages) {
      Stage copy = s;  // rules mutate the stage vector
      switch (copy.kind) {
        case StageKind::Create:
          if (try_erase_create(copy)) return true;
          break;
        case StageKind::Receive:
          if (try_erase_receive(copy) || try_erase_receive_process(copy)) return true;
          break;
        case StageKind::Process:
          if (try_erase_process(copy)) return true;
          break;
        default:
          break;
      }
    }
    return false;
  }

  void run() {
    while (pass()) {
    }
    // Arrows that collapsed onto a single machine are internal detail.
    m.rebuild_index();
    std::vector<std::string> self_loops;
    for (const auto& a : m.arcs)
      if (m.machine(a.source) && a.source == a.target) self_loops.push_back(a.id);
    for (const auto& aid : self_loops) drop_arc(aid);

    for (const auto& s : m.stages)
      diags->push_back(Diagnostic::warning(
          "level2-retained",
          std::string(to_string(s.kind)) + " stage '" + s.id +
              "' is not recoverable from arrow endpoints and was retained",
          s.id, s.span));

    m.events.erase(std::remove_if(m.events.begin(), m.events.end(),
                                  [](const EventDef& e) { return e.region.empty(); }),
                   m.events.end());
    m.rebuild_index();
  }
};

}  // namespace

TransformResult simplify_level2(const Model& m) {
  TransformResult l1 = simplify_level1(m);
  if (!l1.model) return l1;

  TransformResult result;
  result.diagnostics = std::move(l1.diagnostics);
  Level2 lvl{std::move(*l1.model), &result.diagnostics};
  lvl.run();
  renumber_arcs(lvl.m);
  result.model = std::move(lvl.m);
  return result;
}

UseCaseResult reduce_to_use_case(const Model& m) {
  UseCaseResult result;

  std::vector<const Machine*> actor_machines;
  for (const auto& mm : m.machines)
    if (mm.is_actor) actor_machines.push_back(&mm);
  if (actor_machines.empty()) {
    result.diagnostics.push_back(
        Diagnostic::error("no-actors", "no machine is marked as an actor", m.name));
    return result;
  }

  // Use cases: usecase-tagged machines when any exist, else top-level
  // non-actor machines.
  struct Group {
    std::string name;
    std::vector<const Machine*> machines;
  };
  std::vector<Group> groups;
  auto add_to_group = [&](const std::string& name, const Machine* mm) {
    for (auto& g : groups)
      if (g.name == name) {
        g.machines.push_back(mm);
        return;
      }
    groups.push_back({name, {mm}});
  };
  bool any_tag = false;
  for (const auto& mm : m.machines)
    if (!mm.usecase.empty()) any_tag = true;
  if (any_tag) {
    for (const auto& mm : m.machines)
      if (!mm.usecase.empty()) add_to_group(mm.usecase, &mm);
  } else {
    const std::string root_id = m.root().id;
    for (const auto& mm : m.machines)
      if (mm.parent == root_id && !mm.is_actor) add_to_group(mm.name, &mm);
  }

  auto rel = flow_relation(m);
  auto connected = [&](const Machine& a, const Group& g) {
    auto in_actor = [&](const std::string& mid) { return m.within(mid, a.id); };
    auto in_group = [&](const std::string& mid) {
      for (const Machine* gm : g.machines)
        if (m.within(mid, gm->id)) return true;
      return false;
    };
    for (const auto& t : rel) {
      if (in_actor(t.source_machine) && in_group(t.target_machine)) return true;
      if (in_group(t.source_machine) && in_actor(t.target_machine)) return true;
    }
    for (const auto& arc : m.arcs) {
      if (arc.kind != ArcKind::Trigger) continue;
      std::string src = m.owner_machine(arc.source);
      std::string dst = m.owner_machine(arc.target);
      if ((in_actor(src) && in_group(dst)) || (in_group(src) && in_actor(dst))) return true;
    }
    return false;
  };

  UseCaseDiagram d;
  for (const Machine* a : actor_machines) d.actors.push_back(a->name);
  for (const auto& g : groups) d.use_cases.push_back(g.name);
  for (const Machine* a : actor_machines)
    for (const auto& g : groups)
      if (connected(*a, g)) d.associations.emplace_back(a->name, g.name);
  result.diagram = std::move(d);
  return result;
}

}  // namespace thingc
