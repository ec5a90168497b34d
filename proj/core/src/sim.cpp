#include "thingc/sim.hpp"

#include <algorithm>
#include <climits>
#include <deque>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace thingc {

const char* to_string(StepKind k) {
  switch (k) {
    case StepKind::Move: return "move";
    case StepKind::Trigger: return "trigger";
    case StepKind::Assign: return "assign";
    case StepKind::Create: return "create";
    case StepKind::Consume: return "consume";
  }
  return "?";
}

ScenarioResult load_scenario(const std::string& text, const Model& m,
                             const std::string& filename) {
  ScenarioResult result;
  Scenario sc;
  bool have_horizon = false;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  auto err = [&](const std::string& code, const std::string& msg) {
    result.diagnostics.push_back(
        Diagnostic::error(code, msg, "", SourceSpan{filename, lineno, 1}));
  };
  while (std::getline(in, raw)) {
    lineno++;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream line(raw);
    std::string word;
    if (!(line >> word)) continue;
    if (word == "scenario") {
      if (!(line >> sc.name)) err("syntax-error", "expected scenario name");
    } else if (word == "horizon") {
      if (!(line >> sc.horizon) || sc.horizon < 0) {
        err("syntax-error", "expected non-negative horizon");
      } else {
        have_horizon = true;
      }
    } else if (word == "at") {
      Injection inj;
      std::string kw_inject, kw_into;
      if (!(line >> inj.tick >> kw_inject >> inj.thing >> kw_into >> inj.stage) ||
          kw_inject != "inject" || kw_into != "into" || inj.tick < 0) {
        err("syntax-error", "expected 'at <tick> inject <thing> into <stage>'");
        continue;
      }
      const Stage* s = m.stage(inj.stage);
      if (!s) {
        err("unknown-stage", "injection targets unknown stage '" + inj.stage + "'");
        continue;
      }
      if (s->kind != StageKind::Transfer) {
        err("inject-not-transfer",
            "injection target '" + inj.stage + "' is not a Transfer stage");
        continue;
      }
      sc.injections.push_back(std::move(inj));
    } else {
      err("syntax-error", "unknown directive '" + word + "'");
    }
    std::string extra;
    if (line >> extra) err("syntax-error", "trailing text '" + extra + "'");
  }
  if (!have_horizon) {
    lineno = 1;
    err("syntax-error", "scenario is missing a horizon");
  }
  if (!has_errors(result.diagnostics)) result.scenario = std::move(sc);
  return result;
}

namespace {

struct Token {
  std::string instance;
  std::string thing;
  std::string stage;
  bool alive = true;
};

// Thing name for instances minted at a Create stage: the single thing its
// outgoing flows carry, else the stage label, else the stage id.
std::string minted_thing(const Model& m, const Stage& s) {
  std::string thing;
  for (const Arc* a : m.flows_out_of(s.id)) {
    if (thing.empty()) thing = a->thing;
    else if (thing != a->thing) return s.label.empty() ? s.id : s.label;
  }
  if (!thing.empty()) return thing;
  return s.label.empty() ? s.id : s.label;
}

}  // namespace

SimResult simulate(const Model& m, const Scenario& sc, const SimOptions& opts) {
  SimResult result;
  Trace trace;
  std::unordered_map<std::string, Value> vars;
  for (const auto& v : m.variables) vars[v.id] = v.initial;
  std::vector<Token> tokens;
  std::map<std::string, long long> thing_counts;
  auto new_instance = [&](const std::string& thing) {
    return thing + "#" + std::to_string(++thing_counts[thing]);
  };
  auto fail = [&](const std::string& code, const std::string& msg, const std::string& about) {
    result.diagnostics.push_back(Diagnostic::error(code, msg, about));
  };

  std::unordered_map<std::string, std::vector<const Arc*>> triggers;
  for (const auto& a : m.arcs)
    if (a.kind == ArcKind::Trigger) triggers[a.source].push_back(&a);

  for (long long tick = 0; tick < sc.horizon; tick++) {
    std::deque<const Stage*> sweep;
    std::unordered_set<std::string> activated;
    auto activate = [&](const std::string& stage_id) {
      const Stage* s = m.stage(stage_id);
      if (!s || activated.count(stage_id)) return;
      activated.insert(stage_id);
      sweep.push_back(s);
    };

    // Phase 1: every pre-existing token advances one hop along the unique
    // outgoing flow for its thing; stranded tokens retire.
    size_t live_before = tokens.size();
    for (size_t i = 0; i < live_before; i++) {
      Token& tok = tokens[i];
      if (!tok.alive) continue;
      std::vector<const Arc*> hops;
      for (const Arc* a : m.flows_out_of(tok.stage))
        if (a->thing == tok.thing) hops.push_back(a);
      if (hops.size() > 1) {
        fail("nondeterministic-routing",
             "token '" + tok.instance + "' at '" + tok.stage + "' has " +
                 std::to_string(hops.size()) + " outgoing flows",
             tok.stage);
        return result;
      }
      if (hops.empty()) {
        trace.steps.push_back({tick, StepKind::Consume, "", tok.stage, "", tok.instance,
                               tok.thing, "", {}});
        tok.alive = false;
        continue;
      }
      const Arc* hop = hops.front();
      trace.steps.push_back({tick, StepKind::Move, hop->id, hop->target, tok.stage,
                             tok.instance, tok.thing, "", {}});
      tok.stage = hop->target;
      activate(hop->target);
    }

    // Phase 2: scheduled injections land (they move starting next tick).
    for (const auto& inj : sc.injections) {
      if (inj.tick != tick) continue;
      Token tok{new_instance(inj.thing), inj.thing, inj.stage};
      trace.steps.push_back({tick, StepKind::Create, "", tok.stage, "", tok.instance,
                             tok.thing, "", {}});
      activate(inj.stage);
      tokens.push_back(std::move(tok));
    }

    // Phase 3: trigger sweep. A stage activates at most once per tick; its
    // guards all read the variable state as it was when the stage came up,
    // so sibling triggers act as exclusive branches.
    long long steps_this_tick = 0;
    while (!sweep.empty()) {
      const Stage* s = sweep.front();
      sweep.pop_front();
      auto it = triggers.find(s->id);
      if (it == triggers.end()) continue;
      std::unordered_map<std::string, Value> snapshot = vars;
      EvalContext guard_ctx{&snapshot, tick};
      EvalContext action_ctx{&vars, tick};
      for (const Arc* t : it->second) {
        if (t->guard && !eval(*t->guard, guard_ctx).truthy()) continue;
        trace.steps.push_back({tick, StepKind::Trigger, t->id, t->target, s->id, "", "",
                               "", {}});
        for (const auto& act : t->actions) {
          Value v = eval(*act.value, action_ctx);
          const StateVar* var = m.variable(act.var);
          if (var && var->type == VarType::Enum &&
              (v.type != VarType::Enum ||
               std::find(var->enum_values.begin(), var->enum_values.end(), v.sym) ==
                   var->enum_values.end())) {
            fail("assign-out-of-domain",
                 "value '" + v.str() + "' outside domain of '" + act.var + "'", t->id);
            return result;
          }
          vars[act.var] = v;
          trace.steps.push_back({tick, StepKind::Assign, t->id, "", s->id, "", "", act.var,
                                 std::move(v)});
        }
        const Stage* target = m.stage(t->target);
        if (target && !activated.count(target->id)) {
          if (target->kind == StageKind::Create) {
            Token tok{new_instance(minted_thing(m, *target)), minted_thing(m, *target),
                      target->id};
            trace.steps.push_back({tick, StepKind::Create, "", target->id, "", tok.instance,
                                   tok.thing, "", {}});
            tokens.push_back(std::move(tok));
          }
          activate(target->id);
        }
        if (++steps_this_tick > opts.max_steps_per_tick) {
          fail("divergence", "trigger cascade exceeded " +
                                 std::to_string(opts.max_steps_per_tick) + " steps in one tick",
               s->id);
          return result;
        }
      }
    }

    std::erase_if(tokens, [](const Token& t) { return !t.alive; });
  }

  for (auto& [name, value] : vars) trace.final_variables[name] = std::move(value);
  for (const auto& tok : tokens)
    trace.final_tokens.push_back({tok.instance, tok.thing, tok.stage});
  result.trace = std::move(trace);
  return result;
}

OccurrenceResult trace_to_events(const Model& m, const Trace& t,
                                 const std::vector<EventDef>& events) {
  OccurrenceResult result;

  // elements touched by a step: moves and triggers touch the arc and both
  // endpoints; assigns belong to their trigger arc; create/consume touch
  // the stage.
  auto touched = [](const TraceStep& s) {
    std::vector<std::string> out;
    switch (s.kind) {
      case StepKind::Move:
      case StepKind::Trigger:
        out = {s.arc, s.source, s.stage};
        break;
      case StepKind::Assign: out = {s.arc}; break;
      case StepKind::Create:
      case StepKind::Consume: out = {s.stage}; break;
    }
    return out;
  };

  std::vector<std::vector<long long>> active_ticks(events.size());
  std::vector<std::unordered_set<std::string>> regions(events.size());
  for (size_t i = 0; i < events.size(); i++)
    regions[i].insert(events[i].region.begin(), events[i].region.end());
  for (const auto& step : t.steps) {
    for (const auto& el : touched(step)) {
      for (size_t i = 0; i < events.size(); i++) {
        if (!regions[i].count(el)) continue;
        if (active_ticks[i].empty() || active_ticks[i].back() != step.tick)
          active_ticks[i].push_back(step.tick);
      }
    }
  }

  for (size_t i = 0; i < events.size(); i++) {
    const auto& ticks = active_ticks[i];
    for (size_t k = 0; k < ticks.size();) {
      size_t j = k;
      while (j + 1 < ticks.size() && ticks[j + 1] == ticks[j] + 1) j++;
      result.occurrences.push_back({events[i].id, ticks[k], ticks[j]});
      k = j + 1;
    }
  }
  std::unordered_map<std::string, size_t> decl_ix;
  for (size_t i = 0; i < events.size(); i++) decl_ix[events[i].id] = i;
  std::stable_sort(result.occurrences.begin(), result.occurrences.end(),
                   [&](const EventOccurrence& a, const EventOccurrence& b) {
                     if (a.start != b.start) return a.start < b.start;
                     return decl_ix[a.event] < decl_ix[b.event];
                   });

  // A precedence edge (A, B) is violated only when everything B did finished
  // before anything A did; partial overlap and cycles are fine.
  BehaviorGraph g = build_behavior(m, events);
  for (const auto& e : g.edges) {
    long long a_min = LLONG_MAX, b_max = LLONG_MIN;
    bool a_seen = false, b_seen = false;
    for (const auto& occ : result.occurrences) {
      if (occ.event == e.from) {
        a_seen = true;
        a_min = std::min(a_min, occ.start);
      }
      if (occ.event == e.to) {
        b_seen = true;
        b_max = std::max(b_max, occ.end);
      }
    }
    if (a_seen && b_seen && b_max < a_min) {
      result.diagnostics.push_back(Diagnostic::warning(
          "order-violation",
          "event '" + e.to + "' completed before its predecessor '" + e.from + "' began",
          e.to));
    }
  }
  return result;
}

}  // namespace thingc
