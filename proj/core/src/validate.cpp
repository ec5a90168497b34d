#include "thingc/validate.hpp"

#include <algorithm>

namespace thingc {

bool flow_hop_legal(StageKind src, StageKind dst, bool crossing, FlowTable table) {
  using K = StageKind;
  if (table == FlowTable::Full) {
    if (crossing) return src == K::Transfer && dst == K::Transfer;
    switch (src) {
      case K::Transfer: return dst == K::Receive;
      case K::Receive: return dst == K::Process || dst == K::Release;
      case K::Process: return dst == K::Release;
      case K::Create: return dst == K::Process || dst == K::Release;
      case K::Release: return dst == K::Transfer;
    }
    return false;
  }
  // Level 1: Release/Transfer rows gone; spliced chains land directly on
  // Receive from the old Release predecessors, possibly across machines.
  if (dst == K::Receive)
    return src == K::Create || src == K::Process || src == K::Receive;
  if (crossing) return false;
  if (dst == K::Process) return src == K::Create || src == K::Receive;
  return false;
}

bool trigger_source_legal(StageKind src) {
  return src == StageKind::Process || src == StageKind::Create;
}

std::vector<Diagnostic> validate_model(const Model& m, const ValidateOptions& opts) {
  std::vector<Diagnostic> diags;

  auto known_symbols = [&] {
    std::vector<std::string> syms;
    for (const auto& v : m.variables) {
      syms.push_back(v.id);
      for (const auto& e : v.enum_values) syms.push_back(e);
    }
    return syms;
  }();

  for (const auto& a : m.arcs) {
    const Stage* src = m.stage(a.source);
    const Stage* dst = m.stage(a.target);
    bool src_is_machine = !src && m.machine(a.source);
    bool dst_is_machine = !dst && m.machine(a.target);
    if ((!src && !src_is_machine) || (!dst && !dst_is_machine)) {
      diags.push_back(Diagnostic::error("dangling-reference",
                                        "arc '" + a.id + "' has an unknown endpoint", a.id,
                                        a.span));
      continue;
    }

    if (a.kind == ArcKind::Flow) {
      if (a.thing.empty()) {
        diags.push_back(Diagnostic::error("flow-missing-thing",
                                          "flow arc '" + a.id + "' has no thing name", a.id,
                                          a.span));
      }
      if (a.guard || !a.actions.empty()) {
        diags.push_back(Diagnostic::error(
            "flow-with-trigger-payload", "flow arc '" + a.id + "' carries guard or actions",
            a.id, a.span));
      }
      // Machine-anchored endpoints (simplified models) have no stage kind
      // to check.
      if (src && dst) {
        bool crossing = src->machine != dst->machine;
        if (!flow_hop_legal(src->kind, dst->kind, crossing, opts.table)) {
          diags.push_back(Diagnostic::error(
              "illegal-flow-hop",
              std::string("flow '") + a.id + "' " + to_string(src->kind) + " -> " +
                  to_string(dst->kind) + (crossing ? " across machines" : "") + " is not legal",
              a.id, a.span));
        }
      }
    } else {
      if (!a.thing.empty()) {
        diags.push_back(Diagnostic::error("trigger-with-thing",
                                          "trigger arc '" + a.id + "' carries a thing name",
                                          a.id, a.span));
      }
      if (src && !trigger_source_legal(src->kind)) {
        auto sev = opts.lax ? Severity::Warning : Severity::Error;
        diags.push_back({sev, "illegal-trigger-source",
                         std::string("trigger '") + a.id + "' sourced at a " +
                             to_string(src->kind) + " stage",
                         a.id, a.span});
      }
      // Guard/action identifiers must be declared variables or enum values.
      std::vector<std::string> idents;
      if (a.guard) collect_idents(*a.guard, idents);
      for (const auto& act : a.actions) {
        if (!m.variable(act.var))
          diags.push_back(Diagnostic::error(
              "unknown-variable", "action on '" + a.id + "' assigns unknown variable '" +
                                      act.var + "'",
              a.id, a.span));
        collect_idents(*act.value, idents);
      }
      for (const auto& id : idents) {
        if (std::find(known_symbols.begin(), known_symbols.end(), id) == known_symbols.end())
          diags.push_back(Diagnostic::error(
              "unknown-variable",
              "identifier '" + id + "' in '" + a.id + "' is neither a variable nor an enum value",
              a.id, a.span));
      }
    }
  }

  return diags;
}

std::vector<FlowTuple> flow_relation(const Model& m) {
  // Crossing arcs, chained through Transfer stages, collapse to one tuple
  // per maximal chain.
  auto owner = [&](const std::string& endpoint) { return m.owner_machine(endpoint); };
  auto crossing = [&](const Arc& a) {
    return a.kind == ArcKind::Flow && owner(a.source) != owner(a.target);
  };

  // next crossing arc continuing a chain: target is a Transfer whose single
  // outgoing flow for the same thing crosses again.
  auto continuation = [&](const Arc& a) -> const Arc* {
    const Stage* t = m.stage(a.target);
    if (!t || t->kind != StageKind::Transfer) return nullptr;
    for (const Arc* next : m.flows_out_of(t->id))
      if (next->thing == a.thing && crossing(*next)) return next;
    return nullptr;
  };
  auto continues_some_chain = [&](const Arc& a) {
    const Stage* s = m.stage(a.source);
    if (!s || s->kind != StageKind::Transfer) return false;
    for (const Arc* prev : m.flows_into(s->id))
      if (prev->thing == a.thing && crossing(*prev)) return true;
    return false;
  };

  std::vector<FlowTuple> rel;
  for (const auto& a : m.arcs) {
    if (!crossing(a) || continues_some_chain(a)) continue;
    const Arc* last = &a;
    while (const Arc* next = continuation(*last)) last = next;
    FlowTuple t{owner(a.source), a.thing, owner(last->target)};
    if (std::find(rel.begin(), rel.end(), t) == rel.end()) rel.push_back(t);
  }
  return rel;
}

}  // namespace thingc
