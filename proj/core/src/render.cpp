#include "thingc/render.hpp"

#include <sstream>
#include <unordered_map>

namespace thingc {

namespace {

// dot identifiers can't carry arbitrary punctuation; quote everything.
std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

struct Overlay {
  std::unordered_map<std::string, size_t> element_event;  // element -> overlay index

  Overlay(const std::vector<EventDef>& events) {
    for (size_t i = 0; i < events.size(); i++)
      for (const auto& el : events[i].region) element_event.emplace(el, i);
  }
  const char* color(const std::string& el) const {
    auto it = element_event.find(el);
    if (it == element_event.end()) return nullptr;
    return kPalette[it->second % (sizeof(kPalette) / sizeof(kPalette[0]))];
  }
};

void emit_machine(std::ostream& out, const Model& m, const Machine& mach,
                  const std::vector<EventDef>& events, const Overlay& ov, int depth) {
  std::string pad(static_cast<size_t>(depth) * 2, ' ');
  out << pad << "subgraph " << quote("cluster_" + mach.id) << " {\n";
  out << pad << "  label=" << quote(mach.name + (mach.is_actor ? " (actor)" : "")) << ";\n";
  for (const auto& s : m.stages) {
    if (s.machine != mach.id) continue;
    std::string label = std::string(to_string(s.kind)) + "\\n" +
                        (s.label.empty() ? s.id : s.label);
    for (const auto& ev : events)
      for (const auto& el : ev.region)
        if (el == s.id) label += "\\n[" + ev.id + "]";
    out << pad << "  " << quote(s.id) << " [shape=box, label=" << quote(label);
    if (const char* c = ov.color(s.id)) out << ", style=filled, fillcolor=" << quote(c);
    out << "];\n";
  }
  for (const auto& sub : m.machines)
    if (sub.parent == mach.id && sub.id != mach.id)
      emit_machine(out, m, sub, events, ov, depth + 1);
  // flows anchored at the machine boundary render as a port dot
  bool anchored = false;
  for (const auto& a : m.arcs)
    if (a.source == mach.id || a.target == mach.id) anchored = true;
  if (anchored) out << pad << "  " << quote(mach.id) << " [shape=point, width=0.15];\n";
  out << pad << "}\n";
}

}  // namespace

std::string render_model_dot(const Model& m, const std::vector<EventDef>& overlay) {
  Overlay ov(overlay);
  std::ostringstream out;
  out << "digraph " << quote(m.name) << " {\n";
  out << "  rankdir=LR;\n";
  out << "  node [fontname=\"Helvetica\"];\n";
  emit_machine(out, m, m.root(), overlay, ov, 1);
  for (const auto& a : m.arcs) {
    out << "  " << quote(a.source) << " -> " << quote(a.target) << " [";
    std::string label;
    if (a.kind == ArcKind::Flow) {
      label = a.thing;
    } else {
      out << "style=dashed, ";
      if (a.guard) label = "if " + to_string(*a.guard);
      for (const auto& act : a.actions) {
        if (!label.empty()) label += "\\n";
        label += to_string(act);
      }
    }
    if (const char* c = ov.color(a.id)) {
      out << "color=" << quote(c) << ", penwidth=2, ";
      for (const auto& ev : overlay)
        for (const auto& el : ev.region)
          if (el == a.id) label += (label.empty() ? "[" : " [") + ev.id + "]";
    }
    out << "label=" << quote(label) << "];\n";
  }
  out << "}\n";
  return out.str();
}

std::string render_behavior_dot(const BehaviorGraph& g) {
  std::ostringstream out;
  out << "digraph behavior {\n";
  out << "  rankdir=LR;\n";
  out << "  node [shape=ellipse, fontname=\"Helvetica\"];\n";
  size_t n = 0;
  for (const auto& [mega, members] : g.composed) {
    out << "  subgraph " << quote("cluster_" + std::to_string(n++)) << " {\n";
    out << "    label=" << quote(mega) << ";\n";
    out << "    " << quote(mega) << " [shape=doubleoctagon];\n";
    out << "  }\n";
  }
  for (const auto& node : g.nodes) {
    if (g.composed.count(node)) continue;
    out << "  " << quote(node) << ";\n";
  }
  for (const auto& e : g.edges) {
    out << "  " << quote(e.from) << " -> " << quote(e.to);
    if (!e.witness.empty()) {
      std::string label;
      for (const auto& w : e.witness) {
        if (!label.empty()) label += ",";
        label += w;
      }
      out << " [label=" << quote(label) << "]";
    }
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

std::string render_use_case_dot(const UseCaseDiagram& d) {
  std::ostringstream out;
  out << "digraph usecase {\n";
  out << "  rankdir=LR;\n";
  for (const auto& a : d.actors)
    out << "  " << quote("actor:" + a) << " [shape=box, label=" << quote(a) << "];\n";
  for (const auto& u : d.use_cases)
    out << "  " << quote("usecase:" + u) << " [shape=ellipse, label=" << quote(u) << "];\n";
  for (const auto& [a, u] : d.associations)
    out << "  " << quote("actor:" + a) << " -> " << quote("usecase:" + u)
        << " [dir=none];\n";
  out << "}\n";
  return out.str();
}

}  // namespace thingc
