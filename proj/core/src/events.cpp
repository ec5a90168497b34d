#include "thingc/events.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace thingc {

namespace {

struct UnionFind {
  std::vector<size_t> parent;
  explicit UnionFind(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  size_t find(size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(size_t a, size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

std::vector<Diagnostic> check_region(const Model& m, const EventDef& e) {
  std::vector<Diagnostic> diags;
  if (e.region.empty()) {
    diags.push_back(
        Diagnostic::error("region-empty", "event '" + e.id + "' has an empty region", e.id,
                          e.span));
    return diags;
  }

  std::unordered_map<std::string, size_t> index;
  bool dangling = false;
  for (size_t i = 0; i < e.region.size(); i++) {
    const auto& el = e.region[i];
    if (!m.stage(el) && !m.arc(el)) {
      diags.push_back(Diagnostic::error(
          "region-dangling", "event '" + e.id + "' references unknown element '" + el + "'",
          e.id, e.span));
      dangling = true;
      continue;
    }
    index[el] = i;
  }
  if (dangling) return diags;

  // Weak connectivity: an arc touches its endpoint stages; arcs sharing an
  // endpoint touch each other; stages joined by any model arc touch.
  UnionFind uf(e.region.size());
  auto in_region = [&](const std::string& id) { return index.count(id) != 0; };
  for (const auto& el : e.region) {
    const Arc* a = m.arc(el);
    if (!a) continue;
    if (in_region(a->source)) uf.unite(index[el], index[a->source]);
    if (in_region(a->target)) uf.unite(index[el], index[a->target]);
    for (const auto& other : e.region) {
      const Arc* b = m.arc(other);
      if (!b || b->id == a->id) continue;
      if (a->source == b->source || a->source == b->target || a->target == b->source ||
          a->target == b->target)
        uf.unite(index[el], index[other]);
    }
  }
  for (const auto& a : m.arcs)
    if (in_region(a.source) && in_region(a.target)) uf.unite(index[a.source], index[a.target]);

  size_t root = uf.find(0);
  for (size_t i = 1; i < e.region.size(); i++) {
    if (uf.find(i) != root) {
      diags.push_back(Diagnostic::error(
          "region-disconnected", "event '" + e.id + "' region is not weakly connected", e.id,
          e.span));
      break;
    }
  }

  for (const auto& other : m.events) {
    if (other.id == e.id) continue;
    for (const auto& el : other.region) {
      if (index.count(el)) {
        diags.push_back(Diagnostic::warning(
            "region-overlap",
            "event '" + e.id + "' shares element '" + el + "' with event '" + other.id + "'",
            e.id, e.span));
        break;
      }
    }
  }
  return diags;
}

bool BehaviorGraph::has_edge(const std::string& from, const std::string& to) const {
  for (const auto& e : edges)
    if (e.from == from && e.to == to) return true;
  return false;
}

bool BehaviorGraph::reaches(const std::string& from, const std::string& to) const {
  if (from == to) return true;
  std::deque<std::string> work{from};
  std::unordered_set<std::string> seen{from};
  while (!work.empty()) {
    std::string cur = work.front();
    work.pop_front();
    for (const auto& e : edges) {
      if (e.from != cur || seen.count(e.to)) continue;
      if (e.to == to) return true;
      seen.insert(e.to);
      work.push_back(e.to);
    }
  }
  return false;
}

BehaviorGraph build_behavior(const Model& m, const std::vector<EventDef>& events) {
  BehaviorGraph g;
  std::unordered_map<std::string, size_t> event_ix;
  std::unordered_map<std::string, std::vector<size_t>> stage_regions, arc_regions;
  for (size_t i = 0; i < events.size(); i++) {
    g.nodes.push_back(events[i].id);
    event_ix[events[i].id] = i;
    for (const auto& el : events[i].region) {
      if (m.stage(el)) stage_regions[el].push_back(i);
      else if (m.arc(el)) arc_regions[el].push_back(i);
    }
  }

  // (from, to) -> witness; first witness found wins.
  std::map<std::pair<size_t, size_t>, std::vector<std::string>> found;
  auto add = [&](size_t from, size_t to, std::vector<std::string> witness) {
    if (from == to) return;
    found.emplace(std::make_pair(from, to), std::move(witness));
  };

  for (const auto& a : m.arcs) {
    auto owners_it = arc_regions.find(a.id);
    const auto& src_regions = stage_regions[a.source];
    const auto& dst_regions = stage_regions[a.target];
    if (owners_it != arc_regions.end()) {
      // An arc claimed by an event carries flow from the source's event
      // into this one and on to the target's event.
      for (size_t owner : owners_it->second) {
        for (size_t s : src_regions) add(s, owner, {a.id});
        for (size_t t : dst_regions) add(owner, t, {a.id});
      }
    } else {
      for (size_t s : src_regions)
        for (size_t t : dst_regions) add(s, t, {a.id});
    }
  }

  // Directed stage paths through stages belonging to no region.
  std::unordered_map<std::string, std::vector<const Arc*>> out_arcs;
  for (const auto& a : m.arcs)
    if (!arc_regions.count(a.id)) out_arcs[a.source].push_back(&a);
  for (size_t start = 0; start < events.size(); start++) {
    std::deque<std::pair<std::string, std::vector<std::string>>> work;
    std::unordered_set<std::string> seen;
    for (const auto& el : events[start].region)
      if (m.stage(el)) {
        work.emplace_back(el, std::vector<std::string>{});
        seen.insert(el);
      }
    while (!work.empty()) {
      auto [stage, path] = work.front();
      work.pop_front();
      for (const Arc* a : out_arcs[stage]) {
        const std::string& next = a->target;
        if (seen.count(next)) continue;
        std::vector<std::string> npath = path;
        npath.push_back(a->id);
        auto regions = stage_regions.find(next);
        if (regions != stage_regions.end() && !regions->second.empty()) {
          for (size_t to : regions->second) add(start, to, npath);
          continue;  // stop at the first region boundary
        }
        if (!m.stage(next)) continue;  // machine-anchored arc
        seen.insert(next);
        work.emplace_back(next, std::move(npath));
      }
    }
  }

  for (const auto& [key, witness] : found)
    g.edges.push_back({g.nodes[key.first], g.nodes[key.second], witness});
  return g;
}

ComposeResult compose_events(const BehaviorGraph& g, const std::vector<std::string>& members,
                             const std::string& name) {
  ComposeResult result;
  std::unordered_set<std::string> member_set(members.begin(), members.end());
  if (members.empty()) {
    result.diagnostics.push_back(
        Diagnostic::error("unknown-member", "composition needs at least one member", name));
    return result;
  }
  for (const auto& mname : members) {
    if (std::find(g.nodes.begin(), g.nodes.end(), mname) == g.nodes.end()) {
      result.diagnostics.push_back(Diagnostic::error(
          "unknown-member", "event '" + mname + "' is not a node of the behavior graph", mname));
    }
  }
  if (has_errors(result.diagnostics)) return result;

  BehaviorGraph out;
  bool inserted = false;
  for (const auto& n : g.nodes) {
    if (member_set.count(n)) {
      if (!inserted) {
        out.nodes.push_back(name);
        inserted = true;
      }
      continue;
    }
    out.nodes.push_back(n);
  }
  for (const auto& e : g.edges) {
    BehaviorEdge ne = e;
    if (member_set.count(ne.from)) ne.from = name;
    if (member_set.count(ne.to)) ne.to = name;
    if (ne.from == ne.to) continue;
    if (!out.has_edge(ne.from, ne.to)) out.edges.push_back(std::move(ne));
  }
  out.composed = g.composed;
  std::vector<std::string> sorted_members(member_set.begin(), member_set.end());
  std::sort(sorted_members.begin(), sorted_members.end());
  out.composed[name] = std::move(sorted_members);
  result.graph = std::move(out);
  return result;
}

std::vector<EventDef> detect_send_events(const Model& m) {
  std::vector<EventDef> out;
  for (const auto& s : m.stages) {
    if (s.kind != StageKind::Release) continue;
    auto outs = m.flows_out_of(s.id);
    if (outs.size() != 1) continue;
    const Arc* cur = outs.front();
    std::vector<std::string> region{s.id, cur->id};
    const Stage* terminal = nullptr;
    while (const Stage* t = m.stage(cur->target)) {
      if (t->kind == StageKind::Receive) {
        region.push_back(t->id);
        terminal = t;
        break;
      }
      if (t->kind != StageKind::Transfer) break;
      region.push_back(t->id);
      std::vector<const Arc*> next;
      for (const Arc* n : m.flows_out_of(t->id))
        if (n->thing == cur->thing) next.push_back(n);
      if (next.size() != 1) break;
      cur = next.front();
      region.push_back(cur->id);
    }
    if (!terminal) continue;
    EventDef e;
    e.id = "send(" + cur->thing + ", " + m.owner_machine(s.id) + ", " +
           m.owner_machine(terminal->id) + ")";
    e.name = e.id;
    e.region = std::move(region);
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace thingc
