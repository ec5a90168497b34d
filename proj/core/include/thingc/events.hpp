#pragma once

#include <map>

#include "thingc/model.hpp"

namespace thingc {

// Verifies that a region's elements exist and form a weakly connected
// subgraph. Overlap with other events is a warning, not an error.
std::vector<Diagnostic> check_region(const Model& m, const EventDef& e);

struct BehaviorEdge {
  std::string from;
  std::string to;
  std::vector<std::string> witness;  // arc ids (and path stages) proving the edge
  friend bool operator==(const BehaviorEdge&, const BehaviorEdge&) = default;
};

struct BehaviorGraph {
  std::vector<std::string> nodes;
  std::vector<BehaviorEdge> edges;
  std::map<std::string, std::vector<std::string>> composed;  // mega id -> members

  bool has_edge(const std::string& from, const std::string& to) const;
  bool reaches(const std::string& from, const std::string& to) const;
};

// Chronology-of-events graph. Edge (A, B) when an arc leads from A's region
// into B's region, when an arc owned by A's region starts in B or ends in B,
// or when a directed stage path runs from A to B through stages in no region.
BehaviorGraph build_behavior(const Model& m, const std::vector<EventDef>& events);

struct ComposeResult {
  std::optional<BehaviorGraph> graph;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return graph.has_value() && !has_errors(diagnostics); }
};

// Replaces `members` with a single mega-event node; edges in and out are
// re-anchored, internal structure is recorded under `composed`.
ComposeResult compose_events(const BehaviorGraph& g, const std::vector<std::string>& members,
                             const std::string& name);

// One auto-generated event per maximal Release -> Transfer... -> Receive
// chain, named send(<thing>, <source machine>, <target machine>).
std::vector<EventDef> detect_send_events(const Model& m);

}  // namespace thingc
