#pragma once

#include <set>
#include <tuple>
#include <vector>

#include "thingc/model.hpp"

namespace thingc {

// Which flow grammar applies: Full is the five-stage table, Level1 the
// reduced table for models with Release/Transfer spliced out.
enum class FlowTable { Full, Level1 };

struct ValidateOptions {
  bool lax = false;  // downgrade trigger-source violations to warnings
  FlowTable table = FlowTable::Full;
};

// True if a flow hop from `src` to `dst` kind is legal; `crossing` means the
// arc connects stages of two different machines.
bool flow_hop_legal(StageKind src, StageKind dst, bool crossing, FlowTable table);

bool trigger_source_legal(StageKind src);

// Stage-legality diagnostics; empty result means valid.
std::vector<Diagnostic> validate_model(const Model& m, const ValidateOptions& opts = {});

// One tuple per maximal inter-machine flow chain, in declaration order of
// the chain's first crossing arc.
struct FlowTuple {
  std::string source_machine;
  std::string thing;
  std::string target_machine;
  friend bool operator==(const FlowTuple&, const FlowTuple&) = default;
  friend auto operator<=>(const FlowTuple&, const FlowTuple&) = default;
};

std::vector<FlowTuple> flow_relation(const Model& m);

}  // namespace thingc
