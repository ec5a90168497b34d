#pragma once

#include "thingc/model.hpp"
#include "thingc/validate.hpp"

namespace thingc {

struct TransformResult {
  std::optional<Model> model;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return model.has_value() && !has_errors(diagnostics); }
};

// Level 1: splices every Release -> Transfer [-> Transfer...] -> Receive
// chain into a single flow arc from the Release predecessor to the Receive,
// removing all Release and Transfer stages. flow_relation is preserved.
TransformResult simplify_level1(const Model& m);

// Level 2: applies level 1, then erases Create/Process/Receive stages that
// the arrow-endpoint convention can recover, re-anchoring arcs at machine
// boundaries. Non-recoverable stages are retained with a warning.
TransformResult simplify_level2(const Model& m);

struct UseCaseDiagram {
  std::vector<std::string> actors;
  std::vector<std::string> use_cases;
  std::vector<std::pair<std::string, std::string>> associations;  // (actor, use case)
};

struct UseCaseResult {
  std::optional<UseCaseDiagram> diagram;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return diagram.has_value() && !has_errors(diagnostics); }
};

// Collapses the model to actors, use cases and associations. Use cases come
// from `usecase`-tagged machines when any exist, else from top-level
// non-actor machines.
UseCaseResult reduce_to_use_case(const Model& m);

}  // namespace thingc
