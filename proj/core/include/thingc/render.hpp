#pragma once

#include "thingc/events.hpp"
#include "thingc/model.hpp"
#include "thingc/sim.hpp"
#include "thingc/transform.hpp"

namespace thingc {

// Machines as clusters, stages as kind-labelled nodes, flows solid,
// triggers dashed. Overlay events get one color each: member stages and
// arcs are tinted and tagged with the event id.
std::string render_model_dot(const Model& m, const std::vector<EventDef>& overlay = {});

// Events as nodes, precedence edges directed; composed mega-events drawn
// as clusters.
std::string render_behavior_dot(const BehaviorGraph& g);

std::string render_use_case_dot(const UseCaseDiagram& d);

}  // namespace thingc
