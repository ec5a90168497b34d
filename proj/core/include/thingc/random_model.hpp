#pragma once

#include <cstdint>

#include "thingc/model.hpp"

namespace thingc {

struct RandomModelOptions {
  int max_machines = 5;
  int max_chains = 6;     // flow pipelines threaded through the machines
  int max_triggers = 4;
  bool with_variables = true;
};

// Seeded generator of valid models: machine trees populated with legal
// flow pipelines (Create..Release/Transfer../Receive..Process) and triggers
// sourced at Process/Create stages. Same seed, same model.
Model random_model(std::uint64_t seed, const RandomModelOptions& opts = {});

}  // namespace thingc
