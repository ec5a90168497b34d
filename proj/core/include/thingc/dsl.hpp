#pragma once

#include <string>

#include "thingc/model.hpp"

namespace thingc {

struct ParseResult {
  std::optional<Model> model;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return model.has_value() && !has_errors(diagnostics); }
};

// Parses `.tm` source. Line-oriented; `#` starts a comment. Errors are
// collected per line so one run reports all independent failures.
ParseResult parse(const std::string& text, const std::string& filename = "<input>");

// Canonical text form; parse(serialize(m)) equals m modulo source spans,
// and serialize is idempotent.
std::string serialize(const Model& m);

}  // namespace thingc
