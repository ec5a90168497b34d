#pragma once

#include <string>
#include <vector>

namespace thingc {

struct SourceSpan {
  std::string file;
  int line = 0;       // 1-based, 0 = unknown
  int column = 0;
  int end_line = 0;
  int end_column = 0;

  bool known() const { return line > 0; }
  std::string str() const;
};

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;      // machine-readable tag, e.g. "illegal-flow-hop"
  std::string message;
  std::string location;  // element id or formatted span
  SourceSpan span;

  static Diagnostic error(std::string code, std::string message, std::string location,
                          SourceSpan span = {});
  static Diagnostic warning(std::string code, std::string message, std::string location,
                            SourceSpan span = {});
  std::string str() const;
};

bool has_errors(const std::vector<Diagnostic>& diags);

}  // namespace thingc
