#include "thingc/diagnostics.hpp"

#include <sstream>

namespace thingc {

std::string SourceSpan::str() const {
  if (!known()) return file;
  std::ostringstream os;
  os << file << ":" << line << ":" << column;
  return os.str();
}

Diagnostic Diagnostic::error(std::string code, std::string message, std::string location,
                             SourceSpan span) {
  return {Severity::Error, std::move(code), std::move(message), std::move(location),
          std::move(span)};
}

Diagnostic Diagnostic::warning(std::string code, std::string message, std::string location,
                               SourceSpan span) {
  return {Severity::Warning, std::move(code), std::move(message), std::move(location),
          std::move(span)};
}

std::string Diagnostic::str() const {
  std::ostringstream os;
  std::string where = span.known() ? span.str() : location;
  if (!where.empty()) os << where << ": ";
  os << (severity == Severity::Error ? "error" : "warning");
  os << " [" << code << "]: " << message;
  return os.str();
}

bool has_errors(const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags)
    if (d.severity == Severity::Error) return true;
  return false;
}

}  // namespace thingc
