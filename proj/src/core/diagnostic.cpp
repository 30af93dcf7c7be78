#include "ciot/diagnostic.hpp"

#include <algorithm>
#include <sstream>

namespace ciot {

bool SourceSpan::contains(int line, int column) const {
  auto before = [](int l1, int c1, int l2, int c2) { return l1 < l2 || (l1 == l2 && c1 <= c2); };
  return before(begin.line, begin.column, line, column) && before(line, column, end.line, end.column);
}

const char* to_string(Severity s) { return s == Severity::Error ? "error" : "warning"; }

std::string format_diagnostic(const Diagnostic& d) {
  std::ostringstream out;
  out << (d.file.empty() ? "<input>" : d.file) << ':' << d.loc.line << ':' << d.loc.column << ": "
      << to_string(d.severity) << ' ' << d.code << ' ' << d.message;
  return out.str();
}

std::size_t count_errors(const std::vector<Diagnostic>& diags) {
  return static_cast<std::size_t>(
      std::count_if(diags.begin(), diags.end(), [](const Diagnostic& d) { return d.is_error(); }));
}

Error::Error(std::string code, const std::string& message, std::vector<Diagnostic> diagnostics)
    : std::runtime_error(message), code_(std::move(code)), diagnostics_(std::move(diagnostics)) {}

}  // namespace ciot
