#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ciot {

/// 1-based position in a source file.
///
/// Locations are provenance, not structure: two locations always compare
/// equal so that defaulted equality on model types expresses structural
/// identity (a re-parsed export has different positions but the same model).
struct SourceLoc {
  int line = 0;
  int column = 0;

  bool valid() const { return line > 0; }
  friend bool operator==(const SourceLoc&, const SourceLoc&) { return true; }
};

struct SourceSpan {
  SourceLoc begin;
  SourceLoc end;

  bool contains(int line, int column) const;
};

enum class Severity { Error, Warning };

const char* to_string(Severity s);

struct Diagnostic {
  std::string code;  // "R1".."R7", "E_PARSE", "E_UNKNOWN_REF", ...
  Severity severity = Severity::Error;
  std::string message;
  SourceLoc loc;
  std::string file;

  bool is_error() const { return severity == Severity::Error; }
};

/// `file:line:col: severity CODE message`
std::string format_diagnostic(const Diagnostic& d);

std::size_t count_errors(const std::vector<Diagnostic>& diags);

/// Error raised by every stage of the toolchain. `code` is the stable
/// identifier (E_IO, E_PARSE, E_TYPE, ...); `diagnostics` carries the
/// source-located details when a stage reports more than one problem.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message,
        std::vector<Diagnostic> diagnostics = {});

  const std::string& code() const noexcept { return code_; }
  const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::string code_;
  std::vector<Diagnostic> diagnostics_;
};

}  // namespace ciot
