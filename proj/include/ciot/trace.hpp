#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ciot {

enum class TraceKind {
  EventDelivered,
  GuardEval,
  Transition,
  Action,
  StateEntered,
  StateExited,
  PayloadSent,
};

const char* to_string(TraceKind k);
std::optional<TraceKind> trace_kind_from_string(std::string_view s);

/// One observable step of execution. `detail` is a space-separated list of
/// key=value pairs in a fixed per-kind order; values containing spaces are
/// double-quoted.
struct TraceRecord {
  std::uint64_t seq = 0;
  std::int64_t clock_us = 0;
  std::string instance;
  TraceKind kind = TraceKind::EventDelivered;
  std::string detail;

  bool operator==(const TraceRecord&) const = default;
};

/// `seq=<n> t=<us> inst=<path> kind=<k> <detail>` (no trailing newline).
std::string to_line(const TraceRecord& r);

/// All records, one per line, each LF-terminated.
std::string to_canonical_text(std::span<const TraceRecord> records);

/// Inverse of to_line(); nullopt on malformed input.
std::optional<TraceRecord> parse_trace_line(std::string_view line);

/// Value of `key` in a detail string, unquoted; nullopt when absent.
std::optional<std::string> detail_field(std::string_view detail, std::string_view key);

/// Builds detail strings: `DetailBuilder().add("state", "ON").str()`.
class DetailBuilder {
 public:
  DetailBuilder& add(std::string_view key, std::string_view value);
  const std::string& str() const { return text_; }

 private:
  std::string text_;
};

}  // namespace ciot
