#include "ciot/trace.hpp"

#include <charconv>

#include "ciot/dsl/lexer.hpp"
#include "ciot/value.hpp"

namespace ciot {

namespace {

constexpr std::pair<TraceKind, std::string_view> kKindNames[] = {
    {TraceKind::EventDelivered, "event_delivered"},
    {TraceKind::GuardEval, "guard_eval"},
    {TraceKind::Transition, "transition"},
    {TraceKind::Action, "action"},
    {TraceKind::StateEntered, "state_entered"},
    {TraceKind::StateExited, "state_exited"},
    {TraceKind::PayloadSent, "payload_sent"},
};

bool needs_quotes(std::string_view v) {
  if (v.empty()) return true;
  if (v.front() == '"') return true;
  return v.find_first_of(" \t\n") != std::string_view::npos;
}

// Splits at the next top-level space, honouring double-quoted runs.
std::size_t token_end(std::string_view s, std::size_t from) {
  bool quoted = false;
  for (std::size_t i = from; i < s.size(); ++i) {
    char c = s[i];
    if (quoted && c == '\\') {
      ++i;
    } else if (c == '"') {
      quoted = !quoted;
    } else if (c == ' ' && !quoted) {
      return i;
    }
  }
  return s.size();
}

template <typename Int>
bool parse_int(std::string_view s, Int& out) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && p == s.data() + s.size();
}

}  // namespace

const char* to_string(TraceKind k) {
  for (auto [kind, name] : kKindNames)
    if (kind == k) return name.data();
  return "?";
}

std::optional<TraceKind> trace_kind_from_string(std::string_view s) {
  for (auto [kind, name] : kKindNames)
    if (name == s) return kind;
  return std::nullopt;
}

DetailBuilder& DetailBuilder::add(std::string_view key, std::string_view value) {
  if (!text_.empty()) text_ += ' ';
  text_ += key;
  text_ += '=';
  text_ += needs_quotes(value) ? quote_string(value) : std::string(value);
  return *this;
}

std::string to_line(const TraceRecord& r) {
  std::string line = "seq=" + std::to_string(r.seq) + " t=" + std::to_string(r.clock_us) +
                     " inst=" + r.instance + " kind=" + to_string(r.kind);
  if (!r.detail.empty()) line += ' ' + r.detail;
  return line;
}

std::string to_canonical_text(std::span<const TraceRecord> records) {
  std::string out;
  for (const auto& r : records) {
    out += to_line(r);
    out += '\n';
  }
  return out;
}

std::optional<TraceRecord> parse_trace_line(std::string_view line) {
  if (!line.empty() && line.back() == '\n') line.remove_suffix(1);
  TraceRecord r;
  std::size_t pos = 0;
  auto next = [&](std::string_view key) -> std::optional<std::string_view> {
    std::size_t end = token_end(line, pos);
    std::string_view tok = line.substr(pos, end - pos);
    pos = end < line.size() ? end + 1 : end;
    if (tok.size() <= key.size() || tok.substr(0, key.size()) != key || tok[key.size()] != '=')
      return std::nullopt;
    return tok.substr(key.size() + 1);
  };
  auto seq = next("seq");
  auto t = next("t");
  auto inst = next("inst");
  auto kind = next("kind");
  if (!seq || !t || !inst || !kind) return std::nullopt;
  if (!parse_int(*seq, r.seq) || !parse_int(*t, r.clock_us)) return std::nullopt;
  auto k = trace_kind_from_string(*kind);
  if (!k) return std::nullopt;
  r.instance = std::string(*inst);
  r.kind = *k;
  if (pos < line.size()) r.detail = std::string(line.substr(pos));
  return r;
}

std::optional<std::string> detail_field(std::string_view detail, std::string_view key) {
  std::size_t pos = 0;
  while (pos < detail.size()) {
    std::size_t end = token_end(detail, pos);
    std::string_view tok = detail.substr(pos, end - pos);
    if (tok.size() > key.size() && tok.substr(0, key.size()) == key && tok[key.size()] == '=') {
      std::string_view v = tok.substr(key.size() + 1);
      if (!v.empty() && v.front() == '"') return dsl::unescape_string_token(v);
      return std::string(v);
    }
    pos = end + 1;
  }
  return std::nullopt;
}

}  // namespace ciot
