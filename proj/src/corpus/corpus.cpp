#include "ciot/corpus.hpp"

#include <algorithm>
#include <fstream>

#include "json.hpp"

#include "ciot/frontend.hpp"

namespace ciot::corpus {

namespace fs = std::filesystem;
using nlohmann::json;

const char* to_string(EntryKind k) {
  switch (k) {
    case EntryKind::Model: return "model";
    case EntryKind::Scenario: return "scenario";
    case EntryKind::Mutation: return "mutation";
    case EntryKind::Syntax: return "syntax";
  }
  return "?";
}

bool CorpusReport::all_passed() const { return failures() == 0; }

std::size_t CorpusReport::failures() const {
  std::size_t n = 0;
  for (const auto& e : entries) n += e.passed ? 0 : 1;
  return n;
}

namespace {

[[noreturn]] void manifest_error(const std::string& msg) { throw Error("E_CORPUS", "manifest: " + msg); }

EntryResult make_result(std::string name, EntryKind kind) {
  EntryResult r;
  r.name = std::move(name);
  r.kind = kind;
  return r;
}

std::vector<sim::StatusChange> parse_timeline(const json& j) {
  std::vector<sim::StatusChange> out;
  for (const auto& item : j) {
    if (!item.is_array() || item.size() != 2 || !item[0].is_number_integer() || !item[1].is_string())
      manifest_error("timeline items are [t_ms, \"vacant\"|\"occupied\"]");
    auto s = item[1].get<std::string>();
    if (s != "vacant" && s != "occupied") manifest_error("unknown status '" + s + "'");
    out.push_back({item[0].get<std::int64_t>(), s == "vacant" ? sim::Status::Vacant : sim::Status::Occupied});
  }
  return out;
}

std::string timeline_text(const std::vector<sim::StatusChange>& tl) {
  std::string out;
  for (const auto& c : tl) out += (out.empty() ? "" : ", ") + std::to_string(c.t_ms) + " " + sim::to_string(c.status);
  return "[" + out + "]";
}

void write_text(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error("E_IO", "cannot write '" + path.string() + "'");
}

EntryResult check_model(const fs::path& dir, const CorpusEntry& e) {
  auto r = make_result(e.model, e.kind);
  auto diags = diagnose(read_file(dir / e.model), e.model);
  if (diags.empty()) {
    r.passed = true;
    r.message = "0 errors, 0 warnings";
  } else {
    r.message = std::to_string(count_errors(diags)) + " errors, " +
                std::to_string(diags.size() - count_errors(diags)) + " warnings; first: " +
                format_diagnostic(diags.front());
  }
  return r;
}

EntryResult check_scenario(const fs::path& dir, const CorpusEntry& e, const CheckOptions& options) {
  auto r = make_result(e.scenario, e.kind);
  auto model = parse_file(dir / e.model).model;
  auto trace = sim::simulate(model, sim::load_scenario(dir / e.scenario));
  auto text = to_canonical_text(trace.records);
  auto timeline = sim::occupancy_timeline(trace);

  std::vector<std::string> problems;
  if (timeline != e.timeline)
    problems.push_back("timeline " + timeline_text(timeline) + ", expected " + timeline_text(e.timeline));
  if (!e.golden.empty()) {
    fs::path golden = dir / e.golden;
    if (!fs::exists(golden)) {
      if (options.regenerate_missing) {
        write_text(golden, text);
        r.regenerated = true;
      } else {
        problems.push_back("golden trace " + e.golden + " is missing");
      }
    } else if (read_file(golden) != text) {
      problems.push_back("trace differs from " + e.golden);
    }
  }
  r.passed = problems.empty();
  for (const auto& p : problems) r.message += (r.message.empty() ? "" : "; ") + p;
  if (r.passed)
    r.message = timeline_text(timeline) + ", " + std::to_string(trace.records.size()) + " records" +
                (r.regenerated ? ", golden written" : "");
  return r;
}

EntryResult check_mutation(const fs::path& dir, const CorpusEntry& e) {
  auto r = make_result(e.model, e.kind);
  auto diags = diagnose(read_file(dir / e.model), e.model);
  if (diags.empty()) {
    r.message = "no diagnostics, expected " + e.rule;
    return r;
  }
  for (const auto& d : diags) {
    if (d.code != e.rule) {
      r.message = "unexpected " + format_diagnostic(d);
      return r;
    }
  }
  if (e.line && std::none_of(diags.begin(), diags.end(), [&](const Diagnostic& d) { return d.loc.line == e.line; })) {
    r.message = e.rule + " reported, but not on line " + std::to_string(e.line);
    return r;
  }
  r.passed = true;
  r.message = std::to_string(diags.size()) + " x " + e.rule + "; " + format_diagnostic(diags.front());
  return r;
}

EntryResult check_syntax(const fs::path& dir, const CorpusEntry& e) {
  auto r = make_result(e.model, e.kind);
  auto diags = diagnose(read_file(dir / e.model), e.model);
  if (diags.size() != 1) {
    r.message = std::to_string(diags.size()) + " diagnostics, expected exactly one " + e.code;
    return r;
  }
  const auto& d = diags.front();
  bool at = (!e.line || d.loc.line == e.line) && (!e.column || d.loc.column == e.column);
  r.passed = d.code == e.code && at;
  r.message = format_diagnostic(d);
  if (!r.passed)
    r.message += " (expected " + e.code + " at " + std::to_string(e.line) + ":" + std::to_string(e.column) + ")";
  return r;
}

}  // namespace

std::vector<CorpusEntry> load_manifest(const fs::path& dir) {
  json j;
  try {
    j = json::parse(read_file(dir / "manifest.json"));
  } catch (const json::exception& ex) {
    manifest_error(ex.what());
  }
  std::vector<CorpusEntry> out;
  try {
    for (const auto& item : j.at("entries")) {
      CorpusEntry e;
      auto kind = item.at("kind").get<std::string>();
      if (kind == "model") {
        e.kind = EntryKind::Model;
      } else if (kind == "scenario") {
        e.kind = EntryKind::Scenario;
        e.scenario = item.at("scenario").get<std::string>();
        e.golden = item.value("golden", "");
        e.timeline = parse_timeline(item.at("timeline"));
      } else if (kind == "mutation") {
        e.kind = EntryKind::Mutation;
        e.rule = item.at("rule").get<std::string>();
      } else if (kind == "syntax") {
        e.kind = EntryKind::Syntax;
        e.code = item.at("code").get<std::string>();
        e.column = item.value("column", 0);
      } else {
        manifest_error("unknown entry kind '" + kind + "'");
      }
      e.model = item.at("model").get<std::string>();
      e.line = item.value("line", 0);
      e.description = item.value("description", "");
      out.push_back(std::move(e));
    }
  } catch (const json::exception& ex) {
    manifest_error(ex.what());
  }
  return out;
}

CorpusReport corpus_check(const fs::path& dir, const CheckOptions& options) {
  CorpusReport report;
  for (const auto& e : load_manifest(dir)) {
    try {
      switch (e.kind) {
        case EntryKind::Model: report.entries.push_back(check_model(dir, e)); break;
        case EntryKind::Scenario: report.entries.push_back(check_scenario(dir, e, options)); break;
        case EntryKind::Mutation: report.entries.push_back(check_mutation(dir, e)); break;
        case EntryKind::Syntax: report.entries.push_back(check_syntax(dir, e)); break;
      }
    } catch (const Error& ex) {
      auto r = make_result(e.kind == EntryKind::Scenario ? e.scenario : e.model, e.kind);
      r.message = ex.code() + ": " + ex.what();
      report.entries.push_back(std::move(r));
    }
  }
  return report;
}

std::string format_report(const CorpusReport& report) {
  std::string out;
  for (const auto& e : report.entries) {
    const char* verdict = !e.passed ? "FAIL" : e.regenerated ? "REGEN" : "PASS";
    out += std::string(verdict) + " " + to_string(e.kind) + " " + e.name + ": " + e.message + "\n";
  }
  out += std::to_string(report.entries.size() - report.failures()) + "/" + std::to_string(report.entries.size()) +
         " entries passed\n";
  return out;
}

}  // namespace ciot::corpus
