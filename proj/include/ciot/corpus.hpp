#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ciot/sim.hpp"

namespace ciot::corpus {

enum class EntryKind { Model, Scenario, Mutation, Syntax };

const char* to_string(EntryKind k);

/// One manifest entry. Paths are relative to the corpus directory.
struct CorpusEntry {
  EntryKind kind = EntryKind::Model;
  std::string model;
  std::string scenario;  // Scenario
  std::string golden;    // Scenario: expected canonical trace
  std::vector<sim::StatusChange> timeline;  // Scenario
  std::string rule;    // Mutation: the only rule id expected in diagnostics
  std::string code;    // Syntax: E_LEX or E_PARSE
  int line = 0;        // Mutation / Syntax: expected location (0 = any)
  int column = 0;      // Syntax
  std::string description;
};

/// Reads `manifest.json` from `dir`. Throws Error(E_IO) or Error(E_CORPUS).
std::vector<CorpusEntry> load_manifest(const std::filesystem::path& dir);

struct EntryResult {
  std::string name;
  EntryKind kind = EntryKind::Model;
  bool passed = false;
  bool regenerated = false;  // golden trace was missing and has been written
  std::string message;
};

struct CorpusReport {
  std::vector<EntryResult> entries;
  bool all_passed() const;
  std::size_t failures() const;
};

struct CheckOptions {
  bool regenerate_missing = true;
};

/// Re-runs every entry. Failures are report content, not exceptions; only a
/// missing or malformed manifest throws.
CorpusReport corpus_check(const std::filesystem::path& dir, const CheckOptions& options = {});

/// `PASS|FAIL|REGEN <kind> <name>: <message>` per entry and a summary line.
std::string format_report(const CorpusReport& report);

}  // namespace ciot::corpus
