#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ciot/diagnostic.hpp"
#include "ciot/model.hpp"

namespace ciot {

struct LoadedModel {
  Model model;
  std::vector<Diagnostic> warnings;
};

/// tokenize -> parse -> resolve -> validate over in-memory text. Throws
/// Error(E_LEX / E_PARSE / E_UNKNOWN_REF / ... / E_VALIDATE) when any stage
/// reports an error-severity diagnostic; warnings are returned.
LoadedModel load_model(std::string_view source, const std::string& file = {});

/// load_model() over a file; Error(E_IO) when it cannot be read.
LoadedModel parse_file(const std::filesystem::path& path);

/// Every diagnostic the pipeline produces for `source`, errors and
/// warnings alike, without throwing. A stage that fails stops the pipeline,
/// so later stages contribute nothing.
std::vector<Diagnostic> diagnose(std::string_view source, const std::string& file = {});

/// Reads a whole file; Error(E_IO) on failure.
std::string read_file(const std::filesystem::path& path);

}  // namespace ciot
