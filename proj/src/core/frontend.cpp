#include "ciot/frontend.hpp"

#include <fstream>
#include <sstream>

#include "ciot/dsl/parser.hpp"
#include "ciot/resolve.hpp"
#include "ciot/validate.hpp"

namespace ciot {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("E_IO", "cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error("E_IO", "error while reading '" + path.string() + "'");
  return buf.str();
}

LoadedModel load_model(std::string_view source, const std::string& file) {
  Model model = resolve(dsl::parse_source(source, file));
  auto diags = validate(model);
  if (std::size_t n = count_errors(diags); n > 0) {
    std::string msg;
    for (const auto& d : diags)
      if (d.is_error()) msg += (msg.empty() ? "" : "\n") + format_diagnostic(d);
    throw Error("E_VALIDATE", msg, std::move(diags));
  }
  return LoadedModel{std::move(model), std::move(diags)};
}

std::vector<Diagnostic> diagnose(std::string_view source, const std::string& file) {
  try {
    return load_model(source, file).warnings;
  } catch (const Error& e) {
    if (!e.diagnostics().empty()) return e.diagnostics();
    return {Diagnostic{e.code(), Severity::Error, e.what(), {}, file}};
  }
}

LoadedModel parse_file(const std::filesystem::path& path) {
  return load_model(read_file(path), path.string());
}

}  // namespace ciot
