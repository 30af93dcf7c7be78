// ciot: validate, run, simulate and export component models.
//
// Exit codes: 0 success, 1 the model or run failed, 2 usage or I/O error.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "ciot/corpus.hpp"
#include "ciot/engine.hpp"
#include "ciot/export.hpp"
#include "ciot/frontend.hpp"
#include "ciot/inject_spec.hpp"
#include "ciot/sim.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

int report(const ciot::Error& e) {
  std::cerr << "ciot: " << e.code() << ": " << e.what() << "\n";
  const auto& code = e.code();
  return code == "E_IO" || code == "E_USAGE" ? kUsage : kFailure;
}

void print_diagnostics(const std::vector<ciot::Diagnostic>& diags) {
  for (const auto& d : diags) std::cerr << ciot::format_diagnostic(d) << "\n";
}

/// Loads a model for execution; prints diagnostics and throws on failure.
ciot::Model load(const std::string& path) {
  try {
    auto loaded = ciot::parse_file(path);
    print_diagnostics(loaded.warnings);
    return std::move(loaded.model);
  } catch (const ciot::Error& e) {
    if (!e.diagnostics().empty()) {
      print_diagnostics(e.diagnostics());
      throw ciot::Error(e.code(), "model '" + path + "' is invalid");
    }
    throw;
  }
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw ciot::Error("E_IO", "cannot write '" + path + "'");
}

int cmd_validate(const std::string& model) {
  auto diags = ciot::diagnose(ciot::read_file(model), model);
  print_diagnostics(diags);
  return ciot::count_errors(diags) == 0 ? kOk : kFailure;
}

int cmd_run(const std::string& model, const std::vector<std::string>& specs, std::size_t max_steps) {
  auto rt = ciot::instantiate(load(model));
  for (const auto& s : specs) ciot::inject_spec(rt, s);
  auto result = ciot::run_to_quiescence(rt, max_steps);
  std::cout << ciot::to_canonical_text(rt.trace);
  if (result.step_limit) {
    std::cerr << "ciot: E_STEP_LIMIT: no quiescence within " << max_steps << " steps\n";
    return kFailure;
  }
  return kOk;
}

struct SimulateArgs {
  std::string model, scenario, trace, trace_level = "full";
  std::optional<double> threshold_ms, speed;
  std::optional<std::int64_t> sample_period_ms;
  std::size_t max_steps = ciot::sim::kDefaultMaxSteps;
};

int cmd_simulate(const SimulateArgs& a) {
  auto model = load(a.model);
  auto scenario = ciot::sim::load_scenario(a.scenario);
  ciot::sim::SimOptions o;
  o.threshold_ms = a.threshold_ms;
  if (a.speed) o.speed_m_per_s = *a.speed;
  o.sample_period_ms = a.sample_period_ms;
  o.max_steps = a.max_steps;
  auto trace = ciot::sim::simulate(model, scenario, o);
  if (!a.trace.empty()) {
    std::vector<ciot::TraceRecord> kept;
    for (const auto& r : trace.records)
      if (a.trace_level == "full" || r.kind == ciot::TraceKind::Transition ||
          r.kind == ciot::TraceKind::StateEntered || r.kind == ciot::TraceKind::StateExited)
        kept.push_back(r);
    write_output(a.trace, ciot::to_canonical_text(kept));
  }
  for (const auto& c : ciot::sim::occupancy_timeline(trace))
    std::cout << "t=" << c.t_ms << " status=" << ciot::sim::to_string(c.status) << "\n";
  return kOk;
}

int cmd_export(const std::string& model_path, const std::string& kind, const std::string& component,
               const std::string& output) {
  auto model = load(model_path);
  std::string text;
  auto target = [&]() -> std::string {
    if (!component.empty()) return component;
    if (!model.instances.empty()) return model.components[model.instances.front().component].name;
    throw ciot::Error("E_USAGE", "--component is required when the model declares no instance");
  };
  if (kind == "sm") {
    text = ciot::statemachine_to_dot(model, target()).text;
  } else if (kind == "structure") {
    text = ciot::structure_to_dot(model, target()).text;
  } else {
    text = ciot::export_model(model);
  }
  write_output(output, text);
  return kOk;
}

int cmd_corpus(const std::string& dir, bool regenerate) {
  ciot::corpus::CheckOptions o;
  o.regenerate_missing = regenerate;
  auto r = ciot::corpus::corpus_check(dir, o);
  std::cout << ciot::corpus::format_report(r);
  return r.all_passed() ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Component-based IoT models: validate, run, simulate, export"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "ciot 1.0.0");

  std::string model;
  auto* validate = app.add_subcommand("validate", "Check a model and print diagnostics");
  validate->add_option("model", model, "Model file (.ciot)")->required();

  std::vector<std::string> injects;
  std::size_t run_max_steps = 10000;
  auto* run = app.add_subcommand("run", "Inject events, run to quiescence, print the trace");
  run->add_option("model", model, "Model file (.ciot)")->required();
  run->add_option("--inject", injects, "inst.port.event{field=value,...} (repeatable)");
  run->add_option("--max-steps", run_max_steps, "Step limit")->check(CLI::PositiveNumber);

  SimulateArgs sa;
  auto* simulate = app.add_subcommand("simulate", "Run a timed scenario and print the occupancy timeline");
  simulate->add_option("model", sa.model, "Model file (.ciot)")->required();
  simulate->add_option("scenario", sa.scenario, "Scenario file (.scn)")->required();
  simulate->add_option("--threshold-ms", sa.threshold_ms, "Override the duration threshold")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--speed", sa.speed, "Speed of sound in m/s")->check(CLI::PositiveNumber);
  simulate->add_option("--sample-period-ms", sa.sample_period_ms, "Sensor sampling period")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--trace", sa.trace, "Write the timed trace to this file ('-' for stdout)");
  simulate->add_option("--max-steps", sa.max_steps, "Step limit per sample tick")->check(CLI::PositiveNumber);
  simulate->add_option("--trace-level", sa.trace_level, "full or states")
      ->check(CLI::IsMember({"full", "states"}));

  std::string kind, component, output;
  auto* exp = app.add_subcommand("export", "Write a DOT diagram or the canonical model text");
  exp->add_option("model", model, "Model file (.ciot)")->required();
  exp->add_option("--kind", kind, "sm, structure or model")->required()->check(CLI::IsMember({"sm", "structure", "model"}));
  exp->add_option("--component", component, "Component to draw (default: first instance's)");
  exp->add_option("-o,--output", output, "Output file ('-' or omitted for stdout)");

  std::string corpus_dir;
  bool no_regenerate = false;
  auto* corpus = app.add_subcommand("corpus", "Re-run every entry of a corpus manifest");
  corpus->add_option("dir", corpus_dir, "Corpus directory")->required();
  corpus->add_flag("--no-regenerate", no_regenerate, "Fail on missing golden traces instead of writing them");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*validate) return cmd_validate(model);
    if (*run) return cmd_run(model, injects, run_max_steps);
    if (*simulate) return cmd_simulate(sa);
    if (*exp) return cmd_export(model, kind, component, output);
    if (*corpus) return cmd_corpus(corpus_dir, !no_regenerate);
  } catch (const ciot::Error& e) {
    return report(e);
  } catch (const std::exception& e) {
    std::cerr << "ciot: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}
