#include <filesystem>
#include <fstream>
#include <random>

#include "ciot/corpus.hpp"
#include "ciot/frontend.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace ciot;
using namespace ciot::corpus;
namespace fs = std::filesystem;

namespace {

// A scratch copy of the corpus, removed on scope exit.
struct ScratchCorpus {
  fs::path dir;
  ScratchCorpus() {
    std::random_device rd;
    dir = fs::temp_directory_path() / ("ciot_corpus_" + std::to_string(rd()));
    fs::copy(CIOT_CORPUS_DIR, dir, fs::copy_options::recursive);
  }
  ~ScratchCorpus() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  ScratchCorpus(const ScratchCorpus&) = delete;
  ScratchCorpus& operator=(const ScratchCorpus&) = delete;

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(dir / name, std::ios::binary) << text;
  }
};

const EntryResult& entry(const CorpusReport& r, const std::string& name) {
  for (const auto& e : r.entries)
    if (e.name == name) return e;
  FAIL("no entry " << name);
  return r.entries.front();
}

}  // namespace

TEST_CASE("the shipped corpus passes unchanged") {
  auto report = corpus_check(CIOT_CORPUS_DIR, CheckOptions{false});
  CHECK_MESSAGE(report.all_passed(), format_report(report));
  CHECK(report.entries.size() == 13);
  for (const auto& e : report.entries) CHECK_FALSE(e.regenerated);
  auto text = format_report(report);
  CHECK(text.find("13/13 entries passed") != std::string::npos);
  CHECK(text.find("PASS mutation mutations/r2_missing_provided.ciot: 1 x R2") != std::string::npos);
}

TEST_CASE("manifest contents") {
  auto entries = load_manifest(CIOT_CORPUS_DIR);
  REQUIRE(entries.size() == 13);
  CHECK(entries[1].kind == EntryKind::Scenario);
  CHECK(entries[1].timeline.size() == 3);
  CHECK(entries[1].timeline[1] == sim::StatusChange{5000, sim::Status::Occupied});
  int mutations = 0, syntax = 0;
  for (const auto& e : entries) {
    mutations += e.kind == EntryKind::Mutation;
    syntax += e.kind == EntryKind::Syntax;
  }
  CHECK(mutations == 7);
  CHECK(syntax == 3);
}

TEST_CASE("a missing golden trace is regenerated byte for byte") {
  ScratchCorpus scratch;
  auto golden = scratch.dir / "golden/arrive_depart.trace";
  auto original = read_file(golden);
  fs::remove(golden);

  auto strict = corpus_check(scratch.dir, CheckOptions{false});
  CHECK_FALSE(strict.all_passed());
  CHECK(entry(strict, "scenario_arrive_depart.scn").message.find("missing") != std::string::npos);
  CHECK_FALSE(fs::exists(golden));

  auto regen = corpus_check(scratch.dir);
  CHECK(regen.all_passed());
  CHECK(entry(regen, "scenario_arrive_depart.scn").regenerated);
  CHECK(format_report(regen).find("REGEN scenario scenario_arrive_depart.scn") != std::string::npos);
  REQUIRE(fs::exists(golden));
  CHECK(read_file(golden) == original);

  auto again = corpus_check(scratch.dir, CheckOptions{false});
  CHECK(again.all_passed());
}

TEST_CASE("drift is reported, not hidden") {
  ScratchCorpus scratch;
  auto golden = read_file(scratch.dir / "golden/physical.trace");
  scratch.write("golden/physical.trace", golden.substr(0, golden.size() - 10));
  auto r = corpus_check(scratch.dir);
  CHECK(r.failures() == 1);
  CHECK(entry(r, "scenario_physical.scn").message.find("trace differs") != std::string::npos);

  // A mutation that stops reproducing its rule fails its entry.
  scratch.write("mutations/r1_no_initial.ciot", read_file(scratch.dir / "parking_node.ciot"));
  r = corpus_check(scratch.dir);
  CHECK(r.failures() == 2);
  CHECK(entry(r, "mutations/r1_no_initial.ciot").message.find("no diagnostics") != std::string::npos);
}

TEST_CASE("malformed manifests") {
  ScratchCorpus scratch;
  auto code = [&](const std::string& manifest) -> std::string {
    scratch.write("manifest.json", manifest);
    try {
      load_manifest(scratch.dir);
    } catch (const Error& e) {
      return e.code();
    }
    return "none";
  };
  CHECK(code("{") == "E_CORPUS");
  CHECK(code(R"({"entries": [{"kind": "other", "model": "x"}]})") == "E_CORPUS");
  CHECK(code(R"({"entries": [{"kind": "mutation", "model": "x"}]})") == "E_CORPUS");
  CHECK(code(R"({"entries": [{"kind": "scenario", "model": "m", "scenario": "s", "timeline": [[0, "busy"]]}]})") ==
        "E_CORPUS");
  CHECK(code(R"({"entries": []})") == "none");
  fs::remove(scratch.dir / "manifest.json");
  CHECK_THROWS_AS(load_manifest(scratch.dir), Error);
}
