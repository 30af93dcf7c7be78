#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "ciot/frontend.hpp"
#include "doctest.h"
#include "support.hpp"

using testing_support::corpus_path;
namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out;  // stdout and stderr interleaved
};

Run cli(const std::string& args) {
  std::string cmd = std::string(CIOT_CLI_PATH) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf;
  for (std::size_t n; (n = fread(buf.data(), 1, buf.size(), p)) > 0;) r.out.append(buf.data(), n);
  int raw = pclose(p);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string q(const std::string& s) { return "'" + s + "'"; }

struct TempDir {
  fs::path dir;
  TempDir() {
    std::random_device rd;
    dir = fs::temp_directory_path() / ("ciot_cli_" + std::to_string(rd()));
    fs::create_directories(dir);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  std::string file(const std::string& name, const std::string& text) const {
    std::ofstream(dir / name, std::ios::binary) << text;
    return (dir / name).string();
  }
};

const std::string kModel = q(corpus_path("parking_node.ciot"));

}  // namespace

TEST_CASE("validate") {
  auto ok = cli("validate " + kModel);
  CHECK(ok.status == 0);
  CHECK(ok.out.empty());

  auto bad = cli("validate " + q(corpus_path("mutations/r2_missing_provided.ciot")));
  CHECK(bad.status == 1);
  CHECK(bad.out.find("error R2") != std::string::npos);
  CHECK(bad.out.find(":83:") != std::string::npos);

  auto warn = cli("validate " + q(corpus_path("mutations/r6_unreachable_state.ciot")));
  CHECK(warn.status == 0);
  CHECK(warn.out.find("warning R6") != std::string::npos);

  auto syntax = cli("validate " + q(corpus_path("mutations/syntax_missing_semicolon.ciot")));
  CHECK(syntax.status == 1);
  CHECK(syntax.out.find(":75:3: error E_PARSE") != std::string::npos);
}

TEST_CASE("missing files and bad usage exit with 2") {
  CHECK(cli("validate /no/such/model.ciot").status == 2);
  CHECK(cli("simulate " + kModel + " /no/such/scenario.scn").status == 2);
  CHECK(cli("").status == 2);
  CHECK(cli("frobnicate").status == 2);
  CHECK(cli("export " + kModel + " --kind pdf").status == 2);
  CHECK(cli("simulate " + kModel + " " + q(corpus_path("scenario_physical.scn")) + " --threshold-ms -3").status ==
        2);
  CHECK(cli("--version").status == 0);
}

TEST_CASE("run with injected events") {
  auto r = cli("run " + kModel + " --inject 'node.sensor.senseEvt{duration=320.0}'");
  CHECK(r.status == 0);
  CHECK(r.out.find("inst=node.red kind=state_entered state=OFF") != std::string::npos);
  CHECK(r.out.find("inst=node.green kind=state_entered state=ON") != std::string::npos);

  auto malformed = cli("run " + kModel + " --inject 'node.sensor.senseEvt{duration=}'");
  CHECK(malformed.status == 2);
  CHECK(malformed.out.find("E_USAGE") != std::string::npos);

  auto unknown = cli("run " + kModel + " --inject 'node.sensor.nothing{}'");
  CHECK(unknown.status == 1);
  CHECK(unknown.out.find("E_BAD_TARGET") != std::string::npos);

  auto mistyped = cli("run " + kModel + " --inject 'node.sensor.senseEvt{duration=\"far\"}'");
  CHECK(mistyped.status == 1);
  CHECK(mistyped.out.find("E_TYPE") != std::string::npos);
}

TEST_CASE("simulate prints the occupancy timeline") {
  auto r = cli("simulate " + kModel + " " + q(corpus_path("scenario_arrive_depart.scn")));
  CHECK(r.status == 0);
  CHECK(r.out == "t=0 status=vacant\nt=5000 status=occupied\nt=12000 status=vacant\n");

  auto forced = cli("simulate " + kModel + " " + q(corpus_path("scenario_arrive_depart.scn")) +
                     " --threshold-ms 200");
  CHECK(forced.out == "t=0 status=vacant\n");

  TempDir tmp;
  auto trace = (tmp.dir / "t.trace").string();
  auto with_trace = cli("simulate " + kModel + " " + q(corpus_path("scenario_arrive_depart.scn")) + " --trace " +
                         q(trace));
  CHECK(with_trace.status == 0);
  CHECK(ciot::read_file(trace) == ciot::read_file(corpus_path("golden/arrive_depart.trace")));

  auto states = cli("simulate " + kModel + " " + q(corpus_path("scenario_arrive_depart.scn")) +
                     " --trace - --trace-level states");
  CHECK(states.out.find("event_delivered") == std::string::npos);
  CHECK(states.out.find("state_entered") != std::string::npos);

  auto scn = tmp.file("bad.scn", "mode=duration\nhorizon_ms=100\nat 500 slot node echo 1.0\n");
  auto bad = cli("simulate " + kModel + " " + q(scn));
  CHECK(bad.status == 1);
  CHECK(bad.out.find("E_SCENARIO") != std::string::npos);
  CHECK(bad.out.find("beyond the horizon") != std::string::npos);
}

TEST_CASE("export") {
  auto sm = cli("export " + kModel + " --kind sm");
  CHECK(sm.status == 0);
  CHECK(sm.out.rfind("digraph", 0) == 0);
  CHECK(sm.out.find("\"ACQUISITION\"") != std::string::npos);

  auto led = cli("export " + kModel + " --kind sm --component RedLED");
  CHECK(led.out.find("\"OFF\" -> \"ON\"") != std::string::npos);

  auto structure = cli("export " + kModel + " --kind structure");
  CHECK(structure.out.find("cluster_Node") != std::string::npos);

  TempDir tmp;
  auto out = (tmp.dir / "m.ciot").string();
  CHECK(cli("export " + kModel + " --kind model -o " + q(out)).status == 0);
  CHECK(cli("validate " + q(out)).status == 0);

  auto plain = tmp.file("plain.ciot", "component Box { property n: int = 0; }\ninstance b : Box;\n");
  auto none = cli("export " + q(plain) + " --kind sm");
  CHECK(none.status == 1);
  CHECK(none.out.find("E_NO_MACHINE") != std::string::npos);
  CHECK(cli("export " + q(plain) + " --kind sm --component Crate").status == 1);
}

TEST_CASE("corpus") {
  auto r = cli("corpus " + q(CIOT_CORPUS_DIR) + " --no-regenerate");
  CHECK(r.status == 0);
  CHECK(r.out.find("13/13 entries passed") != std::string::npos);
}
