#include <random>

#include "ciot/sim.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace ciot;
using namespace ciot::sim;
using testing_support::corpus_path;
using testing_support::parking_model;

namespace {

std::string error_code(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "none";
}

Scenario duration_scenario(std::vector<std::pair<std::int64_t, double>> echoes, std::int64_t horizon) {
  Scenario s;
  s.mode = Mode::Duration;
  s.horizon_ms = horizon;
  for (auto [t, d] : echoes) s.stimuli.push_back({t, "node", Echo{d}});
  return s;
}

std::string led(const TimedTrace& tr, const std::string& path) {
  std::string state;
  for (const auto& r : tr.records)
    if (r.instance == path && r.kind == TraceKind::StateEntered) state = *detail_field(r.detail, "state");
  return state;
}

}  // namespace

TEST_CASE("echo_duration") {
  // 2 * d / v seconds, reported in milliseconds.
  CHECK(echo_duration(2.5, 343.0) == doctest::Approx(5000.0 / 343.0).epsilon(1e-12));
  CHECK(echo_duration(2.5, 343.0) == doctest::Approx(14.577).epsilon(0.001 / 14.577));
  CHECK(echo_duration(0.5, 343.0) == doctest::Approx(2.915).epsilon(0.001 / 2.915));
  CHECK(echo_duration(1.0, 1000.0) == doctest::Approx(2.0));
  CHECK(error_code([] { echo_duration(0.0, 343.0); }) == "E_DOMAIN");
  CHECK(error_code([] { echo_duration(-1.0, 343.0); }) == "E_DOMAIN");
  CHECK(error_code([] { echo_duration(1.0, 0.0); }) == "E_DOMAIN");
}

TEST_CASE("scenario parsing") {
  auto s = load_scenario(corpus_path("scenario_arrive_depart.scn"));
  CHECK(s.mode == Mode::Duration);
  CHECK(s.horizon_ms == 15000);
  CHECK(s.sample_period_ms == 100);
  REQUIRE(s.stimuli.size() == 3);
  CHECK(s.stimuli[1].time_ms == 5000);
  CHECK(std::get<Echo>(s.stimuli[1].change).duration_ms == 250.0);

  auto two = parse_scenario("mode=duration\nhorizon_ms=20000\nat 5000 slot node echo 250\nat 12000 slot node echo 320\n");
  CHECK(two.stimuli.size() == 2);

  auto empty = parse_scenario("mode=duration\nhorizon_ms=1000\n");
  CHECK(empty.stimuli.empty());
  CHECK(empty.sample_period_ms == kDefaultSamplePeriodMs);

  auto phys = load_scenario(corpus_path("scenario_physical.scn"));
  CHECK(phys.mode == Mode::Physical);
  REQUIRE(phys.threshold_ms);
  CHECK(*phys.threshold_ms == 5.0);
  CHECK(std::get<Occupancy>(phys.stimuli[0].change).target_distance_m == 0.5);
  CHECK_FALSE(std::get<Occupancy>(phys.stimuli[1].change).present);

  for (const char* bad : {
           "mode=duration\nhorizon_ms=20000\nat 12000 slot node echo 320\nat 5000 slot node echo 250\n",
           "mode=sideways\nhorizon_ms=10\n",
           "horizon_ms=10\n",
           "mode=duration\n",
           "mode=duration\nhorizon_ms=100\nat -5 slot node echo 1\n",
           "mode=duration\nhorizon_ms=100\nat 5 slot node echo -1\n",
           "mode=duration\nhorizon_ms=100\nat 5 slot node occupy 1\n",
           "mode=physical\nhorizon_ms=100\nat 5 slot node echo 1\n",
           "mode=physical\nhorizon_ms=100\nat 5 slot node occupy 0\n",
           "mode=duration\nhorizon_ms=100\nat 500 slot node echo 1\n",
           "mode=duration\nhorizon_ms=100\nsample_period_ms=0\n",
           "mode=duration\nhorizon_ms=100\ncolour=blue\n",
           "mode=duration\nhorizon_ms=100\nat 5 slot node echo\n",
           "mode=duration\nhorizon_ms=1.5\n",
       })
    CHECK_MESSAGE(error_code([&] { parse_scenario(bad); }) == "E_SCENARIO", bad);
  CHECK(error_code([] { load_scenario("/nonexistent/x.scn"); }) == "E_IO");
}

TEST_CASE("duration mode at the threshold stays vacant") {
  auto tr = simulate(parking_model(), duration_scenario({{0, 300.0}}, 2000));
  auto tl = occupancy_timeline(tr);
  REQUIRE(tl.size() == 1);
  CHECK(tl[0] == StatusChange{0, Status::Vacant});
  CHECK(led(tr, "node.green") == "ON");
  CHECK(led(tr, "node.red") == "OFF");
}

TEST_CASE("empty scenario produces only initialization records") {
  auto tr = simulate(parking_model(), duration_scenario({}, 0));
  CHECK(tr.records.size() == 4);
  for (const auto& r : tr.records) CHECK(r.kind == TraceKind::StateEntered);
  CHECK(occupancy_timeline(tr).empty());
  // No readings yet in duration mode: nothing is sampled.
  auto idle = simulate(parking_model(), duration_scenario({}, 1000));
  CHECK(idle.records.size() == 4);
}

TEST_CASE("arrive/depart scenario timeline") {
  auto tr = simulate(parking_model(), load_scenario(corpus_path("scenario_arrive_depart.scn")));
  auto tl = occupancy_timeline(tr);
  std::vector<StatusChange> expected{{0, Status::Vacant}, {5000, Status::Occupied}, {12000, Status::Vacant}};
  CHECK(tl == expected);
  REQUIRE(tr.indicators.size() == 1);
  CHECK(tr.indicators[0].red_path == "node.red");
  // Clock values are tick multiples and never decrease.
  std::int64_t prev = 0;
  for (const auto& r : tr.records) {
    CHECK(r.clock_us >= prev);
    CHECK(r.clock_us % 100000 == 0);
    prev = r.clock_us;
  }
}

TEST_CASE("stimuli between ticks apply at the next tick") {
  auto s = duration_scenario({{0, 320.0}, {5050, 250.0}}, 6000);
  auto tl = occupancy_timeline(simulate(parking_model(), s));
  REQUIRE(tl.size() == 2);
  CHECK(tl[1] == StatusChange{5100, Status::Occupied});

  SimOptions slow;
  slow.sample_period_ms = 1000;
  CHECK(occupancy_timeline(simulate(parking_model(), s, slow)).size() == 1);  // tick 6000 is past the horizon
  s.horizon_ms = 7000;
  auto coarse = occupancy_timeline(simulate(parking_model(), s, slow));
  REQUIRE(coarse.size() == 2);
  CHECK(coarse[1] == StatusChange{6000, Status::Occupied});
}

TEST_CASE("physical mode with a scaled threshold") {
  auto tr = simulate(parking_model(), load_scenario(corpus_path("scenario_physical.scn")));
  std::vector<StatusChange> expected{{0, Status::Vacant}, {5000, Status::Occupied}, {12000, Status::Vacant}};
  CHECK(occupancy_timeline(tr) == expected);

  // With the default 300 ms threshold every physical echo reads as occupied.
  SimOptions defaults;
  defaults.threshold_ms = 300.0;
  auto all_occupied = occupancy_timeline(simulate(parking_model(), load_scenario(corpus_path("scenario_physical.scn")), defaults));
  REQUIRE(all_occupied.size() == 1);
  CHECK(all_occupied[0].status == Status::Occupied);

  SimOptions bad_speed;
  bad_speed.speed_m_per_s = 0.0;
  CHECK(error_code([&] { simulate(parking_model(), load_scenario(corpus_path("scenario_physical.scn")), bad_speed); }) ==
        "E_DOMAIN");
}

TEST_CASE("simulation is deterministic") {
  auto s = load_scenario(corpus_path("scenario_arrive_depart.scn"));
  auto a = to_canonical_text(simulate(parking_model(), s).records);
  auto b = to_canonical_text(simulate(parking_model(), s).records);
  CHECK(a == b);
}

TEST_CASE("constant echo never oscillates after the first sample") {
  for (double d : {10.0, 299.999, 300.0, 900.0}) {
    auto tr = simulate(parking_model(), duration_scenario({{0, d}}, 3000));
    auto tl = occupancy_timeline(tr);
    REQUIRE(tl.size() == 1);
    CHECK(tl[0].status == (d >= 300.0 ? Status::Vacant : Status::Occupied));
    // Node transitions after t=0 are self loops only.
    for (const auto& r : tr.records)
      if (r.instance == "node" && r.kind == TraceKind::Transition && r.clock_us > 0)
        CHECK(detail_field(r.detail, "from") == detail_field(r.detail, "to"));
  }
}

TEST_CASE("threshold boundary holds for any configured threshold") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pick(1.0, 5000.0);
  for (int i = 0; i < 25; ++i) {
    double th = std::round(pick(rng) * 1000.0) / 1000.0;
    SimOptions o;
    o.threshold_ms = th;
    auto at = occupancy_timeline(simulate(parking_model(), duration_scenario({{0, th}}, 100), o));
    auto below = occupancy_timeline(simulate(parking_model(), duration_scenario({{0, th - 0.001}}, 100), o));
    REQUIRE(at.size() == 1);
    REQUIRE(below.size() == 1);
    CHECK(at[0].status == Status::Vacant);
    CHECK(below[0].status == Status::Occupied);
  }
}

TEST_CASE("unbound slots and sensors are rejected") {
  auto s = duration_scenario({{0, 1.0}}, 100);
  s.stimuli[0].slot = "garage";
  CHECK(error_code([&] { simulate(parking_model(), s); }) == "E_UNBOUND_SENSOR");

  auto lonely = load_model(R"(
    component Probe {
      generic event ping does sense;
      generic action sense;
      initial state S;
    }
    instance probe : Probe;
  )").model;
  CHECK(error_code([&] { simulate(lonely, duration_scenario({}, 100)); }) == "E_UNBOUND_SENSOR");
}

TEST_CASE("occupancy timeline flags both LEDs on") {
  TimedTrace tr;
  tr.indicators.push_back({1, 2, "n.red", "n.green"});
  tr.records.push_back({0, 0, "n.red", TraceKind::StateEntered, "state=ON"});
  tr.records.push_back({1, 0, "n.green", TraceKind::StateEntered, "state=ON"});
  CHECK(error_code([&] { occupancy_timeline(tr); }) == "E_TRACE");

  // Transient overlap inside one instant is fine once the instant settles.
  TimedTrace ok;
  ok.indicators = tr.indicators;
  ok.records.push_back({0, 0, "n.green", TraceKind::StateEntered, "state=ON"});
  ok.records.push_back({1, 1000, "n.red", TraceKind::StateEntered, "state=ON"});
  ok.records.push_back({2, 1000, "n.green", TraceKind::StateExited, "state=ON"});
  ok.records.push_back({3, 1000, "n.green", TraceKind::StateEntered, "state=OFF"});
  std::vector<StatusChange> expected{{0, Status::Vacant}, {1, Status::Occupied}};
  CHECK(occupancy_timeline(ok) == expected);
}

TEST_CASE("step limit surfaces as an error") {
  SimOptions o;
  o.max_steps = 2;
  CHECK(error_code([&] { simulate(parking_model(), duration_scenario({{0, 1.0}}, 100), o); }) == "E_STEP_LIMIT");
}
