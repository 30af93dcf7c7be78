#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ciot/engine.hpp"
#include "ciot/model.hpp"
#include "ciot/trace.hpp"

namespace ciot::sim {

inline constexpr double kDefaultSpeedOfSound = 343.0;  // m/s, dry air at 20 C
inline constexpr double kDefaultFloorDistance = 2.5;   // m, ceiling-mounted sensor
inline constexpr std::int64_t kDefaultSamplePeriodMs = 100;
inline constexpr std::size_t kDefaultMaxSteps = 10000;

enum class Mode { Physical, Duration };

const char* to_string(Mode m);

struct Occupancy {
  bool present = false;
  double target_distance_m = 0.0;
};

struct Echo {
  double duration_ms = 0.0;
};

struct Stimulus {
  std::int64_t time_ms = 0;
  std::string slot;  // instance path, or a prefix of one
  std::variant<Occupancy, Echo> change;
};

struct Scenario {
  std::string name;
  Mode mode = Mode::Duration;
  std::vector<Stimulus> stimuli;
  std::int64_t horizon_ms = 0;
  std::int64_t sample_period_ms = kDefaultSamplePeriodMs;
  double floor_distance_m = kDefaultFloorDistance;
  std::optional<double> threshold_ms;  // SimOptions::threshold_ms takes precedence
};

/// Round-trip time of an echo off a surface `distance_m` away, in ms.
/// Throws Error(E_DOMAIN) unless both inputs are positive and finite.
double echo_duration(double distance_m, double speed_m_per_s);

/// Checks the scenario invariants; throws Error(E_SCENARIO).
void check_scenario(const Scenario& s);

Scenario parse_scenario(std::string_view text, const std::string& file = {});
/// Throws Error(E_IO) or Error(E_SCENARIO).
Scenario load_scenario(const std::filesystem::path& path);

struct SimOptions {
  double speed_m_per_s = kDefaultSpeedOfSound;
  std::optional<double> threshold_ms;  // overrides the `threshold` property
  std::optional<std::int64_t> sample_period_ms;  // overrides the scenario
  std::size_t max_steps = kDefaultMaxSteps;  // per sample tick
};

/// A sensor instance and the generic event that feeds it a measurement.
struct SensorBinding {
  std::size_t instance = 0;
  std::string path;
  std::string event;
};

/// Indicator LED pair of one board instance.
struct IndicatorPair {
  std::size_t red = 0;
  std::size_t green = 0;
  std::string red_path;
  std::string green_path;
};

struct TimedTrace {
  std::vector<TraceRecord> records;
  std::vector<IndicatorPair> indicators;
  std::int64_t end_us = 0;
};

/// Sensors are instances whose component has a generic action named `sense`,
/// fed through the generic event bound to it. Throws Error(E_UNBOUND_SENSOR)
/// when such a component has no event for the action or its payload lacks a
/// float `duration` field.
std::vector<SensorBinding> bind_sensors(const RuntimeState& rt);

/// Indicator pairs: children of one parent whose components are named
/// RedLED and GreenLED.
std::vector<IndicatorPair> find_indicators(const RuntimeState& rt);

/// Runs the scenario against a fresh instantiation of `model`. Throws
/// Error(E_UNBOUND_SENSOR), Error(E_STEP_LIMIT) or engine errors.
TimedTrace simulate(const Model& model, const Scenario& scenario, const SimOptions& options = {});

enum class Status { Vacant, Occupied };

const char* to_string(Status s);

struct StatusChange {
  std::int64_t t_ms = 0;
  Status status = Status::Vacant;
  bool operator==(const StatusChange&) const = default;
};

/// Occupancy status changes of the first indicator pair, read from the
/// LED state records at the end of each clock instant. Throws Error(E_TRACE)
/// when both LEDs are ON at once.
std::vector<StatusChange> occupancy_timeline(const TimedTrace& trace);

}  // namespace ciot::sim
