#include "ciot/sim.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "ciot/frontend.hpp"

namespace ciot::sim {

const char* to_string(Mode m) { return m == Mode::Physical ? "physical" : "duration"; }

const char* to_string(Status s) { return s == Status::Vacant ? "vacant" : "occupied"; }

double echo_duration(double distance_m, double speed_m_per_s) {
  if (!(distance_m > 0.0) || !std::isfinite(distance_m))
    throw Error("E_DOMAIN", "distance must be positive, got " + format_float(distance_m));
  if (!(speed_m_per_s > 0.0) || !std::isfinite(speed_m_per_s))
    throw Error("E_DOMAIN", "speed must be positive, got " + format_float(speed_m_per_s));
  return 2.0 * distance_m / speed_m_per_s * 1000.0;
}

// -- scenarios ---------------------------------------------------------------

namespace {

[[noreturn]] void scenario_error(const std::string& file, int line, const std::string& msg) {
  std::string where = file.empty() ? "<scenario>" : file;
  if (line > 0) where += ":" + std::to_string(line);
  throw Error("E_SCENARIO", where + ": " + msg);
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

std::vector<std::string> words(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

void check_scenario(const Scenario& s) {
  if (s.horizon_ms < 0) throw Error("E_SCENARIO", "horizon_ms must not be negative");
  if (s.sample_period_ms < 1) throw Error("E_SCENARIO", "sample_period_ms must be at least 1");
  if (!(s.floor_distance_m > 0.0)) throw Error("E_SCENARIO", "floor_distance_m must be positive");
  if (s.threshold_ms && !(*s.threshold_ms > 0.0)) throw Error("E_SCENARIO", "threshold_ms must be positive");
  std::int64_t prev = 0;
  for (const auto& st : s.stimuli) {
    if (st.time_ms < 0) throw Error("E_SCENARIO", "stimulus time must not be negative");
    if (st.time_ms < prev) throw Error("E_SCENARIO", "stimuli are not sorted by time");
    if (st.time_ms > s.horizon_ms)
      throw Error("E_SCENARIO", "stimulus at " + std::to_string(st.time_ms) + " ms is beyond the horizon");
    prev = st.time_ms;
    if (st.slot.empty()) throw Error("E_SCENARIO", "stimulus without a slot");
    if (const auto* occ = std::get_if<Occupancy>(&st.change)) {
      if (s.mode != Mode::Physical) throw Error("E_SCENARIO", "occupy/vacate need mode=physical");
      if (occ->present && !(occ->target_distance_m > 0.0))
        throw Error("E_SCENARIO", "target distance must be positive");
    } else {
      if (s.mode != Mode::Duration) throw Error("E_SCENARIO", "echo needs mode=duration");
      double d = std::get<Echo>(st.change).duration_ms;
      if (!(d >= 0.0) || !std::isfinite(d)) throw Error("E_SCENARIO", "echo duration must not be negative");
    }
  }
}

Scenario parse_scenario(std::string_view text, const std::string& file) {
  Scenario s;
  bool have_mode = false, have_horizon = false;
  std::istringstream in{std::string(text)};
  int lineno = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++lineno;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (auto eq = line.find('='); eq != std::string_view::npos && line.substr(0, 3) != "at ") {
      auto key = trim(line.substr(0, eq));
      auto value = trim(line.substr(eq + 1));
      if (key == "mode") {
        if (value == "physical")
          s.mode = Mode::Physical;
        else if (value == "duration")
          s.mode = Mode::Duration;
        else
          scenario_error(file, lineno, "unknown mode '" + std::string(value) + "'");
        have_mode = true;
      } else if (key == "horizon_ms" || key == "sample_period_ms") {
        auto v = parse_number<std::int64_t>(value);
        if (!v) scenario_error(file, lineno, std::string(key) + " must be an integer");
        (key == "horizon_ms" ? s.horizon_ms : s.sample_period_ms) = *v;
        if (key == "horizon_ms") have_horizon = true;
      } else if (key == "name") {
        s.name = std::string(value);
      } else if (key == "floor_distance_m" || key == "threshold_ms") {
        auto v = parse_number<double>(value);
        if (!v) scenario_error(file, lineno, std::string(key) + " must be a number");
        if (key == "floor_distance_m")
          s.floor_distance_m = *v;
        else
          s.threshold_ms = *v;
      } else {
        scenario_error(file, lineno, "unknown header '" + std::string(key) + "'");
      }
      continue;
    }

    auto w = words(line);
    if (w.size() < 5 || w[0] != "at" || w[2] != "slot")
      scenario_error(file, lineno, "expected 'at <ms> slot <path> occupy <m>|vacate|echo <ms>'");
    Stimulus st;
    auto t = parse_number<std::int64_t>(w[1]);
    if (!t) scenario_error(file, lineno, "stimulus time must be an integer number of ms");
    st.time_ms = *t;
    st.slot = w[3];
    const std::string& verb = w[4];
    if (verb == "vacate" && w.size() == 5) {
      st.change = Occupancy{false, 0.0};
    } else if ((verb == "occupy" || verb == "echo") && w.size() == 6) {
      auto v = parse_number<double>(w[5]);
      if (!v) scenario_error(file, lineno, verb + " needs a numeric argument");
      if (verb == "occupy")
        st.change = Occupancy{true, *v};
      else
        st.change = Echo{*v};
    } else {
      scenario_error(file, lineno, "malformed stimulus '" + std::string(line) + "'");
    }
    s.stimuli.push_back(std::move(st));
  }
  if (!have_mode) scenario_error(file, 0, "missing 'mode=' header");
  if (!have_horizon) scenario_error(file, 0, "missing 'horizon_ms=' header");
  try {
    check_scenario(s);
  } catch (const Error& e) {
    scenario_error(file, 0, e.what());
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  auto s = parse_scenario(read_file(path), path.string());
  if (s.name.empty()) s.name = path.stem().string();
  return s;
}

// -- simulation --------------------------------------------------------------

std::vector<SensorBinding> bind_sensors(const RuntimeState& rt) {
  std::vector<SensorBinding> out;
  const Model& m = *rt.model;
  for (std::size_t i = 0; i < rt.instances.size(); ++i) {
    const auto& c = rt.component_of(i);
    auto action = c.find_action("sense");
    if (!action || c.actions[*action].kind != ActionKind::Generic) continue;
    const EventDef* bound = nullptr;
    for (const auto& e : c.events)
      if (e.direction == EventDirection::Generic && e.action == *action) {
        bound = &e;
        break;
      }
    if (!bound)
      throw Error("E_UNBOUND_SENSOR", "sensor '" + rt.instances[i].path + "' has no event bound to 'sense'");
    bool ok = false;
    if (bound->payload)
      for (const auto& f : m.payloads[*bound->payload].fields)
        ok |= f.name == "duration" && !f.type.is_payload() && f.type.prim_type() == PrimType::Float;
    if (!ok)
      throw Error("E_UNBOUND_SENSOR", "sensor event '" + rt.instances[i].path + "." + bound->name +
                                          "' does not carry a float 'duration'");
    out.push_back({i, rt.instances[i].path, bound->name});
  }
  return out;
}

std::vector<IndicatorPair> find_indicators(const RuntimeState& rt) {
  std::vector<IndicatorPair> out;
  for (const auto& parent : rt.instances) {
    std::optional<std::size_t> red, green;
    for (auto child : parent.children) {
      const auto& name = rt.component_of(child).name;
      if (name == "RedLED" && !red) red = child;
      if (name == "GreenLED" && !green) green = child;
    }
    if (red && green) out.push_back({*red, *green, rt.instances[*red].path, rt.instances[*green].path});
  }
  return out;
}

namespace {

bool slot_matches(std::string_view slot, std::string_view path) {
  return path == slot || (path.size() > slot.size() && path.substr(0, slot.size()) == slot &&
                          path[slot.size()] == '.');
}

struct Probe {
  Occupancy occupancy;
  std::optional<double> echo_ms;
};

}  // namespace

TimedTrace simulate(const Model& model, const Scenario& scenario, const SimOptions& options) {
  check_scenario(scenario);
  if (options.max_steps == 0) throw Error("E_ARG", "max_steps must be at least 1");
  const std::int64_t period = options.sample_period_ms.value_or(scenario.sample_period_ms);
  if (period < 1) throw Error("E_SCENARIO", "sample period must be at least 1 ms");
  if (scenario.mode == Mode::Physical) {
    // Validate the speed up front so a bad value fails even without ticks.
    echo_duration(scenario.floor_distance_m, options.speed_m_per_s);
  }

  PropertyOverrides overrides;
  if (auto th = options.threshold_ms ? options.threshold_ms : scenario.threshold_ms)
    overrides["threshold"] = Value(*th);
  RuntimeState rt = instantiate(model, overrides);
  auto sensors = bind_sensors(rt);

  for (const auto& st : scenario.stimuli) {
    bool any = false;
    for (const auto& s : sensors) any |= slot_matches(st.slot, s.path);
    if (!any) throw Error("E_UNBOUND_SENSOR", "no sensor under slot '" + st.slot + "'");
  }

  std::vector<Probe> probes(sensors.size());
  std::size_t next_stimulus = 0;
  for (std::int64_t t = 0; t < scenario.horizon_ms; t += period) {
    rt.clock_us = t * 1000;
    for (; next_stimulus < scenario.stimuli.size() && scenario.stimuli[next_stimulus].time_ms <= t;
         ++next_stimulus) {
      const auto& st = scenario.stimuli[next_stimulus];
      for (std::size_t k = 0; k < sensors.size(); ++k) {
        if (!slot_matches(st.slot, sensors[k].path)) continue;
        if (const auto* occ = std::get_if<Occupancy>(&st.change))
          probes[k].occupancy = *occ;
        else
          probes[k].echo_ms = std::get<Echo>(st.change).duration_ms;
      }
    }
    for (std::size_t k = 0; k < sensors.size(); ++k) {
      std::optional<double> value;
      if (scenario.mode == Mode::Physical) {
        const auto& occ = probes[k].occupancy;
        value = echo_duration(occ.present ? occ.target_distance_m : scenario.floor_distance_m,
                              options.speed_m_per_s);
      } else {
        value = probes[k].echo_ms;
      }
      if (!value) continue;
      const auto& c = rt.component_of(sensors[k].instance);
      const auto& ev = c.events[*c.find_event(sensors[k].event)];
      Record payload = model.zero_record(*ev.payload);
      *payload.find("duration") = Value(*value);
      inject(rt, sensors[k].path, std::nullopt, sensors[k].event, std::move(payload));
      auto r = run_to_quiescence(rt, options.max_steps);
      if (r.step_limit)
        throw Error("E_STEP_LIMIT", "no quiescence within " + std::to_string(options.max_steps) +
                                        " steps at t=" + std::to_string(t) + " ms");
    }
  }

  TimedTrace out;
  out.indicators = find_indicators(rt);
  out.records = std::move(rt.trace);
  out.end_us = scenario.horizon_ms * 1000;
  return out;
}

std::vector<StatusChange> occupancy_timeline(const TimedTrace& trace) {
  std::vector<StatusChange> out;
  if (trace.indicators.empty()) return out;
  const auto& pair = trace.indicators.front();
  bool red_on = false, green_on = false;

  auto close_group = [&](std::int64_t clock_us) {
    if (red_on && green_on)
      throw Error("E_TRACE", "both " + pair.red_path + " and " + pair.green_path + " are ON at t=" +
                                 std::to_string(clock_us / 1000) + " ms");
    if (red_on == green_on) return;
    Status s = green_on ? Status::Vacant : Status::Occupied;
    if (out.empty() || out.back().status != s) out.push_back({clock_us / 1000, s});
  };

  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const auto& r = trace.records[i];
    if (r.kind == TraceKind::StateEntered || r.kind == TraceKind::StateExited) {
      bool is_red = r.instance == pair.red_path, is_green = r.instance == pair.green_path;
      if (is_red || is_green) {
        bool on = r.kind == TraceKind::StateEntered && detail_field(r.detail, "state") == "ON";
        (is_red ? red_on : green_on) = on;
      }
    }
    if (i + 1 == trace.records.size() || trace.records[i + 1].clock_us != r.clock_us) close_group(r.clock_us);
  }
  return out;
}

}  // namespace ciot::sim
