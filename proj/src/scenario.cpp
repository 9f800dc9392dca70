#include "gridattack/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gridattack/bundled_data.hpp"
#include "gridattack/errors.hpp"

namespace gridattack::env {

using nlohmann::json;

bool is_voltage_kind(InjectionKind k) {
  return k == InjectionKind::AvrVoltageMeasurement || k == InjectionKind::PssOutputSignal;
}

std::string kind_name(InjectionKind k) {
  switch (k) {
    case InjectionKind::GovernorFreqMeasurement: return "governor_freq_measurement";
    case InjectionKind::GovernorFreqReference: return "governor_freq_reference";
    case InjectionKind::AvrVoltageMeasurement: return "avr_voltage_measurement";
    case InjectionKind::PssOutputSignal: return "pss_output_signal";
  }
  return "?";
}

InjectionKind kind_from_name(const std::string& name) {
  if (name == "governor_freq_measurement") return InjectionKind::GovernorFreqMeasurement;
  if (name == "governor_freq_reference") return InjectionKind::GovernorFreqReference;
  if (name == "avr_voltage_measurement") return InjectionKind::AvrVoltageMeasurement;
  if (name == "pss_output_signal") return InjectionKind::PssOutputSignal;
  throw core::ParseError("unknown injection kind '" + name + "'");
}

int Scenario::episode_steps() const {
  return static_cast<int>(std::lround(episode_seconds / ts_seconds));
}

void Scenario::validate(const core::NetworkCase& nc) const {
  relays.validate();
  if (points.empty()) throw core::ModelError("scenario has no injection points");
  if (ts_seconds <= 0 || episode_seconds <= 0) {
    throw core::ModelError("scenario durations must be positive");
  }
  const double ratio = episode_seconds / ts_seconds;
  if (std::abs(ratio - std::lround(ratio)) > 1e-9) {
    throw core::ModelError("episode length must be divisible by the action window");
  }
  for (const InjectionPoint& p : points) {
    if (!(p.lo < p.hi)) throw core::ModelError("injection bounds must satisfy lo < hi");
    bool machine_found = false;
    for (const core::MachineParams& m : nc.machines) {
      if (m.bus == p.machine_bus) machine_found = true;
    }
    if (!machine_found) {
      throw core::ModelError("injection point targets bus " + std::to_string(p.machine_bus) +
                             " which carries no machine");
    }
    // action bounds must sit inside the relay interval so the falsified
    // value alone can never trip protection
    switch (p.kind) {
      case InjectionKind::GovernorFreqMeasurement:
      case InjectionKind::GovernorFreqReference:
        if (p.lo < relays.w_low || p.hi > relays.w_high) {
          throw core::ModelError("frequency injection bounds exceed relay interval");
        }
        break;
      case InjectionKind::AvrVoltageMeasurement:
        if (p.lo < relays.v_low || p.hi > relays.v_high) {
          throw core::ModelError("voltage injection bounds exceed relay interval");
        }
        break;
      case InjectionKind::PssOutputSignal:
        // additive signal; same envelope measured about the 1 pu nominal
        if (p.lo < relays.v_low - 1.0 || p.hi > relays.v_high - 1.0) {
          throw core::ModelError("pss injection bounds exceed relay envelope");
        }
        break;
    }
  }
}

Scenario load_scenario_text(const std::string& json_text, const core::NetworkCase& nc) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw core::ParseError(std::string("scenario JSON: ") + e.what());
  }
  Scenario sc;
  try {
    sc.name = j.at("name").get<std::string>();
    sc.episode_seconds = j.value("episode_seconds", 20.0);
    sc.ts_seconds = j.value("ts_seconds", 0.2);
    sc.gamma1 = j.value("gamma1", 1.0);
    sc.gamma2 = j.value("gamma2", 5.0);
    sc.trip_suppression = j.value("trip_suppression", true);
    if (j.contains("relays")) {
      const auto& jr = j["relays"];
      sc.relays.v_low = jr.value("v_low", sc.relays.v_low);
      sc.relays.v_high = jr.value("v_high", sc.relays.v_high);
      sc.relays.w_low = jr.value("w_low", sc.relays.w_low);
      sc.relays.w_high = jr.value("w_high", sc.relays.w_high);
      sc.relays.rocof_limit = jr.value("rocof_limit", sc.relays.rocof_limit);
    }
    for (const auto& jp : j.at("injection_points")) {
      InjectionPoint p;
      p.kind = kind_from_name(jp.at("kind").get<std::string>());
      p.machine_bus = jp.at("machine_bus").get<int>();
      p.lo = jp.at("lo").get<double>();
      p.hi = jp.at("hi").get<double>();
      sc.points.push_back(p);
    }
  } catch (const json::exception& e) {
    throw core::ParseError(std::string("scenario JSON: ") + e.what());
  }
  sc.validate(nc);
  return sc;
}

Scenario load_scenario_file(const std::string& path, const core::NetworkCase& nc) {
  std::ifstream in(path);
  if (!in) throw core::ParseError("cannot open scenario file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_scenario_text(ss.str(), nc);
}

std::vector<std::string> bundled_scenario_names() {
  std::vector<std::string> names;
  names.reserve(bundled::kScenarioJson.size());
  for (const auto& [name, text] : bundled::kScenarioJson) names.push_back(name);
  return names;
}

const std::string& bundled_scenario_text(const std::string& name) {
  for (const auto& [n, text] : bundled::kScenarioJson) {
    if (n == name) return text;
  }
  throw core::ParseError("no bundled scenario named '" + name + "'");
}

Scenario bundled_scenario(const std::string& name, const core::NetworkCase& nc) {
  return load_scenario_text(bundled_scenario_text(name), nc);
}

}  // namespace gridattack::env
