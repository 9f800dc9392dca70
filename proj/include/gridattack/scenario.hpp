#ifndef GRIDATTACK_SCENARIO_HPP_
#define GRIDATTACK_SCENARIO_HPP_

#include <string>
#include <vector>

#include "gridattack/protection.hpp"
#include "gridattack/types.hpp"

namespace gridattack::env {

enum class InjectionKind {
  GovernorFreqMeasurement,
  GovernorFreqReference,
  AvrVoltageMeasurement,
  PssOutputSignal,
};

bool is_voltage_kind(InjectionKind k);
std::string kind_name(InjectionKind k);
InjectionKind kind_from_name(const std::string& name);

// One compromised controller input. Frequency-kind bounds in Hz, voltage-kind
// bounds in pu. Substitution kinds must keep their bounds inside the relay
// interval so the falsified value alone can never trip the relay; the
// additive PSS kind is bounded the same way relative to nominal (1 pu).
struct InjectionPoint {
  InjectionKind kind = InjectionKind::GovernorFreqMeasurement;
  int machine_bus = 0;
  double lo = 0.0;
  double hi = 0.0;
};

struct Scenario {
  std::string name;
  std::vector<InjectionPoint> points;
  double episode_seconds = 20.0;
  double ts_seconds = 0.2;
  double gamma1 = 1.0;  // s/Hz
  double gamma2 = 5.0;
  prot::RelaySettings relays;
  bool trip_suppression = true;

  int episode_steps() const;
  void validate(const core::NetworkCase& nc) const;
};

Scenario load_scenario_text(const std::string& json_text, const core::NetworkCase& nc);
Scenario load_scenario_file(const std::string& path, const core::NetworkCase& nc);

// Bundled catalog mirroring the case studies.
std::vector<std::string> bundled_scenario_names();
const std::string& bundled_scenario_text(const std::string& name);
Scenario bundled_scenario(const std::string& name, const core::NetworkCase& nc);

}  // namespace gridattack::env

#endif  // GRIDATTACK_SCENARIO_HPP_
