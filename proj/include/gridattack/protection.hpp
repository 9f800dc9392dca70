#ifndef GRIDATTACK_PROTECTION_HPP_
#define GRIDATTACK_PROTECTION_HPP_

#include <optional>
#include <vector>

#include "gridattack/system_model.hpp"
#include "gridattack/types.hpp"

namespace gridattack::prot {

struct RelaySettings {
  double v_low = 0.7;        // pu
  double v_high = 1.3;       // pu
  double w_low = 57.4;       // Hz
  double w_high = 61.7;      // Hz
  double rocof_limit = 1.0;  // Hz/s

  void validate() const;
};

enum class TripCondition { Voltage, Frequency, Rocof };

struct GeneratorTrip {
  bool tripped = false;
  std::vector<TripCondition> conditions;
  std::optional<double> first_trip_time;  // s
};

struct TripReport {
  std::vector<GeneratorTrip> generators;
  bool any() const;
};

// Relay disjunction per generator: trip iff V outside [v_low, v_high] or
// frequency outside [w_low, w_high] or |rocof| > limit. Values exactly on a
// bound do not trip. Pure; no effect on simulation state.
TripReport evaluate_relays(const core::Measurements& meas, const RelaySettings& settings);

// With suppression the state passes through unchanged (trips remain reported
// for the reward). Otherwise tripped machines are latched off: injection
// removed, states frozen, and the algebraic system re-solved on the reduced
// network. Throws SimulationCollapse if the re-solve diverges.
core::DynamicState apply_trips(const sim::SystemModel& model, const core::DynamicState& state,
                               const TripReport& report, bool suppression);

}  // namespace gridattack::prot

#endif  // GRIDATTACK_PROTECTION_HPP_
