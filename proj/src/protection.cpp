#include "gridattack/protection.hpp"

#include <cmath>

#include "gridattack/errors.hpp"

namespace gridattack::prot {

void RelaySettings::validate() const {
  if (!(v_low < v_high)) throw core::ModelError("relay settings: v_low must be < v_high");
  if (!(w_low < w_high)) throw core::ModelError("relay settings: w_low must be < w_high");
  if (!(rocof_limit > 0)) throw core::ModelError("relay settings: rocof limit must be positive");
}

bool TripReport::any() const {
  for (const GeneratorTrip& g : generators) {
    if (g.tripped) return true;
  }
  return false;
}

TripReport evaluate_relays(const core::Measurements& meas, const RelaySettings& settings) {
  const int nm = static_cast<int>(meas.gen_v.size());
  if (!meas.gen_v.allFinite() || !meas.gen_freq_hz.allFinite() ||
      !meas.gen_rocof_hzps.allFinite()) {
    throw core::InvalidStateError("evaluate_relays: non-finite measurements");
  }
  TripReport report;
  report.generators.resize(nm);
  for (int m = 0; m < nm; ++m) {
    GeneratorTrip& g = report.generators[m];
    // values exactly on a bound do not trip
    if (meas.gen_v[m] < settings.v_low || meas.gen_v[m] > settings.v_high) {
      g.conditions.push_back(TripCondition::Voltage);
    }
    if (meas.gen_freq_hz[m] < settings.w_low || meas.gen_freq_hz[m] > settings.w_high) {
      g.conditions.push_back(TripCondition::Frequency);
    }
    if (std::abs(meas.gen_rocof_hzps[m]) > settings.rocof_limit) {
      g.conditions.push_back(TripCondition::Rocof);
    }
    g.tripped = !g.conditions.empty();
    if (g.tripped) g.first_trip_time = meas.t;
  }
  return report;
}

core::DynamicState apply_trips(const sim::SystemModel& model, const core::DynamicState& state,
                               const TripReport& report, bool suppression) {
  if (suppression || !report.any()) return state;

  core::DynamicState out = state;
  bool changed = false;
  for (std::size_t m = 0; m < report.generators.size(); ++m) {
    if (report.generators[m].tripped && !out.tripped[m]) {
      out.tripped[m] = 1;
      changed = true;
    }
  }
  if (!changed) return out;

  // re-solve the algebraic system on the reduced network
  const int ny = model.n_alg();
  Eigen::VectorXd galg(ny);
  Eigen::MatrixXd fx, fy, gx, gy;
  sim::Injections none = sim::Injections::none(model.n_machines());
  for (int it = 0; it < 30; ++it) {
    model.g(out.diff, out.alg, out.tripped, galg);
    if (galg.cwiseAbs().maxCoeff() < 1e-10) return out;
    model.jacobians(out.diff, out.alg, none, out.tripped, 1e-7, fx, fy, gx, gy);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(gy);
    const Eigen::VectorXd dy = lu.solve(galg);
    if (!dy.allFinite()) break;
    out.alg -= dy;
    if (!out.alg.allFinite()) break;
  }
  throw core::SimulationCollapse("post-trip network re-solve diverged", state.t);
}

}  // namespace gridattack::prot
