#include "gridattack/attack_env.hpp"

#include <algorithm>
#include <cmath>

#include "gridattack/errors.hpp"
#include "gridattack/power_flow.hpp"

namespace gridattack::env {

using core::DynamicState;

Eigen::VectorXd map_action(const Eigen::VectorXd& raw,
                           const std::vector<InjectionPoint>& points) {
  if (raw.size() != static_cast<Eigen::Index>(points.size())) {
    throw core::ContractError("map_action: raw action length " + std::to_string(raw.size()) +
                              " != injection point count " + std::to_string(points.size()));
  }
  Eigen::VectorXd out(raw.size());
  for (Eigen::Index i = 0; i < raw.size(); ++i) {
    const double c = std::clamp(raw[i], -1.0, 1.0);
    out[i] = points[i].lo + (c + 1.0) / 2.0 * (points[i].hi - points[i].lo);
  }
  return out;
}

Eigen::VectorXd build_observation(const core::Measurements& meas, const Scenario& scenario,
                                  const std::vector<int>& point_machine_idx,
                                  const std::vector<int>& observed_machine_idx,
                                  double episode_seconds) {
  std::vector<double> features;
  for (int m : observed_machine_idx) {
    bool voltage_observed = false;
    for (std::size_t p = 0; p < scenario.points.size(); ++p) {
      if (point_machine_idx[p] == m && is_voltage_kind(scenario.points[p].kind)) {
        voltage_observed = true;
      }
    }
    if (voltage_observed) features.push_back(meas.gen_v[m] - 1.0);
    features.push_back(meas.gen_freq_hz[m] - 60.0);
    features.push_back(meas.gen_rocof_hzps[m]);
  }
  features.push_back(meas.t / episode_seconds);
  return Eigen::Map<Eigen::VectorXd>(features.data(), static_cast<Eigen::Index>(features.size()));
}

double compute_reward(const core::Measurements& meas, const prot::TripReport& report,
                      double gamma1, double gamma2) {
  double r = 0.0;
  for (Eigen::Index m = 0; m < meas.gen_rocof_hzps.size(); ++m) {
    r += gamma1 * meas.gen_rocof_hzps[m] * meas.gen_rocof_hzps[m];
  }
  for (const prot::GeneratorTrip& g : report.generators) {
    if (g.tripped) r += gamma2;
  }
  return r;
}

AttackEnv::AttackEnv(const core::NetworkCase& nc, const Scenario& scenario,
                     double internal_step)
    : scenario_(scenario), internal_step_(internal_step) {
  scenario_.validate(nc);
  const core::PowerFlowSolution pf = sim::solve_power_flow(nc);
  model_ = std::make_unique<sim::SystemModel>(nc, pf);
  integrator_ = std::make_unique<sim::TrapezoidalDae>(*model_);
  equilibrium_ = sim::init_equilibrium(*model_);
  state_ = equilibrium_;

  for (const InjectionPoint& p : scenario_.points) {
    int idx = -1;
    for (int m = 0; m < model_->n_machines(); ++m) {
      if (nc.machines[m].bus == p.machine_bus) idx = m;
    }
    point_machine_idx_.push_back(idx);
  }
  observed_machine_idx_ = point_machine_idx_;
  std::sort(observed_machine_idx_.begin(), observed_machine_idx_.end());
  observed_machine_idx_.erase(
      std::unique(observed_machine_idx_.begin(), observed_machine_idx_.end()),
      observed_machine_idx_.end());
}

int AttackEnv::observation_dim() const {
  int dim = 1;  // episode-time feature
  for (int m : observed_machine_idx_) {
    bool voltage_observed = false;
    for (std::size_t p = 0; p < scenario_.points.size(); ++p) {
      if (point_machine_idx_[p] == m && is_voltage_kind(scenario_.points[p].kind)) {
        voltage_observed = true;
      }
    }
    dim += voltage_observed ? 3 : 2;
  }
  return dim;
}

Eigen::VectorXd AttackEnv::observe(const core::Measurements& meas) const {
  return build_observation(meas, scenario_, point_machine_idx_, observed_machine_idx_,
                           scenario_.episode_seconds);
}

Eigen::VectorXd AttackEnv::reset(std::uint64_t /*seed*/) {
  state_ = equilibrium_;
  step_count_ = 0;
  done_ = false;
  collapsed_ = false;
  episode_trips_ = prot::TripReport{};
  episode_trips_.generators.resize(model_->n_machines());
  integrator_->invalidate();
  const Eigen::VectorXd zero_rocof = Eigen::VectorXd::Zero(model_->n_machines());
  return observe(model_->measurements(state_, zero_rocof));
}

StepResult AttackEnv::step(const Eigen::VectorXd& raw_action) {
  if (done_) throw core::ContractError("step called on a finished episode; call reset");
  StepResult res;
  res.injected = map_action(raw_action, scenario_.points);

  sim::Injections inj(model_->n_machines());
  for (std::size_t p = 0; p < scenario_.points.size(); ++p) {
    const int m = point_machine_idx_[p];
    const double value = res.injected[static_cast<Eigen::Index>(p)];
    switch (scenario_.points[p].kind) {
      case InjectionKind::GovernorFreqMeasurement:
        inj.gov_freq[m] = value / model_->frequency_hz();
        break;
      case InjectionKind::GovernorFreqReference:
        inj.gov_wref[m] = value / model_->frequency_hz();
        break;
      case InjectionKind::AvrVoltageMeasurement:
        inj.avr_v[m] = value;
        break;
      case InjectionKind::PssOutputSignal:
        inj.v_pss[m] += value;
        break;
    }
  }

  try {
    res.measurements =
        integrator_->integrate_window(state_, inj, scenario_.ts_seconds, internal_step_);
  } catch (const core::IntegrationError&) {
    // unrecoverable corrector failure under attack: terminal for the episode
    collapsed_ = true;
    done_ = true;
    res.done = true;
    res.collapsed = true;
    const Eigen::VectorXd zero_rocof = Eigen::VectorXd::Zero(model_->n_machines());
    res.measurements = model_->measurements(state_, zero_rocof);
    res.trips.generators.resize(model_->n_machines());
    res.observation = observe(res.measurements);
    res.reward = 0.0;
    return res;
  } catch (const core::SimulationCollapse&) {
    collapsed_ = true;
    done_ = true;
    res.done = true;
    res.collapsed = true;
    const Eigen::VectorXd zero_rocof = Eigen::VectorXd::Zero(model_->n_machines());
    res.measurements = model_->measurements(state_, zero_rocof);
    res.trips.generators.resize(model_->n_machines());
    res.observation = observe(res.measurements);
    res.reward = 0.0;
    return res;
  }

  res.trips = prot::evaluate_relays(res.measurements, scenario_.relays);
  for (int m = 0; m < model_->n_machines(); ++m) {
    if (res.trips.generators[m].tripped && !episode_trips_.generators[m].tripped) {
      episode_trips_.generators[m] = res.trips.generators[m];
    }
  }
  if (!scenario_.trip_suppression) {
    try {
      state_ = prot::apply_trips(*model_, state_, res.trips, false);
      integrator_->invalidate();
    } catch (const core::SimulationCollapse&) {
      collapsed_ = true;
      done_ = true;
    }
  }

  res.reward = compute_reward(res.measurements, res.trips, scenario_.gamma1, scenario_.gamma2);
  res.observation = observe(res.measurements);
  ++step_count_;
  if (step_count_ >= scenario_.episode_steps() || collapsed_) done_ = true;
  res.done = done_;
  res.collapsed = collapsed_;
  return res;
}

}  // namespace gridattack::env
