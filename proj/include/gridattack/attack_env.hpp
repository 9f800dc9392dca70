#ifndef GRIDATTACK_ATTACK_ENV_HPP_
#define GRIDATTACK_ATTACK_ENV_HPP_

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "gridattack/integrator.hpp"
#include "gridattack/protection.hpp"
#include "gridattack/scenario.hpp"
#include "gridattack/system_model.hpp"

namespace gridattack::env {

// Affine map from raw policy outputs in [-1,1]^n (clamped) onto the physical
// injection bounds; raw = -1/+1 attains the bounds exactly.
Eigen::VectorXd map_action(const Eigen::VectorXd& raw, const std::vector<InjectionPoint>& points);

// Local observation: per targeted machine (ascending bus id) the voltage
// offset from 1 pu when a voltage-kind point targets it, then frequency
// offset from nominal (Hz) and window ROCOF (Hz/s); a normalized episode-time
// feature is appended last.
Eigen::VectorXd build_observation(const core::Measurements& meas, const Scenario& scenario,
                                  const std::vector<int>& point_machine_idx,
                                  const std::vector<int>& observed_machine_idx,
                                  double episode_seconds);

// Frequency-fluctuation reward over ALL generators: sum of gamma1*rocof^2
// (Hz/s) plus gamma2 per tripped generator.
double compute_reward(const core::Measurements& meas, const prot::TripReport& report,
                      double gamma1, double gamma2);

struct StepResult {
  Eigen::VectorXd observation;
  double reward = 0.0;
  bool done = false;
  bool collapsed = false;
  prot::TripReport trips;
  core::Measurements measurements;
  Eigen::VectorXd injected;  // physical values, one per injection point
};

// Episodic environment around one simulator instance. Single-threaded;
// create one instance per parallel rollout worker.
class AttackEnv {
 public:
  AttackEnv(const core::NetworkCase& nc, const Scenario& scenario, double internal_step = 0.01);

  int observation_dim() const;
  int action_dim() const { return static_cast<int>(scenario_.points.size()); }
  const Scenario& scenario() const { return scenario_; }
  const sim::SystemModel& model() const { return *model_; }

  Eigen::VectorXd reset(std::uint64_t seed = 0);
  StepResult step(const Eigen::VectorXd& raw_action);
  bool done() const { return done_; }
  int steps_taken() const { return step_count_; }
  const core::DynamicState& state() const { return state_; }

 private:
  Eigen::VectorXd observe(const core::Measurements& meas) const;

  Scenario scenario_;
  std::unique_ptr<sim::SystemModel> model_;
  std::unique_ptr<sim::TrapezoidalDae> integrator_;
  core::DynamicState equilibrium_;
  core::DynamicState state_;
  prot::TripReport episode_trips_;
  std::vector<int> point_machine_idx_;     // machine index per injection point
  std::vector<int> observed_machine_idx_;  // sorted unique targeted machines
  double internal_step_;
  int step_count_ = 0;
  bool done_ = true;
  bool collapsed_ = false;
};

}  // namespace gridattack::env

#endif  // GRIDATTACK_ATTACK_ENV_HPP_
