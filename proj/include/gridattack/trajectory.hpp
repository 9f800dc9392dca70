#ifndef GRIDATTACK_TRAJECTORY_HPP_
#define GRIDATTACK_TRAJECTORY_HPP_

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "gridattack/types.hpp"

namespace gridattack::sim {

// One record per action window.
struct TrajectoryStep {
  double t = 0.0;
  core::Measurements meas;
  Eigen::VectorXd injected;  // physical values per injection channel
};

struct Trajectory {
  std::vector<int> bus_ids;                    // CSV column order
  std::vector<int> machine_buses;              // per machine
  std::vector<std::string> injection_labels;   // per injection channel
  std::vector<TrajectoryStep> steps;

  int n_steps() const { return static_cast<int>(steps.size()); }
  // Injected-signal series for one channel (what the spectrum analyzes).
  Eigen::VectorXd injection_series(int channel) const;
};

// CSV export/import. Column order: time_s, v_bus_<id>..., freq_hz_g<bus>...,
// rocof_hzps_g<bus>..., inj_<label>... — stable and documented.
std::string trajectory_to_csv(const Trajectory& traj);
Trajectory trajectory_from_csv(const std::string& csv_text);

}  // namespace gridattack::sim

#endif  // GRIDATTACK_TRAJECTORY_HPP_
