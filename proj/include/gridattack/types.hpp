#ifndef GRIDATTACK_TYPES_HPP_
#define GRIDATTACK_TYPES_HPP_

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "gridattack/errors.hpp"

namespace gridattack::core {

using Complex = std::complex<double>;

enum class BusType { Slack, PV, PQ };

struct Bus {
  int id = 0;
  double base_kv = 0.0;
  BusType type = BusType::PQ;
  int area = 1;
  double p_load = 0.0;   // pu on system base
  double q_load = 0.0;   // pu
  double b_shunt = 0.0;  // pu susceptance (capacitive positive)
  double p_gen = 0.0;    // scheduled generation, pu (PV/slack)
  double v_set = 1.0;    // voltage set-point, pu (PV/slack)
};

struct Branch {
  int from = 0;
  int to = 0;
  double r = 0.0;  // pu
  double x = 0.0;  // pu, must be nonzero
  double b = 0.0;  // total line charging, pu
};

// Round-rotor synchronous machine. Reactances/time constants are stored on
// the machine's own MVA base (sn_mva); to_system_base() converts.
struct MachineParams {
  int bus = 0;
  double sn_mva = 0.0;
  double xd = 0.0, xq = 0.0;
  double xd1 = 0.0, xq1 = 0.0;  // transient
  double xd2 = 0.0, xq2 = 0.0;  // subtransient
  double xl = 0.0;
  double ra = 0.0;
  double td10 = 0.0, tq10 = 0.0, td20 = 0.0, tq20 = 0.0;  // seconds
  double h = 0.0;  // inertia, s (on sn_mva)
  double d = 0.0;  // damping, pu
};

// Steam turbine-governor (TGOV1 structure). Droop/limits on machine base.
struct GovernorParams {
  int bus = 0;
  double r = 0.05;          // droop, pu
  double t1 = 0.5;          // governor lag, s
  double t2 = 2.1, t3 = 7.0;  // turbine lead-lag, s
  double vmax = 1.0, vmin = 0.0;  // valve limits, pu
  double dt = 0.0;          // turbine damping, pu
  double wref = 1.0;        // frequency reference, pu
  double pref = 0.0;        // power reference, pu; set by equilibrium init
};

// DC exciter with stabilizing feedback. Voltage-base quantities, no MVA
// conversion needed.
struct ExciterParams {
  int bus = 0;
  double ka = 20.0, ta = 0.055;   // regulator
  double ke = 1.0, te = 0.36;     // exciter
  double kf = 0.125, tf = 1.8;    // stabilizing feedback
  double vrmax = 5.0, vrmin = -5.0;
  double e1 = 0.0, se1 = 0.0, e2 = 0.0, se2 = 0.0;  // saturation pair
  double vref = 1.0;  // voltage set-point, pu; set by equilibrium init
};

struct NetworkCase {
  std::string name;
  double system_mva = 100.0;
  double frequency_hz = 60.0;
  std::vector<Bus> buses;
  std::vector<Branch> branches;
  std::vector<MachineParams> machines;
  std::vector<GovernorParams> governors;
  std::vector<ExciterParams> exciters;

  int bus_index(int bus_id) const;  // position in buses, -1 if absent
  double omega0() const { return 2.0 * 3.14159265358979323846 * frequency_hz; }

  // Throws ModelError on: machine referencing a missing bus, not exactly one
  // slack, disconnected branch graph, any branch with x == 0, or a machine
  // without its governor/exciter.
  void validate() const;
};

// Differential + algebraic state of the assembled system.
//
// Differential layout, per machine (kStatesPerMachine entries):
//   [delta, omega, e1q, e1d, psi_kd, psi_kq, gov_x1, gov_x2, exc_vr, exc_efd, exc_xf]
// delta rad, omega pu; e1q/e1d transient voltages; psi_kd/psi_kq subtransient
// circuit flux states; gov_x1 valve, gov_x2 turbine reheat; exc_vr regulator,
// exc_efd field voltage, exc_xf feedback state.
//
// Algebraic layout, per bus: [V, theta].
struct DynamicState {
  static constexpr int kStatesPerMachine = 11;
  static constexpr int kMachine = 6;   // delta..psi_kq
  static constexpr int kGovernor = 2;  // gov_x1, gov_x2
  static constexpr int kExciter = 3;   // exc_vr, exc_efd, exc_xf

  double t = 0.0;
  Eigen::VectorXd diff;  // n_machines * kStatesPerMachine
  Eigen::VectorXd alg;   // n_buses * 2
  std::vector<std::uint8_t> tripped;  // per machine, latched

  int n_machines() const { return static_cast<int>(tripped.size()); }
  int n_buses() const { return static_cast<int>(alg.size() / 2); }

  double& delta(int m) { return diff[m * kStatesPerMachine + 0]; }
  double& omega(int m) { return diff[m * kStatesPerMachine + 1]; }
  double& e1q(int m) { return diff[m * kStatesPerMachine + 2]; }
  double& e1d(int m) { return diff[m * kStatesPerMachine + 3]; }
  double& psi_kd(int m) { return diff[m * kStatesPerMachine + 4]; }
  double& psi_kq(int m) { return diff[m * kStatesPerMachine + 5]; }
  double& gov_x1(int m) { return diff[m * kStatesPerMachine + 6]; }
  double& gov_x2(int m) { return diff[m * kStatesPerMachine + 7]; }
  double& exc_vr(int m) { return diff[m * kStatesPerMachine + 8]; }
  double& exc_efd(int m) { return diff[m * kStatesPerMachine + 9]; }
  double& exc_xf(int m) { return diff[m * kStatesPerMachine + 10]; }
  double delta(int m) const { return diff[m * kStatesPerMachine + 0]; }
  double omega(int m) const { return diff[m * kStatesPerMachine + 1]; }

  double& bus_v(int b) { return alg[2 * b]; }
  double& bus_theta(int b) { return alg[2 * b + 1]; }
  double bus_v(int b) const { return alg[2 * b]; }
  double bus_theta(int b) const { return alg[2 * b + 1]; }
};

struct PowerFlowSolution {
  Eigen::VectorXd v;      // pu, per bus (case order)
  Eigen::VectorXd theta;  // rad
  Eigen::VectorXd p_gen;  // pu, per machine (case order)
  Eigen::VectorXd q_gen;  // pu, per machine
  double slack_p = 0.0;   // slack machine absorption, pu
  double mismatch = 0.0;  // final infinity-norm
  int iterations = 0;
};

// Measurement snapshot at the end of an action window.
struct Measurements {
  double t = 0.0;
  Eigen::VectorXd gen_v;            // terminal voltage, pu, per machine
  Eigen::VectorXd gen_freq_hz;      // per machine
  Eigen::VectorXd gen_rocof_hzps;   // window-averaged, per machine
  Eigen::VectorXd bus_v;            // pu, per bus
};

}  // namespace gridattack::core

#endif  // GRIDATTACK_TYPES_HPP_
