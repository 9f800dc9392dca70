#ifndef GRIDATTACK_SYSTEM_MODEL_HPP_
#define GRIDATTACK_SYSTEM_MODEL_HPP_

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "gridattack/types.hpp"

namespace gridattack::sim {

// Falsified inputs routed to controller attachment points, one slot per
// machine. Substitution slots replace the device's input entirely; v_pss
// adds into the AVR summing junction.
struct Injections {
  std::vector<std::optional<double>> gov_freq;  // pu, governor frequency input
  std::vector<std::optional<double>> gov_wref;  // pu, governor reference
  std::vector<std::optional<double>> avr_v;     // pu, AVR voltage input
  std::vector<double> v_pss;                    // pu, additive PSS channel

  explicit Injections(int n_machines = 0)
      : gov_freq(n_machines), gov_wref(n_machines), avr_v(n_machines),
        v_pss(n_machines, 0.0) {}
  static Injections none(int n_machines) { return Injections(n_machines); }
};

// The assembled DAE: machine/governor/exciter differential equations coupled
// to the network current-balance algebraic equations, all on the system base.
// Immutable after construction except for controller references, which
// init_equilibrium back-solves.
class SystemModel {
 public:
  SystemModel(const core::NetworkCase& nc, const core::PowerFlowSolution& pf);

  int n_machines() const { return static_cast<int>(machines_.size()); }
  int n_buses() const { return static_cast<int>(case_.buses.size()); }
  int n_diff() const { return n_machines() * core::DynamicState::kStatesPerMachine; }
  int n_alg() const { return 2 * n_buses(); }
  double omega0() const { return case_.omega0(); }
  double frequency_hz() const { return case_.frequency_hz; }
  int machine_bus(int m) const { return machine_bus_[m]; }
  const core::NetworkCase& network_case() const { return case_; }
  const core::PowerFlowSolution& power_flow() const { return pf_; }
  const core::MachineParams& machine(int m) const { return machines_[m]; }
  const core::GovernorParams& governor(int m) const { return governors_[m]; }
  const core::ExciterParams& exciter(int m) const { return exciters_[m]; }
  core::GovernorParams& governor(int m) { return governors_[m]; }
  core::ExciterParams& exciter(int m) { return exciters_[m]; }
  const Eigen::MatrixXcd& dynamic_admittance() const { return ydyn_; }

  // Differential right-hand side. Trips freeze the machine's states.
  void f(const Eigen::VectorXd& diff, const Eigen::VectorXd& alg,
         const Injections& inj, const std::vector<std::uint8_t>& tripped,
         Eigen::VectorXd& out) const;

  // Algebraic residual (current mismatch). Tripped machines inject nothing.
  void g(const Eigen::VectorXd& diff, const Eigen::VectorXd& alg,
         const std::vector<std::uint8_t>& tripped, Eigen::VectorXd& out) const;

  // Central-difference Jacobian blocks at (diff, alg); used by the
  // integrator's chord Newton and by the analysis linearization.
  void jacobians(const Eigen::VectorXd& diff, const Eigen::VectorXd& alg,
                 const Injections& inj, const std::vector<std::uint8_t>& tripped,
                 double h, Eigen::MatrixXd& fx, Eigen::MatrixXd& fy,
                 Eigen::MatrixXd& gx, Eigen::MatrixXd& gy) const;

  core::Measurements measurements(const core::DynamicState& s,
                                  const Eigen::VectorXd& rocof_hzps) const;

 private:
  core::NetworkCase case_;
  core::PowerFlowSolution pf_;
  std::vector<core::MachineParams> machines_;    // system base
  std::vector<core::GovernorParams> governors_;  // system base
  std::vector<core::ExciterParams> exciters_;
  std::vector<int> machine_bus_;  // bus position per machine
  Eigen::MatrixXcd ydyn_;
};

// Back-solve machine/controller states so the full DAE residual vanishes at
// the power-flow operating point; sets governor pref and exciter vref on the
// model. Throws InitializationError naming the offending component if a
// required actuation violates its limits.
core::DynamicState init_equilibrium(SystemModel& model);

}  // namespace gridattack::sim

#endif  // GRIDATTACK_SYSTEM_MODEL_HPP_
