#ifndef GRIDATTACK_COMPONENTS_HPP_
#define GRIDATTACK_COMPONENTS_HPP_

#include <Eigen/Dense>

#include "gridattack/types.hpp"

namespace gridattack::core {

// Rebase machine impedances/inertia from its own MVA base to the system base.
MachineParams to_system_base(const MachineParams& p, double system_mva);
// Rebase droop, damping and valve limits.
GovernorParams to_system_base(const GovernorParams& p, double machine_mva, double system_mva);

// Exciter saturation Se(E) through (e1,se1),(e2,se2) with Se = B(E-A)^2/E.
// Both pairs zero disables saturation.
double exciter_saturation(const ExciterParams& p, double efd);

// Stator quantities solved from the subtransient algebraic equations.
struct StatorSolution {
  double id = 0.0, iq = 0.0;      // machine dq currents, pu
  double psi2d = 0.0, psi2q = 0.0;  // subtransient flux linkages
  double te = 0.0;                // electrical torque, pu
  Complex i_inj;                  // network-frame current injection
  double p = 0.0, q = 0.0;        // terminal injection, pu
};

// Solve the stator for a machine given its 6 differential states and the
// terminal phasor. `state6` = [delta, omega, e1q, e1d, psi_kd, psi_kq].
StatorSolution machine_stator(const MachineParams& p,
                              const Eigen::Ref<const Eigen::VectorXd>& state6,
                              double v, double theta);

// Round-rotor machine state derivatives. Throws InvalidStateError on
// non-finite inputs.
Eigen::VectorXd machine_derivatives(const MachineParams& p,
                                    const Eigen::Ref<const Eigen::VectorXd>& state6,
                                    double v, double theta, double pm, double efd,
                                    double omega0);

struct GovernorOutput {
  Eigen::Vector2d dstate;
  double pm = 0.0;
};

// Governor derivatives; omega_meas is the (possibly falsified) frequency
// input, pu. Valve state anti-windup at [vmin, vmax].
GovernorOutput governor_derivatives(const GovernorParams& p,
                                    const Eigen::Ref<const Eigen::Vector2d>& state2,
                                    double omega_meas, double omega_ref);

struct ExciterOutput {
  Eigen::Vector3d dstate;
  double efd = 0.0;
};

// Exciter derivatives; v_meas is the (possibly falsified) terminal-voltage
// input and v_pss an additive stabilizer-channel signal at the summing
// junction. Regulator anti-windup at [vrmin, vrmax].
ExciterOutput exciter_derivatives(const ExciterParams& p,
                                  const Eigen::Ref<const Eigen::Vector3d>& state3,
                                  double v_meas, double v_ref, double v_pss);

}  // namespace gridattack::core

#endif  // GRIDATTACK_COMPONENTS_HPP_
