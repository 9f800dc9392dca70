#ifndef GRIDATTACK_NETWORK_HPP_
#define GRIDATTACK_NETWORK_HPP_

#include <Eigen/Dense>
#include <vector>

#include "gridattack/types.hpp"

namespace gridattack::core {

// Bus admittance matrix from branches and bus shunts (no loads).
Eigen::MatrixXcd build_admittance(const NetworkCase& nc);

// Admittance with PQ loads folded in as constant impedances evaluated at the
// reference voltages (typically the power-flow solution).
Eigen::MatrixXcd build_dynamic_admittance(const NetworkCase& nc,
                                          const Eigen::VectorXd& load_ref_v);

// Complex current mismatch at every bus: injections - Y*V, flattened
// [re_0, im_0, re_1, im_1, ...]. `alg` is the [V, theta] algebraic vector,
// `machine_bus` maps each injection to its bus position.
Eigen::VectorXd network_mismatch(const Eigen::MatrixXcd& y,
                                 const std::vector<int>& machine_bus,
                                 const std::vector<Complex>& machine_inj,
                                 const Eigen::VectorXd& alg);

// Convenience overload building the loaded admittance from the case.
Eigen::VectorXd network_mismatch(const NetworkCase& nc,
                                 const Eigen::VectorXd& alg,
                                 const std::vector<Complex>& machine_inj,
                                 const Eigen::VectorXd& load_ref_v);

}  // namespace gridattack::core

#endif  // GRIDATTACK_NETWORK_HPP_
