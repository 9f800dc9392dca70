#ifndef GRIDATTACK_POWER_FLOW_HPP_
#define GRIDATTACK_POWER_FLOW_HPP_

#include "gridattack/types.hpp"

namespace gridattack::sim {

// Newton-Raphson power flow from a flat start. Throws ModelError on a
// singular Jacobian and std::runtime_error with the final mismatch on
// non-convergence.
core::PowerFlowSolution solve_power_flow(const core::NetworkCase& nc,
                                         double tol = 1e-10, int max_iter = 30);

}  // namespace gridattack::sim

#endif  // GRIDATTACK_POWER_FLOW_HPP_
