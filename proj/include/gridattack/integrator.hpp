#ifndef GRIDATTACK_INTEGRATOR_HPP_
#define GRIDATTACK_INTEGRATOR_HPP_

#include <Eigen/Dense>

#include "gridattack/system_model.hpp"
#include "gridattack/types.hpp"

namespace gridattack::sim {

// Implicit-trapezoidal integrator over the combined DAE with a chord Newton
// corrector. The iteration matrix is rebuilt lazily: on first use, when the
// corrector converges slowly, and after limiter activity.
class TrapezoidalDae {
 public:
  explicit TrapezoidalDae(const SystemModel& model, double newton_tol = 1e-10,
                          int max_newton_iter = 12);

  // Advance one action window of length ts using internal steps of length h
  // (ts must be an integer multiple of h); injections are held constant
  // (zero-order hold). Returns measurements at the window end with ROCOF
  // averaged across the window.
  core::Measurements integrate_window(core::DynamicState& state,
                                      const Injections& inj, double ts, double h);

  // Single internal step.
  void step(core::DynamicState& state, const Injections& inj, double h);

  // step() with step-halving retries on corrector divergence.
  void advance(core::DynamicState& state, const Injections& inj, double h, int depth);

  // Force an iteration-matrix rebuild on the next step.
  void invalidate() { lu_valid_ = false; }

 private:
  void rebuild(const core::DynamicState& state, const Injections& inj, double h);

  const SystemModel* model_;
  double newton_tol_;
  int max_newton_iter_;
  double jac_h_ = 0.0;
  bool lu_valid_ = false;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  // work storage
  Eigen::VectorXd f0_, f1_, galg_, resid_, z_, dz_;
};

}  // namespace gridattack::sim

#endif  // GRIDATTACK_INTEGRATOR_HPP_
