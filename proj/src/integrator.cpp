#include "gridattack/integrator.hpp"

#include <cmath>

#include "gridattack/errors.hpp"

namespace gridattack::sim {

using core::DynamicState;

TrapezoidalDae::TrapezoidalDae(const SystemModel& model, double newton_tol,
                               int max_newton_iter)
    : model_(&model), newton_tol_(newton_tol), max_newton_iter_(max_newton_iter) {}

void TrapezoidalDae::rebuild(const core::DynamicState& state, const Injections& inj,
                             double h) {
  const int nx = model_->n_diff();
  const int ny = model_->n_alg();
  Eigen::MatrixXd fx, fy, gx, gy;
  model_->jacobians(state.diff, state.alg, inj, state.tripped, 1e-7, fx, fy, gx, gy);
  Eigen::MatrixXd jac(nx + ny, nx + ny);
  jac.topLeftCorner(nx, nx) = Eigen::MatrixXd::Identity(nx, nx) - (h / 2.0) * fx;
  jac.topRightCorner(nx, ny) = -(h / 2.0) * fy;
  jac.bottomLeftCorner(ny, nx) = gx;
  jac.bottomRightCorner(ny, ny) = gy;
  lu_.compute(jac);
  jac_h_ = h;
  lu_valid_ = true;
}

void TrapezoidalDae::step(core::DynamicState& state, const Injections& inj, double h) {
  const int nx = model_->n_diff();
  const int ny = model_->n_alg();

  if (!lu_valid_ || jac_h_ != h) rebuild(state, inj, h);

  model_->f(state.diff, state.alg, inj, state.tripped, f0_);

  // predictor: explicit Euler on x, frozen algebraic
  z_.resize(nx + ny);
  z_.head(nx) = state.diff + h * f0_;
  z_.tail(ny) = state.alg;

  const Eigen::VectorXd x0 = state.diff;
  bool converged = false;
  int rebuilds = 0;
  for (int attempt = 0; attempt < 3 && !converged; ++attempt) {
    for (int it = 0; it < max_newton_iter_; ++it) {
      const Eigen::VectorXd x1 = z_.head(nx);
      const Eigen::VectorXd y1 = z_.tail(ny);
      model_->f(x1, y1, inj, state.tripped, f1_);
      model_->g(x1, y1, state.tripped, galg_);
      resid_.resize(nx + ny);
      resid_.head(nx) = x1 - x0 - (h / 2.0) * (f0_ + f1_);
      resid_.tail(ny) = galg_;
      if (!resid_.allFinite()) break;
      dz_ = lu_.solve(resid_);
      if (!dz_.allFinite()) break;
      z_ -= dz_;
      if (dz_.cwiseAbs().maxCoeff() < newton_tol_) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      if (!z_.allFinite()) {
        // restart the iteration from the last valid point
        z_.head(nx) = x0;
        z_.tail(ny) = state.alg;
      }
      ++rebuilds;
      core::DynamicState probe = state;
      probe.diff = z_.head(nx).allFinite() ? Eigen::VectorXd(z_.head(nx)) : x0;
      probe.alg = z_.tail(ny).allFinite() ? Eigen::VectorXd(z_.tail(ny)) : state.alg;
      rebuild(probe, inj, h);
    }
  }

  if (!converged) {
    lu_valid_ = false;
    // distinguish voltage collapse from plain corrector failure
    bool collapse = !z_.allFinite();
    if (!collapse) {
      for (int i = 0; i < ny / 2; ++i) {
        if (z_[nx + 2 * i] < 0.3) collapse = true;
      }
    }
    if (collapse) {
      throw core::SimulationCollapse("algebraic system collapsed", state.t);
    }
    throw core::IntegrationError("Newton corrector diverged", state.t);
  }

  state.diff = z_.head(nx);
  state.alg = z_.tail(ny);
  state.t += h;

  // final clamp backing the anti-windup derivative logic
  for (int m = 0; m < model_->n_machines(); ++m) {
    const core::GovernorParams& gov = model_->governor(m);
    const core::ExciterParams& exc = model_->exciter(m);
    double& x1 = state.gov_x1(m);
    double& vr = state.exc_vr(m);
    const double x1c = std::clamp(x1, gov.vmin, gov.vmax);
    const double vrc = std::clamp(vr, exc.vrmin, exc.vrmax);
    if (x1c != x1 || vrc != vr) {
      x1 = x1c;
      vr = vrc;
      lu_valid_ = false;  // limiter engaged; chord matrix is stale
    }
  }

  if (rebuilds > 0) lu_valid_ = false;
}

void TrapezoidalDae::advance(core::DynamicState& state, const Injections& inj, double h,
                             int depth) {
  try {
    step(state, inj, h);
  } catch (const core::IntegrationError&) {
    // stiff excursion: halve the step a few times before giving up
    if (depth >= 3) throw;
    advance(state, inj, h / 2.0, depth + 1);
    advance(state, inj, h / 2.0, depth + 1);
  }
}

core::Measurements TrapezoidalDae::integrate_window(core::DynamicState& state,
                                                    const Injections& inj, double ts,
                                                    double h) {
  const double ratio = ts / h;
  const int n_steps = static_cast<int>(std::lround(ratio));
  if (n_steps < 1 || std::abs(ratio - n_steps) > 1e-9) {
    throw core::ContractError("action window must be an integer multiple of the internal step");
  }
  const int nm = model_->n_machines();
  Eigen::VectorXd freq_start(nm);
  for (int m = 0; m < nm; ++m) freq_start[m] = model_->frequency_hz() * state.omega(m);

  for (int k = 0; k < n_steps; ++k) advance(state, inj, h, 0);

  Eigen::VectorXd rocof(nm);
  for (int m = 0; m < nm; ++m) {
    rocof[m] = (model_->frequency_hz() * state.omega(m) - freq_start[m]) / ts;
  }
  return model_->measurements(state, rocof);
}

}  // namespace gridattack::sim
