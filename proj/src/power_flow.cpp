#include "gridattack/power_flow.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "gridattack/errors.hpp"
#include "gridattack/network.hpp"

namespace gridattack::sim {

using core::BusType;
using core::Complex;
using core::NetworkCase;
using core::PowerFlowSolution;

namespace {

// Bus power injections P_i + jQ_i = V_i * conj(sum_j Y_ij V_j).
void bus_injections(const Eigen::MatrixXcd& y, const Eigen::VectorXd& v,
                    const Eigen::VectorXd& th, Eigen::VectorXd& p, Eigen::VectorXd& q) {
  const int n = static_cast<int>(v.size());
  Eigen::VectorXcd vb(n);
  for (int i = 0; i < n; ++i) vb[i] = std::polar(v[i], th[i]);
  const Eigen::VectorXcd s = vb.array() * (y * vb).conjugate().array();
  p = s.real();
  q = s.imag();
}

}  // namespace

PowerFlowSolution solve_power_flow(const NetworkCase& nc, double tol, int max_iter) {
  nc.validate();
  const int n = static_cast<int>(nc.buses.size());
  const Eigen::MatrixXcd y = core::build_admittance(nc);

  // unknown ordering: theta for all non-slack, then V for PQ
  std::vector<int> th_idx, v_idx;
  for (int i = 0; i < n; ++i) {
    if (nc.buses[i].type != BusType::Slack) th_idx.push_back(i);
    if (nc.buses[i].type == BusType::PQ) v_idx.push_back(i);
  }
  const int nth = static_cast<int>(th_idx.size());
  const int nv = static_cast<int>(v_idx.size());

  Eigen::VectorXd v(n), th = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd p_spec(n), q_spec(n);
  for (int i = 0; i < n; ++i) {
    const core::Bus& b = nc.buses[i];
    v[i] = (b.type == BusType::PQ) ? 1.0 : b.v_set;
    p_spec[i] = b.p_gen - b.p_load;
    q_spec[i] = -b.q_load;  // PQ reactive spec; PV/slack rows unused
  }

  Eigen::VectorXd p(n), q(n);
  PowerFlowSolution sol;
  int it = 0;
  double norm = 0.0;
  for (;; ++it) {
    bus_injections(y, v, th, p, q);
    Eigen::VectorXd mism(nth + nv);
    for (int k = 0; k < nth; ++k) mism[k] = p_spec[th_idx[k]] - p[th_idx[k]];
    for (int k = 0; k < nv; ++k) mism[nth + k] = q_spec[v_idx[k]] - q[v_idx[k]];
    norm = mism.size() ? mism.cwiseAbs().maxCoeff() : 0.0;
    if (norm < tol) break;
    if (it >= max_iter) {
      std::ostringstream os;
      os << "power flow did not converge after " << max_iter
         << " iterations; final mismatch " << norm;
      throw std::runtime_error(os.str());
    }

    // Jacobian in polar form: dP/dth, dP/dV, dQ/dth, dQ/dV
    Eigen::MatrixXd jac(nth + nv, nth + nv);
    auto gij = [&](int i, int j) { return y(i, j).real(); };
    auto bij = [&](int i, int j) { return y(i, j).imag(); };
    for (int a = 0; a < nth; ++a) {
      const int i = th_idx[a];
      for (int b = 0; b < nth; ++b) {
        const int j = th_idx[b];
        if (i == j) {
          jac(a, b) = -q[i] - bij(i, i) * v[i] * v[i];
        } else {
          const double tij = th[i] - th[j];
          jac(a, b) = v[i] * v[j] * (gij(i, j) * std::sin(tij) - bij(i, j) * std::cos(tij));
        }
      }
      for (int b = 0; b < nv; ++b) {
        const int j = v_idx[b];
        if (i == j) {
          jac(a, nth + b) = p[i] / v[i] + gij(i, i) * v[i];
        } else {
          const double tij = th[i] - th[j];
          jac(a, nth + b) = v[i] * (gij(i, j) * std::cos(tij) + bij(i, j) * std::sin(tij));
        }
      }
    }
    for (int a = 0; a < nv; ++a) {
      const int i = v_idx[a];
      for (int b = 0; b < nth; ++b) {
        const int j = th_idx[b];
        if (i == j) {
          jac(nth + a, b) = p[i] - gij(i, i) * v[i] * v[i];
        } else {
          const double tij = th[i] - th[j];
          jac(nth + a, b) = -v[i] * v[j] * (gij(i, j) * std::cos(tij) + bij(i, j) * std::sin(tij));
        }
      }
      for (int b = 0; b < nv; ++b) {
        const int j = v_idx[b];
        if (i == j) {
          jac(nth + a, nth + b) = q[i] / v[i] - bij(i, i) * v[i];
        } else {
          const double tij = th[i] - th[j];
          jac(nth + a, nth + b) = v[i] * (gij(i, j) * std::sin(tij) - bij(i, j) * std::cos(tij));
        }
      }
    }

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(jac);
    if (std::abs(lu.determinant()) < 1e-14) {
      throw core::ModelError("power flow Jacobian is singular");
    }
    const Eigen::VectorXd dx = lu.solve(mism);
    if (!dx.allFinite()) throw core::ModelError("power flow Jacobian is singular");
    for (int k = 0; k < nth; ++k) th[th_idx[k]] += dx[k];
    for (int k = 0; k < nv; ++k) v[v_idx[k]] += dx[nth + k];
  }

  sol.v = v;
  sol.theta = th;
  sol.mismatch = norm;
  sol.iterations = it;

  bus_injections(y, v, th, p, q);
  const int nm = static_cast<int>(nc.machines.size());
  sol.p_gen.resize(nm);
  sol.q_gen.resize(nm);
  for (int m = 0; m < nm; ++m) {
    const int i = nc.bus_index(nc.machines[m].bus);
    sol.p_gen[m] = p[i] + nc.buses[i].p_load;
    sol.q_gen[m] = q[i] + nc.buses[i].q_load;
    if (nc.buses[i].type == BusType::Slack) sol.slack_p = sol.p_gen[m];
  }
  return sol;
}

}  // namespace gridattack::sim
