// Independent reference implementations used only to pin expected values in
// tests. Deliberately naive and kept apart from the library's solver paths.
#ifndef GRIDATTACK_TESTS_ORACLES_HPP_
#define GRIDATTACK_TESTS_ORACLES_HPP_

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

#include "gridattack/network.hpp"
#include "gridattack/types.hpp"

namespace oracles {

// Classic RK4 at a fixed small step.
inline Eigen::VectorXd rk4_integrate(
    const std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>& f,
    Eigen::VectorXd x, double t0, double t1, double dt) {
  double t = t0;
  while (t < t1 - 1e-12) {
    const double h = std::min(dt, t1 - t);
    const Eigen::VectorXd k1 = f(t, x);
    const Eigen::VectorXd k2 = f(t + h / 2, x + h / 2 * k1);
    const Eigen::VectorXd k3 = f(t + h / 2, x + h / 2 * k2);
    const Eigen::VectorXd k4 = f(t + h, x + h * k3);
    x += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    t += h;
  }
  return x;
}

// Gauss-Seidel power flow; independent of the library's Newton solver.
inline Eigen::VectorXcd gauss_seidel_power_flow(const gridattack::core::NetworkCase& nc,
                                                int iters) {
  using gridattack::core::BusType;
  using gridattack::core::Complex;
  const Eigen::MatrixXcd y = gridattack::core::build_admittance(nc);
  const int n = static_cast<int>(nc.buses.size());
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) {
    v[i] = (nc.buses[i].type == BusType::PQ) ? Complex(1.0, 0.0)
                                             : Complex(nc.buses[i].v_set, 0.0);
  }
  for (int it = 0; it < iters; ++it) {
    for (int i = 0; i < n; ++i) {
      const auto& b = nc.buses[i];
      if (b.type == BusType::Slack) continue;
      Complex sum = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j != i) sum += y(i, j) * v[j];
      }
      if (b.type == BusType::PQ) {
        const Complex s(b.p_gen - b.p_load, -b.q_load);
        v[i] = (std::conj(s) / std::conj(v[i]) - sum) / y(i, i);
      } else {  // PV: update Q, then angle at fixed magnitude
        const Complex yv = (y.row(i) * v).value();
        const Complex inj = v[i] * std::conj(yv);
        const double q = inj.imag();
        const Complex s(b.p_gen - b.p_load, q);
        Complex vnew = (std::conj(s) / std::conj(v[i]) - sum) / y(i, i);
        v[i] = b.v_set * vnew / std::abs(vnew);
      }
    }
  }
  return v;
}

// Closed-form two-bus feeder: slack 1<0 deg, line z = r + jx, PQ load p + jq
// consumed at bus 2. From V2 conj((V2 - V1)/z) = -(p + jq) with V1 = 1:
// V2 = u + c where c = conj(z) (p + jq) and u = |V2|^2 solves
// u^2 + u (2 Re c - 1) + |c|^2 = 0 (larger root).
inline std::complex<double> two_bus_closed_form(double r, double x, double p, double q) {
  const std::complex<double> c = std::conj(std::complex<double>(r, x)) *
                                 std::complex<double>(p, q);
  const double bterm = 2.0 * c.real() - 1.0;
  const double u = (-bterm + std::sqrt(bterm * bterm - 4.0 * std::norm(c))) / 2.0;
  return u + c;
}

// Plain-loop MLP forward pass (duplicate arithmetic, no Eigen products).
inline std::vector<double> naive_mlp_forward(const std::vector<Eigen::MatrixXd>& w,
                                             const std::vector<Eigen::VectorXd>& b,
                                             const std::vector<double>& input) {
  std::vector<double> act = input;
  for (std::size_t l = 0; l < w.size(); ++l) {
    std::vector<double> next(w[l].rows(), 0.0);
    for (int i = 0; i < w[l].rows(); ++i) {
      double s = b[l][i];
      for (int j = 0; j < w[l].cols(); ++j) s += w[l](i, j) * act[j];
      next[i] = (l + 1 < w.size()) ? std::tanh(s) : s;
    }
    act = std::move(next);
  }
  return act;
}

// Analytic swing linearization of a classical machine on an infinite bus:
// d(delta)' = w0 * dw ; 2H dw' = -K dd - D dw, K = E V cos(d0) / X.
inline Eigen::Matrix2d smib_swing_matrix(double e, double v, double x_total, double delta0,
                                         double h, double d, double omega0) {
  const double k = e * v * std::cos(delta0) / x_total;
  Eigen::Matrix2d a;
  a << 0.0, omega0, -k / (2.0 * h), -d / (2.0 * h);
  return a;
}

}  // namespace oracles

#endif  // GRIDATTACK_TESTS_ORACLES_HPP_
