#include "gridattack/network.hpp"

#include <cmath>

#include "gridattack/errors.hpp"

namespace gridattack::core {

Eigen::MatrixXcd build_admittance(const NetworkCase& nc) {
  const int n = static_cast<int>(nc.buses.size());
  Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(n, n);
  for (const Branch& br : nc.branches) {
    const int i = nc.bus_index(br.from);
    const int j = nc.bus_index(br.to);
    if (i < 0 || j < 0) throw ModelError("branch references unknown bus");
    if (br.x == 0.0) throw ModelError("branch with zero reactance");
    const Complex ys = 1.0 / Complex(br.r, br.x);
    const Complex ysh(0.0, br.b / 2.0);
    y(i, i) += ys + ysh;
    y(j, j) += ys + ysh;
    y(i, j) -= ys;
    y(j, i) -= ys;
  }
  for (int i = 0; i < n; ++i) {
    y(i, i) += Complex(0.0, nc.buses[i].b_shunt);
    if (y(i, i) == Complex(0.0, 0.0)) {
      throw ModelError("isolated bus " + std::to_string(nc.buses[i].id) +
                       ": singular admittance structure");
    }
  }
  return y;
}

Eigen::MatrixXcd build_dynamic_admittance(const NetworkCase& nc,
                                          const Eigen::VectorXd& load_ref_v) {
  Eigen::MatrixXcd y = build_admittance(nc);
  const int n = static_cast<int>(nc.buses.size());
  for (int i = 0; i < n; ++i) {
    const Bus& b = nc.buses[i];
    if (b.p_load == 0.0 && b.q_load == 0.0) continue;
    const double v2 = load_ref_v[i] * load_ref_v[i];
    // constant-impedance conversion: y_load = (P - jQ) / V_ref^2
    y(i, i) += Complex(b.p_load, -b.q_load) / v2;
  }
  return y;
}

Eigen::VectorXd network_mismatch(const Eigen::MatrixXcd& y,
                                 const std::vector<int>& machine_bus,
                                 const std::vector<Complex>& machine_inj,
                                 const Eigen::VectorXd& alg) {
  const int n = static_cast<int>(y.rows());
  Eigen::VectorXcd vbar(n);
  for (int i = 0; i < n; ++i) vbar[i] = std::polar(alg[2 * i], alg[2 * i + 1]);
  Eigen::VectorXcd mm = -(y * vbar);
  for (std::size_t m = 0; m < machine_bus.size(); ++m) mm[machine_bus[m]] += machine_inj[m];
  Eigen::VectorXd out(2 * n);
  for (int i = 0; i < n; ++i) {
    out[2 * i] = mm[i].real();
    out[2 * i + 1] = mm[i].imag();
  }
  return out;
}

Eigen::VectorXd network_mismatch(const NetworkCase& nc, const Eigen::VectorXd& alg,
                                 const std::vector<Complex>& machine_inj,
                                 const Eigen::VectorXd& load_ref_v) {
  const Eigen::MatrixXcd y = build_dynamic_admittance(nc, load_ref_v);
  std::vector<int> mbus;
  mbus.reserve(nc.machines.size());
  for (const MachineParams& m : nc.machines) mbus.push_back(nc.bus_index(m.bus));
  return network_mismatch(y, mbus, machine_inj, alg);
}

}  // namespace gridattack::core
