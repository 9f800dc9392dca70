#include "gridattack/system_model.hpp"

#include <cmath>
#include <sstream>

#include "gridattack/components.hpp"
#include "gridattack/errors.hpp"
#include "gridattack/network.hpp"

namespace gridattack::sim {

using core::Complex;
using core::DynamicState;

SystemModel::SystemModel(const core::NetworkCase& nc, const core::PowerFlowSolution& pf)
    : case_(nc), pf_(pf) {
  case_.validate();
  const int nm = static_cast<int>(case_.machines.size());
  machines_.reserve(nm);
  governors_.resize(nm);
  exciters_.resize(nm);
  machine_bus_.reserve(nm);
  for (int m = 0; m < nm; ++m) {
    const core::MachineParams& mp = case_.machines[m];
    machines_.push_back(core::to_system_base(mp, case_.system_mva));
    machine_bus_.push_back(case_.bus_index(mp.bus));
    bool gov_found = false, exc_found = false;
    for (const core::GovernorParams& g : case_.governors) {
      if (g.bus == mp.bus) {
        governors_[m] = core::to_system_base(g, mp.sn_mva, case_.system_mva);
        gov_found = true;
      }
    }
    for (const core::ExciterParams& e : case_.exciters) {
      if (e.bus == mp.bus) {
        exciters_[m] = e;  // voltage-base device, no MVA conversion
        exc_found = true;
      }
    }
    if (!gov_found || !exc_found) {
      throw core::ModelError("machine at bus " + std::to_string(mp.bus) +
                             " lacks governor or exciter");
    }
  }
  ydyn_ = core::build_dynamic_admittance(case_, pf_.v);
}

void SystemModel::f(const Eigen::VectorXd& diff, const Eigen::VectorXd& alg,
                    const Injections& inj, const std::vector<std::uint8_t>& tripped,
                    Eigen::VectorXd& out) const {
  const int nm = n_machines();
  const double w0 = omega0();
  out.resize(n_diff());
  for (int m = 0; m < nm; ++m) {
    const int off = m * DynamicState::kStatesPerMachine;
    if (!tripped.empty() && tripped[m]) {
      out.segment<DynamicState::kStatesPerMachine>(off).setZero();
      continue;
    }
    const int bi = machine_bus_[m];
    const double v = alg[2 * bi];
    const double theta = alg[2 * bi + 1];
    const double omega = diff[off + 1];

    const auto state6 = diff.segment<6>(off);
    const Eigen::Vector2d gov_state = diff.segment<2>(off + 6);
    const Eigen::Vector3d exc_state = diff.segment<3>(off + 8);

    const double omega_gov = inj.gov_freq[m].value_or(omega);
    const double wref = inj.gov_wref[m].value_or(governors_[m].wref);
    const core::GovernorOutput gov =
        core::governor_derivatives(governors_[m], gov_state, omega_gov, wref);

    const double v_meas = inj.avr_v[m].value_or(v);
    const core::ExciterOutput exc = core::exciter_derivatives(
        exciters_[m], exc_state, v_meas, exciters_[m].vref, inj.v_pss[m]);

    out.segment<6>(off) =
        core::machine_derivatives(machines_[m], state6, v, theta, gov.pm, exc.efd, w0);
    out.segment<2>(off + 6) = gov.dstate;
    out.segment<3>(off + 8) = exc.dstate;
  }
}

void SystemModel::g(const Eigen::VectorXd& diff, const Eigen::VectorXd& alg,
                    const std::vector<std::uint8_t>& tripped, Eigen::VectorXd& out) const {
  const int nm = n_machines();
  const int nb = n_buses();
  Eigen::VectorXcd vbar(nb);
  for (int i = 0; i < nb; ++i) vbar[i] = std::polar(alg[2 * i], alg[2 * i + 1]);
  Eigen::VectorXcd mm = -(ydyn_ * vbar);
  for (int m = 0; m < nm; ++m) {
    if (!tripped.empty() && tripped[m]) continue;
    const auto state6 = diff.segment<6>(m * DynamicState::kStatesPerMachine);
    const int bi = machine_bus_[m];
    const core::StatorSolution st =
        core::machine_stator(machines_[m], state6, alg[2 * bi], alg[2 * bi + 1]);
    mm[bi] += st.i_inj;
  }
  out.resize(n_alg());
  for (int i = 0; i < nb; ++i) {
    out[2 * i] = mm[i].real();
    out[2 * i + 1] = mm[i].imag();
  }
}

void SystemModel::jacobians(const Eigen::VectorXd& diff, const Eigen::VectorXd& alg,
                            const Injections& inj, const std::vector<std::uint8_t>& tripped,
                            double h, Eigen::MatrixXd& fx, Eigen::MatrixXd& fy,
                            Eigen::MatrixXd& gx, Eigen::MatrixXd& gy) const {
  const int nx = n_diff();
  const int ny = n_alg();
  fx.resize(nx, nx);
  fy.resize(nx, ny);
  gx.resize(ny, nx);
  gy.resize(ny, ny);
  Eigen::VectorXd xp = diff, yp = alg;
  Eigen::VectorXd fplus(nx), fminus(nx), gplus(ny), gminus(ny);
  for (int k = 0; k < nx; ++k) {
    const double save = xp[k];
    xp[k] = save + h;
    f(xp, alg, inj, tripped, fplus);
    g(xp, alg, tripped, gplus);
    xp[k] = save - h;
    f(xp, alg, inj, tripped, fminus);
    g(xp, alg, tripped, gminus);
    xp[k] = save;
    fx.col(k) = (fplus - fminus) / (2.0 * h);
    gx.col(k) = (gplus - gminus) / (2.0 * h);
  }
  for (int k = 0; k < ny; ++k) {
    const double save = yp[k];
    yp[k] = save + h;
    f(diff, yp, inj, tripped, fplus);
    g(diff, yp, tripped, gplus);
    yp[k] = save - h;
    f(diff, yp, inj, tripped, fminus);
    g(diff, yp, tripped, gminus);
    yp[k] = save;
    fy.col(k) = (fplus - fminus) / (2.0 * h);
    gy.col(k) = (gplus - gminus) / (2.0 * h);
  }
}

core::Measurements SystemModel::measurements(const core::DynamicState& s,
                                             const Eigen::VectorXd& rocof_hzps) const {
  const int nm = n_machines();
  const int nb = n_buses();
  core::Measurements meas;
  meas.t = s.t;
  meas.gen_v.resize(nm);
  meas.gen_freq_hz.resize(nm);
  meas.gen_rocof_hzps = rocof_hzps;
  meas.bus_v.resize(nb);
  for (int i = 0; i < nb; ++i) meas.bus_v[i] = s.alg[2 * i];
  for (int m = 0; m < nm; ++m) {
    meas.gen_v[m] = s.alg[2 * machine_bus_[m]];
    meas.gen_freq_hz[m] = frequency_hz() * s.omega(m);
  }
  return meas;
}

core::DynamicState init_equilibrium(SystemModel& model) {
  const core::PowerFlowSolution& pf = model.power_flow();
  const int nm = model.n_machines();
  const int nb = model.n_buses();

  core::DynamicState s;
  s.t = 0.0;
  s.diff.resize(model.n_diff());
  s.alg.resize(model.n_alg());
  s.tripped.assign(nm, 0);
  for (int i = 0; i < nb; ++i) {
    s.alg[2 * i] = pf.v[i];
    s.alg[2 * i + 1] = pf.theta[i];
  }

  for (int m = 0; m < nm; ++m) {
    const core::MachineParams& p = model.machine(m);
    const int bi = model.machine_bus(m);
    const double v = pf.v[bi];
    const double th = pf.theta[bi];
    const Complex vbar = std::polar(v, th);
    const Complex sbar(pf.p_gen[m], pf.q_gen[m]);
    const Complex ibar = std::conj(sbar / vbar);

    // rotor position from the q-axis phasor
    const Complex eq = vbar + Complex(p.ra, p.xq) * ibar;
    const double delta = std::arg(eq);

    const Complex rot = std::polar(1.0, -(delta - 1.5707963267948966));
    const Complex vdq = vbar * rot;
    const Complex idq = ibar * rot;
    const double vd = vdq.real(), vq = vdq.imag();
    const double id = idq.real(), iq = idq.imag();

    const double psi2d = vq + p.ra * iq + p.xd2 * id;
    const double psi2q = -vd - p.ra * id + p.xq2 * iq;

    const double e1q = psi2d + (p.xd1 - p.xd2) * id;
    const double e1d = psi2q + (p.xq1 - p.xq2) * iq;
    const double psi_kd = e1q - (p.xd1 - p.xl) * id;
    const double psi_kq = e1d - (p.xq1 - p.xl) * iq;

    const double efd = e1q + (p.xd - p.xd1) * id;
    const double te = psi2d * iq - psi2q * id;

    s.delta(m) = delta;
    s.omega(m) = 1.0;
    s.e1q(m) = e1q;
    s.e1d(m) = e1d;
    s.psi_kd(m) = psi_kd;
    s.psi_kq(m) = psi_kq;

    core::GovernorParams& gov = model.governor(m);
    if (te > gov.vmax + 1e-12 || te < gov.vmin - 1e-12) {
      std::ostringstream os;
      os << "governor at bus " << model.network_case().machines[m].bus
         << ": scheduled mechanical power " << te << " outside valve limits ["
         << gov.vmin << ", " << gov.vmax << "]";
      throw core::InitializationError(os.str());
    }
    gov.pref = te;
    gov.wref = 1.0;
    s.gov_x1(m) = te;
    s.gov_x2(m) = te;

    core::ExciterParams& exc = model.exciter(m);
    const double vr = (exc.ke + core::exciter_saturation(exc, efd)) * efd;
    if (vr > exc.vrmax + 1e-12 || vr < exc.vrmin - 1e-12) {
      std::ostringstream os;
      os << "exciter at bus " << model.network_case().machines[m].bus
         << ": required regulator output " << vr << " outside [" << exc.vrmin << ", "
         << exc.vrmax << "]";
      throw core::InitializationError(os.str());
    }
    exc.vref = v + vr / exc.ka;
    s.exc_vr(m) = vr;
    s.exc_efd(m) = efd;
    s.exc_xf(m) = efd;
  }
  return s;
}

}  // namespace gridattack::sim
