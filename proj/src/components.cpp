#include "gridattack/components.hpp"
#include <algorithm>

#include <cmath>

#include "gridattack/errors.hpp"

namespace gridattack::core {

namespace {

bool all_finite(const Eigen::Ref<const Eigen::VectorXd>& v) {
  return v.allFinite();
}

}  // namespace

MachineParams to_system_base(const MachineParams& p, double system_mva) {
  const double k = system_mva / p.sn_mva;
  MachineParams s = p;
  s.xd *= k;
  s.xq *= k;
  s.xd1 *= k;
  s.xq1 *= k;
  s.xd2 *= k;
  s.xq2 *= k;
  s.xl *= k;
  s.ra *= k;
  s.h /= k;  // stored energy is base-invariant
  s.d /= k;
  s.sn_mva = system_mva;
  return s;
}

GovernorParams to_system_base(const GovernorParams& p, double machine_mva, double system_mva) {
  const double k = system_mva / machine_mva;
  GovernorParams s = p;
  s.r *= k;
  s.dt /= k;
  s.vmax /= k;
  s.vmin /= k;
  s.pref /= k;
  return s;
}

double exciter_saturation(const ExciterParams& p, double efd) {
  if (p.se1 == 0.0 && p.se2 == 0.0) return 0.0;
  // Se(E) = B (E - A)^2 / E through (e1, se1), (e2, se2)
  const double sq = std::sqrt((p.se1 * p.e1) / (p.se2 * p.e2));
  const double a = (p.e2 * sq - p.e1) / (sq - 1.0);
  const double b = p.se1 * p.e1 / ((p.e1 - a) * (p.e1 - a));
  if (efd <= 0.0) return 0.0;
  const double e = efd - a;
  return e > 0.0 ? b * e * e / efd : 0.0;
}

StatorSolution machine_stator(const MachineParams& p,
                              const Eigen::Ref<const Eigen::VectorXd>& state6,
                              double v, double theta) {
  const double delta = state6[0];
  const double e1q = state6[2];
  const double e1d = state6[3];
  const double psi_kd = state6[4];
  const double psi_kq = state6[5];

  const double gd1 = (p.xd2 - p.xl) / (p.xd1 - p.xl);
  const double gq1 = (p.xq2 - p.xl) / (p.xq1 - p.xl);

  StatorSolution out;
  out.psi2d = gd1 * e1q + (1.0 - gd1) * psi_kd;
  out.psi2q = gq1 * e1d + (1.0 - gq1) * psi_kq;

  const double vd = v * std::sin(delta - theta);
  const double vq = v * std::cos(delta - theta);

  // [ xd2  ra ] [id]   [ psi2d - vq ]
  // [ ra  -xq2 ] [iq] = [ -vd - psi2q ]
  const double det = -p.xd2 * p.xq2 - p.ra * p.ra;
  const double b1 = out.psi2d - vq;
  const double b2 = -vd - out.psi2q;
  out.id = (-p.xq2 * b1 - p.ra * b2) / det;
  out.iq = (-p.ra * b1 + p.xd2 * b2) / det;

  out.te = out.psi2d * out.iq - out.psi2q * out.id;
  out.p = vd * out.id + vq * out.iq;
  out.q = vq * out.id - vd * out.iq;

  // network-frame injection: (id + j iq) * e^{j(delta - pi/2)}
  const Complex rot = std::polar(1.0, delta - 1.5707963267948966);
  out.i_inj = Complex(out.id, out.iq) * rot;
  return out;
}

Eigen::VectorXd machine_derivatives(const MachineParams& p,
                                    const Eigen::Ref<const Eigen::VectorXd>& state6,
                                    double v, double theta, double pm, double efd,
                                    double omega0) {
  if (!all_finite(state6) || !std::isfinite(v) || !std::isfinite(theta) ||
      !std::isfinite(pm) || !std::isfinite(efd)) {
    throw InvalidStateError("machine_derivatives: non-finite input");
  }
  const double omega = state6[1];
  const double e1q = state6[2];
  const double e1d = state6[3];
  const double psi_kd = state6[4];
  const double psi_kq = state6[5];

  const StatorSolution st = machine_stator(p, state6, v, theta);

  const double gd1 = (p.xd2 - p.xl) / (p.xd1 - p.xl);
  const double gq1 = (p.xq2 - p.xl) / (p.xq1 - p.xl);
  const double gd2 = (p.xd1 - p.xd2) / ((p.xd1 - p.xl) * (p.xd1 - p.xl));
  const double gq2 = (p.xq1 - p.xq2) / ((p.xq1 - p.xl) * (p.xq1 - p.xl));

  const double xad_ifd =
      e1q + (p.xd - p.xd1) * (gd1 * st.id + gd2 * e1q - gd2 * psi_kd);
  const double xaq_i1q =
      e1d + (p.xq - p.xq1) * (gq1 * st.iq + gq2 * e1d - gq2 * psi_kq);

  Eigen::VectorXd d(6);
  d[0] = omega0 * (omega - 1.0);
  d[1] = (pm - st.te - p.d * (omega - 1.0)) / (2.0 * p.h);
  d[2] = (efd - xad_ifd) / p.td10;
  d[3] = -xaq_i1q / p.tq10;
  d[4] = (e1q - psi_kd - (p.xd1 - p.xl) * st.id) / p.td20;
  d[5] = (e1d - psi_kq - (p.xq1 - p.xl) * st.iq) / p.tq20;
  return d;
}

GovernorOutput governor_derivatives(const GovernorParams& p,
                                    const Eigen::Ref<const Eigen::Vector2d>& state2,
                                    double omega_meas, double omega_ref) {
  if (!std::isfinite(omega_meas) || !std::isfinite(omega_ref) || !state2.allFinite()) {
    throw InvalidStateError("governor_derivatives: non-finite input");
  }
  const double x1 = state2[0];
  const double x2 = state2[1];

  const double pd = p.pref + (omega_ref - omega_meas) / p.r;

  GovernorOutput out;
  // non-windup valve limit realized on the lag input: the state stays inside
  // [vmin, vmax] and leaves the bound as soon as the demand returns, without
  // the state-side switching that chatters under a Newton corrector
  out.dstate[0] = (std::clamp(pd, p.vmin, p.vmax) - x1) / p.t1;
  out.dstate[1] = (x1 - x2) / p.t3;
  out.pm = (p.t2 / p.t3) * (x1 - x2) + x2 - p.dt * (omega_meas - 1.0);
  return out;
}

ExciterOutput exciter_derivatives(const ExciterParams& p,
                                  const Eigen::Ref<const Eigen::Vector3d>& state3,
                                  double v_meas, double v_ref, double v_pss) {
  if (!std::isfinite(v_meas) || !std::isfinite(v_ref) || !std::isfinite(v_pss) ||
      !state3.allFinite()) {
    throw InvalidStateError("exciter_derivatives: non-finite input");
  }
  const double vr = state3[0];
  const double efd = state3[1];
  const double xf = state3[2];

  const double feedback = (p.kf / p.tf) * (efd - xf);
  const double verr = v_ref - v_meas + v_pss - feedback;

  ExciterOutput out;
  // non-windup regulator ceiling on the lag input (see governor note)
  out.dstate[0] = (std::clamp(p.ka * verr, p.vrmin, p.vrmax) - vr) / p.ta;
  out.dstate[1] = (vr - (p.ke + exciter_saturation(p, efd)) * efd) / p.te;
  out.dstate[2] = (efd - xf) / p.tf;
  out.efd = efd;
  return out;
}

}  // namespace gridattack::core
