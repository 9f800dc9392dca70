#include <doctest.h>

#include <cmath>

#include "gridattack/case_io.hpp"
#include "gridattack/components.hpp"
#include "gridattack/network.hpp"
#include "gridattack/power_flow.hpp"
#include "gridattack/system_model.hpp"
#include "oracles.hpp"

using namespace gridattack;

namespace {

core::MachineParams test_machine() {
  core::MachineParams p;
  p.bus = 1;
  p.sn_mva = 100.0;
  p.xd = 1.8;
  p.xq = 1.7;
  p.xd1 = 0.3;
  p.xq1 = 0.55;
  p.xd2 = 0.25;
  p.xq2 = 0.25;
  p.xl = 0.2;
  p.ra = 0.0025;
  p.td10 = 8.0;
  p.tq10 = 0.4;
  p.td20 = 0.03;
  p.tq20 = 0.05;
  p.h = 6.5;
  p.d = 0.0;
  return p;
}

// analytic steady machine state for terminal (v, theta) and dispatch (pgen, qgen)
Eigen::VectorXd settle_machine(const core::MachineParams& p, double v, double theta,
                               double pgen, double qgen, double& efd, double& pm) {
  const core::Complex vbar = std::polar(v, theta);
  const core::Complex ibar = std::conj(core::Complex(pgen, qgen) / vbar);
  const double delta = std::arg(vbar + core::Complex(p.ra, p.xq) * ibar);
  const core::Complex rot = std::polar(1.0, -(delta - 1.5707963267948966));
  const core::Complex vdq = vbar * rot;
  const core::Complex idq = ibar * rot;
  const double vd = vdq.real(), vq = vdq.imag();
  const double id = idq.real(), iq = idq.imag();
  const double psi2d = vq + p.ra * iq + p.xd2 * id;
  const double psi2q = -vd - p.ra * id + p.xq2 * iq;
  Eigen::VectorXd s(6);
  s[0] = delta;
  s[1] = 1.0;
  s[2] = psi2d + (p.xd1 - p.xd2) * id;  // e1q
  s[3] = psi2q + (p.xq1 - p.xq2) * iq;  // e1d
  s[4] = s[2] - (p.xd1 - p.xl) * id;    // psi_kd
  s[5] = s[3] - (p.xq1 - p.xl) * iq;    // psi_kq
  efd = s[2] + (p.xd - p.xd1) * id;
  pm = psi2d * iq - psi2q * id;
  return s;
}

}  // namespace

TEST_CASE("machine derivatives vanish at an analytic equilibrium") {
  const auto p = test_machine();
  double efd = 0, pm = 0;
  const Eigen::VectorXd s = settle_machine(p, 1.02, 0.1, 0.8, 0.2, efd, pm);
  const Eigen::VectorXd d =
      core::machine_derivatives(p, s, 1.02, 0.1, pm, efd, 2 * M_PI * 60);
  CHECK(d.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("swing equation identity: omega = 1.001 pu gives ddelta/dt = 2*pi*60*0.001") {
  const auto p = test_machine();
  double efd = 0, pm = 0;
  Eigen::VectorXd s = settle_machine(p, 1.0, 0.0, 0.5, 0.1, efd, pm);
  s[1] = 1.001;
  const Eigen::VectorXd d = core::machine_derivatives(p, s, 1.0, 0.0, pm, efd, 2 * M_PI * 60);
  CHECK(d[0] == doctest::Approx(2 * M_PI * 60 * 0.001).epsilon(1e-12));
}

TEST_CASE("machine derivatives reject non-finite input") {
  const auto p = test_machine();
  Eigen::VectorXd s = Eigen::VectorXd::Zero(6);
  s[2] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(core::machine_derivatives(p, s, 1.0, 0.0, 0.5, 1.5, 2 * M_PI * 60),
                  core::InvalidStateError);
}

TEST_CASE("Kundur machines at the solved power flow are an equilibrium") {
  const core::NetworkCase& nc = core::bundled_case();
  const core::PowerFlowSolution pf = sim::solve_power_flow(nc);
  sim::SystemModel model(nc, pf);
  const core::DynamicState s = sim::init_equilibrium(model);
  Eigen::VectorXd f;
  model.f(s.diff, s.alg, sim::Injections::none(4), s.tripped, f);
  CHECK(f.cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("governor at set-point has zero derivatives and scheduled output") {
  core::GovernorParams g;
  g.r = 0.05;
  g.t1 = 0.5;
  g.t2 = 2.1;
  g.t3 = 7.0;
  g.vmax = 1.0;
  g.vmin = 0.0;
  g.pref = 0.7;
  const Eigen::Vector2d st(0.7, 0.7);
  const auto out = core::governor_derivatives(g, st, 1.0, 1.0);
  CHECK(out.dstate.cwiseAbs().maxCoeff() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(out.pm == doctest::Approx(0.7));
}

TEST_CASE("droop arithmetic: +0.01 pu over-frequency with R = 0.05 cuts demand by 0.2 pu") {
  core::GovernorParams g;
  g.r = 0.05;
  g.t1 = 0.5;
  g.t2 = 2.1;
  g.t3 = 7.0;
  g.vmax = 10.0;  // away from limits
  g.vmin = -10.0;
  g.pref = 0.5;
  const Eigen::Vector2d st(0.5, 0.5);
  const auto out = core::governor_derivatives(g, st, 1.01, 1.0);
  // valve demand dropped by 0.01/0.05 = 0.2, so the lag pulls at -0.2/t1
  CHECK(out.dstate[0] == doctest::Approx(-0.2 / g.t1).epsilon(1e-12));
}

TEST_CASE("governor frequency step matches an independent RK4 reference") {
  core::GovernorParams g;
  g.r = 0.05;
  g.t1 = 0.5;
  g.t2 = 2.1;
  g.t3 = 7.0;
  g.vmax = 10.0;
  g.vmin = -10.0;
  g.dt = 0.0;
  g.pref = 0.7;

  // frequency drops 1.0 -> 0.99 at t = 0, held 10 s
  auto rhs = [&g](double, const Eigen::VectorXd& x) {
    const auto out = core::governor_derivatives(g, Eigen::Vector2d(x[0], x[1]), 0.99, 1.0);
    return Eigen::VectorXd(out.dstate);
  };
  Eigen::VectorXd x0(2);
  x0 << 0.7, 0.7;
  const Eigen::VectorXd ref = oracles::rk4_integrate(rhs, x0, 0.0, 10.0, 1e-4);

  // trapezoidal on the same 2-state ODE via repeated small steps of the
  // library derivative (self-consistent fine integration)
  Eigen::VectorXd x = x0;
  const double h = 1e-4;
  for (int k = 0; k < 100000; ++k) {
    const auto d1 = core::governor_derivatives(g, Eigen::Vector2d(x[0], x[1]), 0.99, 1.0);
    Eigen::VectorXd xp = x + h * d1.dstate;
    const auto d2 = core::governor_derivatives(g, Eigen::Vector2d(xp[0], xp[1]), 0.99, 1.0);
    x += h / 2 * (d1.dstate + d2.dstate);
  }
  CHECK((x - ref).cwiseAbs().maxCoeff() < 1e-6);

  // settle far past the reheat constant: droop adds 0.01/0.05 = 0.2
  const Eigen::VectorXd settled = oracles::rk4_integrate(rhs, ref, 10.0, 80.0, 1e-3);
  const auto final_out =
      core::governor_derivatives(g, Eigen::Vector2d(settled[0], settled[1]), 0.99, 1.0);
  CHECK(final_out.pm == doctest::Approx(0.9).epsilon(1e-3));
}

TEST_CASE("droop linearity: steady-state Pm change equals -dw/R away from limits") {
  core::GovernorParams g;
  g.r = 0.04;
  g.t1 = 0.4;
  g.t2 = 1.5;
  g.t3 = 6.0;
  g.vmax = 10.0;
  g.vmin = -10.0;
  g.pref = 0.6;
  for (double dw : {-0.004, -0.001, 0.002, 0.005}) {
    const double pd = g.pref - dw / g.r;
    const Eigen::Vector2d st(pd, pd);  // settled
    const auto out = core::governor_derivatives(g, st, 1.0 + dw, 1.0);
    CHECK(out.dstate.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(out.pm - g.pref == doctest::Approx(-dw / g.r).epsilon(1e-6));
  }
}

TEST_CASE("exciter at set-point has zero derivatives") {
  core::ExciterParams e;
  e.vref = 1.05 + (1.0 * 1.8) / e.ka;  // ke*efd/ka with efd = 1.8
  Eigen::Vector3d st(1.8, 1.8, 1.8);   // vr = ke*efd, xf = efd
  const auto out = core::exciter_derivatives(e, st, 1.05, e.vref, 0.0);
  CHECK(out.dstate.cwiseAbs().maxCoeff() < 1e-12);
  CHECK(out.efd == doctest::Approx(1.8));
}

TEST_CASE("summing junction is affine in v_pss") {
  core::ExciterParams e;
  e.vref = 1.0;
  const Eigen::Vector3d st(1.5, 1.5, 1.5);
  const auto base = core::exciter_derivatives(e, st, 1.0, e.vref, 0.0);
  const auto plus = core::exciter_derivatives(e, st, 1.0, e.vref, 0.05);
  const auto minus = core::exciter_derivatives(e, st, 1.0, e.vref, -0.05);
  // regulator input shifts by exactly ka*v_pss/ta on the vr derivative
  CHECK(plus.dstate[0] - base.dstate[0] == doctest::Approx(e.ka * 0.05 / e.ta).epsilon(1e-12));
  // symmetric about the v_pss = 0 output
  CHECK(plus.dstate[0] + minus.dstate[0] == doctest::Approx(2 * base.dstate[0]).epsilon(1e-12));
}

TEST_CASE("exciter voltage step matches an independent RK4 reference") {
  core::ExciterParams e;
  e.vref = 1.0 + 1.8 / e.ka;
  auto rhs = [&e](double, const Eigen::VectorXd& x) {
    const auto out =
        core::exciter_derivatives(e, Eigen::Vector3d(x[0], x[1], x[2]), 0.95, e.vref, 0.0);
    return Eigen::VectorXd(out.dstate);
  };
  Eigen::VectorXd x0(3);
  x0 << 1.8, 1.8, 1.8;
  const Eigen::VectorXd ref = oracles::rk4_integrate(rhs, x0, 0.0, 5.0, 1e-4);

  Eigen::VectorXd x = x0;
  const double h = 1e-4;
  for (int k = 0; k < 50000; ++k) {
    const auto d1 =
        core::exciter_derivatives(e, Eigen::Vector3d(x[0], x[1], x[2]), 0.95, e.vref, 0.0);
    Eigen::VectorXd xp = x + h * d1.dstate;
    const auto d2 =
        core::exciter_derivatives(e, Eigen::Vector3d(xp[0], xp[1], xp[2]), 0.95, e.vref, 0.0);
    x += h / 2 * (d1.dstate + d2.dstate);
  }
  CHECK((x - ref).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("exciter saturation quadratic fit passes through both points") {
  core::ExciterParams e;
  e.e1 = 3.1;
  e.se1 = 0.33;
  e.e2 = 2.3;
  e.se2 = 0.10;
  CHECK(core::exciter_saturation(e, 3.1) == doctest::Approx(0.33).epsilon(1e-9));
  CHECK(core::exciter_saturation(e, 2.3) == doctest::Approx(0.10).epsilon(1e-9));
  e.se1 = e.se2 = 0.0;
  CHECK(core::exciter_saturation(e, 2.5) == 0.0);
}

TEST_CASE("valve and regulator limits hold along a driven trajectory") {
  core::GovernorParams g;
  g.r = 0.05;
  g.t1 = 0.2;
  g.t2 = 1.0;
  g.t3 = 4.0;
  g.vmax = 0.9;
  g.vmin = 0.1;
  g.pref = 0.5;
  Eigen::Vector2d x(0.5, 0.5);
  const double h = 1e-3;
  for (int k = 0; k < 20000; ++k) {
    const double w = 1.0 + 0.05 * std::sin(3.0 * k * h);  // far beyond droop range
    const auto out = core::governor_derivatives(g, x, w, 1.0);
    x += h * out.dstate;
    CHECK(x[0] >= g.vmin - 1e-9);
    CHECK(x[0] <= g.vmax + 1e-9);
  }
}

TEST_CASE("network mismatch: two-bus no-load case is balanced at flat voltage") {
  core::NetworkCase nc;
  nc.buses.push_back({1, 230.0, core::BusType::Slack, 1, 0, 0, 0, 0, 1.0});
  nc.buses.push_back({2, 230.0, core::BusType::PQ, 1, 0, 0, 0, 0, 1.0});
  nc.branches.push_back({1, 2, 0.01, 0.1, 0.0});

  Eigen::VectorXd alg(4);
  alg << 1.0, 0.0, 1.0, 0.0;
  const Eigen::VectorXd mm =
      core::network_mismatch(nc, alg, {}, Eigen::VectorXd::Ones(2));
  CHECK(mm.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("network mismatch vanishes at the Kundur power flow") {
  const core::NetworkCase& nc = core::bundled_case();
  const core::PowerFlowSolution pf = sim::solve_power_flow(nc);
  Eigen::VectorXd alg(2 * nc.buses.size());
  for (std::size_t i = 0; i < nc.buses.size(); ++i) {
    alg[2 * i] = pf.v[i];
    alg[2 * i + 1] = pf.theta[i];
  }
  std::vector<core::Complex> inj;
  for (std::size_t m = 0; m < nc.machines.size(); ++m) {
    const int bi = nc.bus_index(nc.machines[m].bus);
    const core::Complex vbar = std::polar(pf.v[bi], pf.theta[bi]);
    inj.push_back(std::conj(core::Complex(pf.p_gen[m], pf.q_gen[m]) / vbar));
  }
  const Eigen::VectorXd mm = core::network_mismatch(nc, alg, inj, pf.v);
  CHECK(mm.cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("angle perturbation produces residual only at the bus and its neighbors") {
  const core::NetworkCase& nc = core::bundled_case();
  const core::PowerFlowSolution pf = sim::solve_power_flow(nc);
  Eigen::VectorXd alg(2 * nc.buses.size());
  for (std::size_t i = 0; i < nc.buses.size(); ++i) {
    alg[2 * i] = pf.v[i];
    alg[2 * i + 1] = pf.theta[i];
  }
  std::vector<core::Complex> inj;
  for (std::size_t m = 0; m < nc.machines.size(); ++m) {
    const int bi = nc.bus_index(nc.machines[m].bus);
    const core::Complex vbar = std::polar(pf.v[bi], pf.theta[bi]);
    inj.push_back(std::conj(core::Complex(pf.p_gen[m], pf.q_gen[m]) / vbar));
  }
  const int poke = nc.bus_index(6);  // adjacent to buses 2 (transformer), 5 and 7
  alg[2 * poke + 1] += 0.1;
  const Eigen::VectorXd mm = core::network_mismatch(nc, alg, inj, pf.v);
  for (std::size_t i = 0; i < nc.buses.size(); ++i) {
    const bool neighbor = nc.buses[i].id == 2 || nc.buses[i].id == 5 ||
                          nc.buses[i].id == 6 || nc.buses[i].id == 7;
    const double r = std::hypot(mm[2 * i], mm[2 * i + 1]);
    if (neighbor) {
      CHECK(r > 1e-3);
    } else {
      CHECK(r < 1e-9);
    }
  }
}

TEST_CASE("case validation rejects structural defects") {
  core::NetworkCase nc = core::bundled_case();
  SUBCASE("two slack buses") {
    nc.buses[1].type = core::BusType::Slack;
    CHECK_THROWS_AS(nc.validate(), core::ModelError);
  }
  SUBCASE("zero-reactance branch") {
    nc.branches[0].x = 0.0;
    CHECK_THROWS_AS(nc.validate(), core::ModelError);
  }
  SUBCASE("disconnected graph") {
    nc.branches.pop_back();  // severs bus 10 (G3 transformer was 3-10... keep generic)
    nc.branches.pop_back();
    CHECK_THROWS_AS(nc.validate(), core::ModelError);
  }
  SUBCASE("machine on unknown bus") {
    nc.machines[0].bus = 99;
    CHECK_THROWS_AS(nc.validate(), core::ModelError);
  }
  SUBCASE("reactance ordering") {
    nc.machines[0].xd2 = 0.19;  // below xl
    CHECK_THROWS_AS(nc.validate(), core::ModelError);
  }
}
