#include <doctest.h>

#include <cmath>

#include "gridattack/attack_env.hpp"
#include "gridattack/case_io.hpp"
#include "gridattack/integrator.hpp"
#include "gridattack/power_flow.hpp"
#include "gridattack/rng.hpp"

using namespace gridattack;

namespace {

std::vector<env::InjectionPoint> gov_point(double lo, double hi) {
  return {{env::InjectionKind::GovernorFreqMeasurement, 1, lo, hi}};
}

}  // namespace

TEST_CASE("map_action: midpoint, exact bounds and clamping") {
  const auto pts = gov_point(59.3, 60.7);
  CHECK(env::map_action(Eigen::VectorXd::Zero(1), pts)[0] == doctest::Approx(60.0));

  const auto wide = gov_point(57.5, 61.5);
  CHECK(env::map_action(Eigen::VectorXd::Constant(1, -1.0), wide)[0] == doctest::Approx(57.5));
  CHECK(env::map_action(Eigen::VectorXd::Constant(1, 1.0), wide)[0] == doctest::Approx(61.5));

  std::vector<env::InjectionPoint> vp{{env::InjectionKind::AvrVoltageMeasurement, 1, 0.95, 1.15}};
  CHECK(env::map_action(Eigen::VectorXd::Constant(1, 3.0), vp)[0] == doctest::Approx(1.15));
}

TEST_CASE("map_action rejects a length mismatch") {
  const auto pts = gov_point(59.3, 60.7);
  CHECK_THROWS_AS(env::map_action(Eigen::VectorXd::Zero(2), pts), core::ContractError);
}

TEST_CASE("mapped values stay inside bounds for arbitrary raw input") {
  const auto pts = gov_point(57.5, 61.5);
  ppo::Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    const double raw = -10.0 + 20.0 * rng.uniform();
    const double v = env::map_action(Eigen::VectorXd::Constant(1, raw), pts)[0];
    CHECK(v >= 57.5);
    CHECK(v <= 61.5);
  }
}

TEST_CASE("compute_reward reproduces hand-evaluated values") {
  core::Measurements m;
  m.gen_rocof_hzps = Eigen::VectorXd::Zero(4);
  prot::TripReport r;
  r.generators.resize(4);

  CHECK(env::compute_reward(m, r, 1.0, 5.0) == 0.0);

  m.gen_rocof_hzps << 1.0, 0.0, 0.0, 0.0;
  r.generators[0].tripped = true;
  CHECK(env::compute_reward(m, r, 1.0, 5.0) == doctest::Approx(6.0));

  m.gen_rocof_hzps << 0.5, 0.5, 0.5, 0.5;
  r.generators[0].tripped = false;
  CHECK(env::compute_reward(m, r, 1.0, 5.0) == doctest::Approx(1.0));
}

TEST_CASE("reward is nonnegative and zero only at rest") {
  ppo::Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    core::Measurements m;
    m.gen_rocof_hzps = Eigen::VectorXd::NullaryExpr(4, [&](Eigen::Index) { return -2 + 4 * rng.uniform(); });
    prot::TripReport r;
    r.generators.resize(4);
    for (auto& g : r.generators) g.tripped = rng.uniform() < 0.2;
    const double rew = env::compute_reward(m, r, 1.0, 5.0);
    CHECK(rew >= 0.0);
    bool at_rest = m.gen_rocof_hzps.cwiseAbs().maxCoeff() == 0.0;
    for (const auto& g : r.generators) at_rest = at_rest && !g.tripped;
    if (rew == 0.0) CHECK(at_rest);
  }
}

TEST_CASE("observation layout: governor scenarios see frequency only, voltage kinds add V") {
  const core::NetworkCase& nc = core::bundled_case();

  env::AttackEnv gov_env(nc, env::bundled_scenario("gov-G1-narrow", nc));
  CHECK(gov_env.observation_dim() == 3);  // freq offset, rocof, time
  env::AttackEnv avr_env(nc, env::bundled_scenario("avr-G1", nc));
  CHECK(avr_env.observation_dim() == 4);  // + voltage offset
  env::AttackEnv two_env(nc, env::bundled_scenario("gov-G1G3", nc));
  CHECK(two_env.observation_dim() == 5);
  env::AttackEnv mixed_env(nc, env::bundled_scenario("gov+avr-G1", nc));
  CHECK(mixed_env.observation_dim() == 4);
}

TEST_CASE("initial observation offsets are zero at the equilibrium start") {
  const core::NetworkCase& nc = core::bundled_case();
  env::AttackEnv e(nc, env::bundled_scenario("avr-G1", nc));
  const Eigen::VectorXd obs = e.reset(0);
  REQUIRE(obs.size() == 4);
  CHECK(std::abs(obs[0]) < 0.05);  // voltage offset: |V0 - 1| is small but nonzero
  CHECK(obs[1] == doctest::Approx(0.0).epsilon(1e-12));  // frequency offset
  CHECK(obs[2] == 0.0);                                  // rocof
  CHECK(obs[3] == 0.0);                                  // time feature
}

TEST_CASE("frequency feature is the offset from 60 Hz") {
  const core::NetworkCase& nc = core::bundled_case();
  const env::Scenario sc = env::bundled_scenario("avr-G1", nc);
  core::Measurements m;
  m.t = 2.0;
  m.gen_v = Eigen::VectorXd::Constant(4, 1.0);
  m.gen_freq_hz = Eigen::VectorXd::Constant(4, 60.3);
  m.gen_rocof_hzps = Eigen::VectorXd::Zero(4);
  m.bus_v = Eigen::VectorXd::Constant(10, 1.0);
  const Eigen::VectorXd obs = env::build_observation(m, sc, {0}, {0}, 20.0);
  REQUIRE(obs.size() == 4);
  CHECK(obs[1] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(obs[3] == doctest::Approx(0.1));  // t/T
}

TEST_CASE("reset is deterministic and episodes run exactly 100 steps") {
  const core::NetworkCase& nc = core::bundled_case();
  env::AttackEnv e(nc, env::bundled_scenario("gov-G1-narrow", nc));
  const Eigen::VectorXd o1 = e.reset(42);
  const Eigen::VectorXd o2 = e.reset(42);
  CHECK(o1 == o2);

  int steps = 0;
  while (!e.done()) {
    const auto r = e.step(Eigen::VectorXd::Zero(1));
    ++steps;
    if (steps == 100) CHECK(r.done);
  }
  CHECK(steps == 100);
  CHECK_THROWS_AS(e.step(Eigen::VectorXd::Zero(1)), core::ContractError);
}

TEST_CASE("midpoint actions on the 60-symmetric scenario leave the plant at rest") {
  const core::NetworkCase& nc = core::bundled_case();
  env::AttackEnv e(nc, env::bundled_scenario("gov-G1-narrow", nc));
  e.reset(0);
  double cumulative = 0.0;
  while (!e.done()) cumulative += e.step(Eigen::VectorXd::Zero(1)).reward;
  CHECK(cumulative < 1e-4);
}

TEST_CASE("constant +1 on the wide governor point depresses system frequency") {
  // the governor sees 61.5 Hz, over-frequency droop withdraws mechanical power
  const core::NetworkCase& nc = core::bundled_case();
  env::AttackEnv e(nc, env::bundled_scenario("gov-G1-wide", nc));
  e.reset(0);
  env::StepResult last;
  while (!e.done()) last = e.step(Eigen::VectorXd::Constant(1, 1.0));
  for (int m = 0; m < 4; ++m) CHECK(last.measurements.gen_freq_hz[m] < 59.9);

  // cross-check the end state against a direct open-loop integration
  const auto pf = sim::solve_power_flow(nc);
  sim::SystemModel model(nc, pf);
  core::DynamicState s = sim::init_equilibrium(model);
  sim::TrapezoidalDae integ(model);
  sim::Injections inj = sim::Injections::none(4);
  inj.gov_freq[0] = 61.5 / 60.0;
  core::Measurements meas;
  for (int w = 0; w < 100; ++w) meas = integ.integrate_window(s, inj, 0.2, 0.01);
  for (int m = 0; m < 4; ++m) {
    CHECK(last.measurements.gen_freq_hz[m] ==
          doctest::Approx(meas.gen_freq_hz[m]).epsilon(1e-12));
  }
}

TEST_CASE("every injected value lies within its bounds, which sit inside relay intervals") {
  const core::NetworkCase& nc = core::bundled_case();
  for (const std::string& name : env::bundled_scenario_names()) {
    const env::Scenario sc = env::bundled_scenario(name, nc);
    for (const auto& p : sc.points) {
      if (p.kind == env::InjectionKind::AvrVoltageMeasurement) {
        CHECK(p.lo >= sc.relays.v_low);
        CHECK(p.hi <= sc.relays.v_high);
      } else if (p.kind != env::InjectionKind::PssOutputSignal) {
        CHECK(p.lo >= sc.relays.w_low);
        CHECK(p.hi <= sc.relays.w_high);
      }
    }
    env::AttackEnv e(nc, sc);
    e.reset(0);
    ppo::Rng rng(5);
    for (int k = 0; k < 5; ++k) {
      Eigen::VectorXd raw =
          Eigen::VectorXd::NullaryExpr(e.action_dim(), [&](Eigen::Index) { return -3 + 6 * rng.uniform(); });
      const auto r = e.step(raw);
      for (int i = 0; i < r.injected.size(); ++i) {
        CHECK(r.injected[i] >= sc.points[i].lo);
        CHECK(r.injected[i] <= sc.points[i].hi);
      }
    }
  }
}

TEST_CASE("pss output signal routes additively into the AVR summing junction") {
  const core::NetworkCase& nc = core::bundled_case();
  env::Scenario sc = env::bundled_scenario("avr-G1", nc);
  sc.points[0].kind = env::InjectionKind::PssOutputSignal;
  sc.points[0].lo = -0.05;
  sc.points[0].hi = 0.05;
  sc.validate(nc);
  env::AttackEnv e(nc, sc);
  e.reset(0);
  const auto r = e.step(Eigen::VectorXd::Constant(1, 1.0));
  CHECK(r.injected[0] == doctest::Approx(0.05));
  // a positive stabilizer signal raises the regulator set point: voltage climbs
  CHECK(r.measurements.gen_v[0] > 1.03);
}

TEST_CASE("governor reference falsification is routed when configured") {
  const core::NetworkCase& nc = core::bundled_case();
  env::Scenario sc = env::bundled_scenario("gov-G1-wide", nc);
  sc.points[0].kind = env::InjectionKind::GovernorFreqReference;
  sc.validate(nc);
  env::AttackEnv e(nc, sc);
  e.reset(0);
  env::StepResult last;
  for (int k = 0; k < 30 && !e.done(); ++k) last = e.step(Eigen::VectorXd::Constant(1, 1.0));
  // reference raised to 61.5 Hz: G1 pushes power, frequency rises
  CHECK(last.measurements.gen_freq_hz[0] > 60.05);
}

TEST_CASE("scenario validation rejects out-of-relay bounds and bad targets") {
  const core::NetworkCase& nc = core::bundled_case();
  env::Scenario sc = env::bundled_scenario("gov-G1-wide", nc);
  SUBCASE("frequency bounds beyond the relay interval") {
    sc.points[0].lo = 56.0;
    CHECK_THROWS_AS(sc.validate(nc), core::ModelError);
  }
  SUBCASE("target bus without a machine") {
    sc.points[0].machine_bus = 7;
    CHECK_THROWS_AS(sc.validate(nc), core::ModelError);
  }
  SUBCASE("episode not divisible by the window") {
    sc.episode_seconds = 20.1;
    CHECK_THROWS_AS(sc.validate(nc), core::ModelError);
  }
}
