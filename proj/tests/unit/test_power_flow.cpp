#include <doctest.h>

#include <cmath>

#include "gridattack/case_io.hpp"
#include "gridattack/network.hpp"
#include "gridattack/power_flow.hpp"
#include "oracles.hpp"

using namespace gridattack;

TEST_CASE("flat unloaded network converges immediately to 1<0") {
  core::NetworkCase nc;
  nc.buses.push_back({1, 230.0, core::BusType::Slack, 1, 0, 0, 0, 0, 1.0});
  nc.buses.push_back({2, 230.0, core::BusType::PQ, 1, 0, 0, 0, 0, 1.0});
  nc.buses.push_back({3, 230.0, core::BusType::PQ, 1, 0, 0, 0, 0, 1.0});
  nc.branches.push_back({1, 2, 0.0, 0.1, 0.0});
  nc.branches.push_back({2, 3, 0.0, 0.1, 0.0});
  const auto sol = sim::solve_power_flow(nc);
  CHECK(sol.iterations <= 1);
  for (int i = 0; i < 3; ++i) {
    CHECK(sol.v[i] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sol.theta[i] == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("two-bus feeder matches the closed-form solution") {
  const double r = 0.02, x = 0.12, p = 0.8, q = 0.3;
  core::NetworkCase nc;
  nc.buses.push_back({1, 230.0, core::BusType::Slack, 1, 0, 0, 0, 0, 1.0});
  nc.buses.push_back({2, 230.0, core::BusType::PQ, 1, p, q, 0, 0, 1.0});
  nc.branches.push_back({1, 2, r, x, 0.0});
  const auto sol = sim::solve_power_flow(nc, 1e-12);

  const std::complex<double> v2 = oracles::two_bus_closed_form(r, x, p, q);
  CHECK(sol.v[1] == doctest::Approx(std::abs(v2)).epsilon(1e-9));
  CHECK(sol.theta[1] == doctest::Approx(std::arg(v2)).epsilon(1e-9));
}

TEST_CASE("bundled two-area case: healthy voltages, 400 MW class transfer") {
  const core::NetworkCase& nc = core::bundled_case();
  const auto sol = sim::solve_power_flow(nc);
  CHECK(sol.mismatch < 1e-10);
  for (int i = 0; i < sol.v.size(); ++i) {
    CHECK(sol.v[i] > 0.9);
    CHECK(sol.v[i] < 1.1);
  }

  // inter-area transfer through the double-circuit corridor 7-8
  const Eigen::MatrixXcd y = core::build_admittance(nc);
  const int i7 = nc.bus_index(7), i8 = nc.bus_index(8);
  const core::Complex v7 = std::polar(sol.v[i7], sol.theta[i7]);
  const core::Complex v8 = std::polar(sol.v[i8], sol.theta[i8]);
  const core::Complex z(0.011, 0.110);
  const core::Complex flow_one_circuit = v7 * std::conj((v7 - v8) / z + v7 * core::Complex(0, 0.1925 / 2));
  const double p_transfer = 2.0 * flow_one_circuit.real();
  CHECK(p_transfer > 3.5);  // 350 MW
  CHECK(p_transfer < 4.5);  // 450 MW
}

TEST_CASE("bundled case agrees with an independent Gauss-Seidel solution") {
  const core::NetworkCase& nc = core::bundled_case();
  const auto sol = sim::solve_power_flow(nc, 1e-12);
  const Eigen::VectorXcd v_gs = oracles::gauss_seidel_power_flow(nc, 4000);
  for (std::size_t i = 0; i < nc.buses.size(); ++i) {
    const core::Complex v_newton = std::polar(sol.v[i], sol.theta[i]);
    // rotate the GS solution so both use the slack angle reference
    CHECK(std::abs(v_newton - v_gs[i]) < 1e-6);
  }
}

TEST_CASE("non-convergence carries the final mismatch in the diagnostic") {
  const core::NetworkCase& nc = core::bundled_case();
  try {
    sim::solve_power_flow(nc, 1e-10, 1);
    FAIL("expected non-convergence");
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("mismatch") != std::string::npos);
  }
}

TEST_CASE("solution populates machine dispatch and slack absorption") {
  const core::NetworkCase& nc = core::bundled_case();
  const auto sol = sim::solve_power_flow(nc);
  REQUIRE(sol.p_gen.size() == 4);
  CHECK(sol.p_gen[0] == doctest::Approx(7.0).epsilon(1e-9));   // PV bus holds dispatch
  CHECK(sol.p_gen[1] == doctest::Approx(7.0).epsilon(1e-9));
  CHECK(sol.p_gen[3] == doctest::Approx(7.0).epsilon(1e-9));
  CHECK(sol.slack_p == doctest::Approx(sol.p_gen[2]));
  // slack picks up series losses: total generation above the 27.34 pu load
  // by a plausible network loss (30 to 100 MW)
  const double total = sol.p_gen.sum();
  CHECK(total > 27.34 + 0.3);
  CHECK(total < 27.34 + 1.0);
}
