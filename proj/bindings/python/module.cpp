#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gridattack/analysis.hpp"
#include "gridattack/attack_env.hpp"
#include "gridattack/case_io.hpp"
#include "gridattack/power_flow.hpp"
#include "gridattack/ppo.hpp"
#include "gridattack/trajectory.hpp"

namespace py = pybind11;
using namespace gridattack;

namespace {

core::NetworkCase case_from_arg(const std::string& case_json) {
  return case_json.empty() ? core::bundled_case() : core::load_case_text(case_json);
}

env::Scenario scenario_from_arg(const core::NetworkCase& nc, const std::string& scenario) {
  // accept a bundled name or raw JSON text
  if (!scenario.empty() && scenario.front() == '{') {
    return env::load_scenario_text(scenario, nc);
  }
  return env::bundled_scenario(scenario, nc);
}

py::dict trips_to_dict(const prot::TripReport& report) {
  py::list tripped, conditions;
  for (const auto& g : report.generators) {
    tripped.append(g.tripped);
    py::list conds;
    for (const auto c : g.conditions) {
      conds.append(c == prot::TripCondition::Voltage     ? "voltage"
                   : c == prot::TripCondition::Frequency ? "frequency"
                                                         : "rocof");
    }
    conditions.append(conds);
  }
  py::dict d;
  d["tripped"] = tripped;
  d["conditions"] = conditions;
  return d;
}

}  // namespace

PYBIND11_MODULE(gridattack, m) {
  m.doc() = "Two-area power system sandbox for studying measurement-falsification "
            "attacks on generation control: simulation, PPO policy synthesis and "
            "small-signal/spectral analysis";

  py::register_exception<core::ContractError>(m, "ContractError", PyExc_ValueError);
  py::register_exception<core::ModelError>(m, "ModelError", PyExc_ValueError);
  py::register_exception<core::ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<core::SimulationCollapse>(m, "SimulationCollapse", PyExc_RuntimeError);

  m.def("bundled_case_text", [] { return core::bundled_case_text(); },
        "JSON text of the bundled two-area case");
  m.def("bundled_scenario_names", &env::bundled_scenario_names);
  m.def("bundled_scenario_text", &env::bundled_scenario_text, py::arg("name"));

  m.def(
      "solve_power_flow",
      [](const std::string& case_json) {
        const core::NetworkCase nc = case_from_arg(case_json);
        const core::PowerFlowSolution pf = sim::solve_power_flow(nc);
        py::dict d;
        d["v"] = pf.v;
        d["theta"] = pf.theta;
        d["p_gen"] = pf.p_gen;
        d["q_gen"] = pf.q_gen;
        d["slack_p"] = pf.slack_p;
        d["iterations"] = pf.iterations;
        d["mismatch"] = pf.mismatch;
        py::list bus_ids;
        for (const auto& b : nc.buses) bus_ids.append(b.id);
        d["bus_ids"] = bus_ids;
        return d;
      },
      py::arg("case_json") = "", "Newton power flow; empty argument uses the bundled case");

  m.def(
      "eigen_analysis",
      [](const std::string& case_json) {
        const core::NetworkCase nc = case_from_arg(case_json);
        const core::PowerFlowSolution pf = sim::solve_power_flow(nc);
        sim::SystemModel model(nc, pf);
        const core::DynamicState eq = sim::init_equilibrium(model);
        const analysis::EigenReport report =
            analysis::eigenmodes(analysis::linearize(model, eq));
        py::dict d;
        d["eigenvalues"] = report.eigenvalues;
        if (report.dominant) {
          d["dominant"] = report.dominant->eigenvalue;
          d["dominant_freq_hz"] = report.dominant->frequency_hz;
          d["dominant_damping_ratio"] = report.dominant->damping_ratio;
        }
        return d;
      },
      py::arg("case_json") = "",
      "Eigenvalues of the linearized closed loop at the unattacked equilibrium");

  m.def(
      "fft_spectrum",
      [](const Eigen::VectorXd& signal, double ts) {
        const analysis::Spectrum sp = analysis::fft_spectrum(signal, ts);
        py::dict d;
        d["omega"] = sp.omega;
        d["magnitude"] = sp.magnitude;
        d["peak_omega"] = sp.peak_omega;
        d["peak_magnitude"] = sp.peak_magnitude;
        return d;
      },
      py::arg("signal"), py::arg("ts"),
      "Mean-removed magnitude spectrum up to Nyquist; omega in rad/s");

  m.def(
      "map_action",
      [](const Eigen::VectorXd& raw, const std::string& scenario, const std::string& case_json) {
        const core::NetworkCase nc = case_from_arg(case_json);
        return env::map_action(raw, scenario_from_arg(nc, scenario).points);
      },
      py::arg("raw"), py::arg("scenario"), py::arg("case_json") = "",
      "Affine map from raw [-1, 1] actions to physical injection values");

  py::class_<env::AttackEnv>(m, "AttackEnv")
      .def(py::init([](const std::string& scenario, const std::string& case_json,
                       double internal_step) {
             const core::NetworkCase nc = case_from_arg(case_json);
             return std::make_unique<env::AttackEnv>(nc, scenario_from_arg(nc, scenario),
                                                     internal_step);
           }),
           py::arg("scenario"), py::arg("case_json") = "", py::arg("internal_step") = 0.01)
      .def_property_readonly("observation_dim", &env::AttackEnv::observation_dim)
      .def_property_readonly("action_dim", &env::AttackEnv::action_dim)
      .def("reset", &env::AttackEnv::reset, py::arg("seed") = 0)
      .def("step", [](env::AttackEnv& self, const Eigen::VectorXd& raw_action) {
        const env::StepResult r = self.step(raw_action);
        py::dict info;
        info["freq_hz"] = r.measurements.gen_freq_hz;
        info["rocof_hzps"] = r.measurements.gen_rocof_hzps;
        info["gen_v"] = r.measurements.gen_v;
        info["bus_v"] = r.measurements.bus_v;
        info["injected"] = r.injected;
        info["collapsed"] = r.collapsed;
        info["trips"] = trips_to_dict(r.trips);
        return py::make_tuple(r.observation, r.reward, r.done, info);
      });

  m.def(
      "train_ppo",
      [](const std::string& scenario, long total_steps, std::uint64_t seed, int num_envs,
         const std::string& case_json, double internal_step) {
        const core::NetworkCase nc = case_from_arg(case_json);
        const env::Scenario sc = scenario_from_arg(nc, scenario);
        ppo::PPOConfig cfg;
        cfg.total_steps = total_steps;
        cfg.seed = seed;
        cfg.num_envs = num_envs;
        class Adapter : public ppo::TrainEnv {
         public:
          Adapter(const core::NetworkCase& nc, const env::Scenario& sc, double h)
              : env_(nc, sc, h) {}
          int observation_dim() const override { return env_.observation_dim(); }
          int action_dim() const override { return env_.action_dim(); }
          Eigen::VectorXd reset(std::uint64_t seed) override { return env_.reset(seed); }
          std::tuple<Eigen::VectorXd, double, bool> step(const Eigen::VectorXd& a) override {
            const env::StepResult r = env_.step(a);
            return {r.observation, r.reward, r.done};
          }

         private:
          env::AttackEnv env_;
        };
        const ppo::TrainResult result = ppo::train(
            [nc, sc, internal_step](int) {
              return std::make_unique<Adapter>(nc, sc, internal_step);
            },
            cfg);
        py::list episodes, rewards, ma40;
        for (const auto& r : result.curve) {
          episodes.append(r.episode);
          rewards.append(r.reward);
          ma40.append(r.moving_average_40);
        }
        py::dict d;
        d["episodes"] = episodes;
        d["rewards"] = rewards;
        d["moving_average_40"] = ma40;
        d["steps_collected"] = result.steps_collected;
        d["best_moving_average_40"] = result.best_moving_average;
        d["checkpoint"] = ppo::checkpoint_to_text(result.best_params, cfg,
                                                  result.steps_collected);
        return d;
      },
      py::arg("scenario"), py::arg("total_steps"), py::arg("seed") = 0,
      py::arg("num_envs") = 1, py::arg("case_json") = "", py::arg("internal_step") = 0.01,
      "Train an attack policy; returns the learning curve and a checkpoint string");

  m.def(
      "eval_policy",
      [](const std::string& checkpoint, const std::string& scenario,
         const std::string& case_json, double internal_step) {
        const core::NetworkCase nc = case_from_arg(case_json);
        const env::Scenario sc = scenario_from_arg(nc, scenario);
        ppo::PolicyParams params;
        ppo::PPOConfig cfg;
        long steps = 0;
        ppo::checkpoint_from_text(checkpoint, params, cfg, steps);
        env::AttackEnv e(nc, sc, internal_step);
        Eigen::VectorXd obs = e.reset(0);
        double total_reward = 0.0, peak_rocof = 0.0;
        py::list injected;
        while (!e.done()) {
          const auto pe = ppo::policy_forward(params, obs);
          const env::StepResult r = e.step(pe.mean);
          obs = r.observation;
          total_reward += r.reward;
          peak_rocof = std::max(peak_rocof, r.measurements.gen_rocof_hzps.cwiseAbs().maxCoeff());
          injected.append(r.injected);
        }
        py::dict d;
        d["episode_reward"] = total_reward;
        d["peak_abs_rocof_hzps"] = peak_rocof;
        d["injected"] = injected;
        return d;
      },
      py::arg("checkpoint"), py::arg("scenario"), py::arg("case_json") = "",
      py::arg("internal_step") = 0.01,
      "Deterministic mean-action rollout of a checkpointed policy");
}
