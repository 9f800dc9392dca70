#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "gridattack/analysis.hpp"
#include "gridattack/attack_env.hpp"
#include "gridattack/case_io.hpp"
#include "gridattack/power_flow.hpp"
#include "gridattack/ppo.hpp"
#include "gridattack/trajectory.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gridattack;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

struct OutputGuard {
  fs::path dir;
  bool force = false;
  std::vector<std::string> files;

  // refuse to clobber existing outputs unless --force
  void claim(const std::string& name) {
    const fs::path p = dir / name;
    if (fs::exists(p) && !force) {
      throw std::runtime_error("output file '" + p.string() +
                               "' already exists; pass --force to overwrite");
    }
    files.push_back(name);
  }
  fs::path path(const std::string& name) const { return dir / name; }
};

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
  out << content;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + p.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct RunConfig {
  core::NetworkCase network;
  env::Scenario scenario;
  std::string scenario_text;  // normalized
  ppo::PPOConfig ppo;
  double internal_step = 0.01;
};

json ppo_config_to_json(const ppo::PPOConfig& c, double internal_step) {
  json j;
  j["learning_rate"] = c.learning_rate;
  j["minibatch_size"] = c.minibatch_size;
  j["gamma"] = c.gamma;
  j["gae_lambda"] = c.gae_lambda;
  j["entropy_coef"] = c.entropy_coef;
  j["value_coef"] = c.value_coef;
  j["max_grad_norm"] = c.max_grad_norm;
  j["clip_ratio"] = c.clip_ratio;
  j["rollout_horizon"] = c.rollout_horizon;
  j["epochs_per_update"] = c.epochs_per_update;
  j["total_steps"] = c.total_steps;
  j["num_envs"] = c.num_envs;
  j["hidden"] = c.hidden;
  j["log_std_init"] = c.log_std_init;
  j["actor_head"] = c.actor_head == ppo::ActorHead::MeanLogStd ? "mean_logstd" : "separate";
  j["internal_step_s"] = internal_step;
  return j;
}

// Apply one key=value override; throws with the key name on unknown keys.
void apply_override(RunConfig& rc, const std::string& key, const std::string& value) {
  auto as_d = [&value] { return std::stod(value); };
  auto as_i = [&value] { return std::stoi(value); };
  auto as_l = [&value] { return std::stol(value); };
  if (key == "learning_rate") rc.ppo.learning_rate = as_d();
  else if (key == "minibatch_size") rc.ppo.minibatch_size = as_i();
  else if (key == "gamma") rc.ppo.gamma = as_d();
  else if (key == "gae_lambda") rc.ppo.gae_lambda = as_d();
  else if (key == "entropy_coef") rc.ppo.entropy_coef = as_d();
  else if (key == "value_coef") rc.ppo.value_coef = as_d();
  else if (key == "max_grad_norm") rc.ppo.max_grad_norm = as_d();
  else if (key == "clip_ratio") rc.ppo.clip_ratio = as_d();
  else if (key == "rollout_horizon") rc.ppo.rollout_horizon = as_i();
  else if (key == "epochs_per_update") rc.ppo.epochs_per_update = as_i();
  else if (key == "total_steps") rc.ppo.total_steps = as_l();
  else if (key == "hidden") rc.ppo.hidden = as_i();
  else if (key == "log_std_init") rc.ppo.log_std_init = as_d();
  else if (key == "actor_head") {
    rc.ppo.actor_head =
        value == "mean_logstd" ? ppo::ActorHead::MeanLogStd : ppo::ActorHead::SeparateLogStd;
  } else if (key == "internal_step_s") rc.internal_step = as_d();
  else if (key == "v_low") rc.scenario.relays.v_low = as_d();
  else if (key == "v_high") rc.scenario.relays.v_high = as_d();
  else if (key == "w_low") rc.scenario.relays.w_low = as_d();
  else if (key == "w_high") rc.scenario.relays.w_high = as_d();
  else if (key == "rocof_limit") rc.scenario.relays.rocof_limit = as_d();
  else if (key == "trip_suppression") {
    rc.scenario.trip_suppression = (value == "true" || value == "1");
  } else if (key == "gamma1") rc.scenario.gamma1 = as_d();
  else if (key == "gamma2") rc.scenario.gamma2 = as_d();
  else {
    throw CLI::ValidationError("--set", "unknown configuration key '" + key + "'");
  }
}

RunConfig load_run_config(const std::string& scenario_arg, const std::string& case_path,
                          const std::string& config_path,
                          const std::vector<std::string>& overrides) {
  RunConfig rc;
  rc.network = case_path.empty() ? core::bundled_case() : core::load_case_file(case_path);

  std::string text;
  if (fs::exists(scenario_arg)) {
    text = read_file(scenario_arg);
  } else {
    text = env::bundled_scenario_text(scenario_arg);
  }
  rc.scenario = env::load_scenario_text(text, rc.network);
  rc.scenario_text = json::parse(text).dump(2);  // normalized

  if (!config_path.empty()) {
    const json j = json::parse(read_file(config_path));
    for (auto it = j.begin(); it != j.end(); ++it) {
      apply_override(rc, it.key(),
                     it.value().is_string() ? it.value().get<std::string>() : it.value().dump());
    }
  }
  for (const std::string& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw CLI::ValidationError("--set", "expected key=value, got '" + kv + "'");
    }
    apply_override(rc, kv.substr(0, eq), kv.substr(eq + 1));
  }
  return rc;
}

std::uint64_t config_hash(const RunConfig& rc) {
  return fnv1a64(rc.scenario_text + "\n" + ppo_config_to_json(rc.ppo, rc.internal_step).dump());
}

json manifest_base(const std::string& command, const RunConfig& rc, std::uint64_t seed) {
  json j;
  j["command"] = command;
  j["scenario"] = rc.scenario.name;
  char hex[32];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(config_hash(rc)));
  j["config_hash"] = hex;
  j["seed"] = seed;
  j["started"] = iso_timestamp();
  return j;
}

void finish_manifest(json& manifest, OutputGuard& guard, const json& summary) {
  manifest["finished"] = iso_timestamp();
  manifest["outputs"] = guard.files;
  manifest["summary"] = summary;
  write_file(guard.path("manifest.json"), manifest.dump(2) + "\n");
}

std::string curve_to_csv(const std::vector<ppo::EpisodeRecord>& curve) {
  std::ostringstream os;
  os << "episode,reward,moving_average_40\n";
  for (const auto& r : curve) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", r.episode, r.reward,
                  r.moving_average_40);
    os << buf;
  }
  return os.str();
}

// Adapter: AttackEnv behind the trainer interface.
class AttackTrainEnv : public ppo::TrainEnv {
 public:
  AttackTrainEnv(const core::NetworkCase& nc, const env::Scenario& sc, double internal_step)
      : env_(nc, sc, internal_step) {}
  int observation_dim() const override { return env_.observation_dim(); }
  int action_dim() const override { return env_.action_dim(); }
  Eigen::VectorXd reset(std::uint64_t seed) override { return env_.reset(seed); }
  std::tuple<Eigen::VectorXd, double, bool> step(const Eigen::VectorXd& action) override {
    const env::StepResult r = env_.step(action);
    return {r.observation, r.reward, r.done};
  }

 private:
  env::AttackEnv env_;
};

struct EvalOutput {
  sim::Trajectory trajectory;
  analysis::TrajectoryMetrics metrics;
  prot::TripReport trips;
  double episode_reward = 0.0;
};

EvalOutput eval_episode(const core::NetworkCase& nc, const env::Scenario& sc,
                        const ppo::PolicyParams& params, double internal_step) {
  env::AttackEnv e(nc, sc, internal_step);
  EvalOutput out;
  for (const core::Bus& b : nc.buses) out.trajectory.bus_ids.push_back(b.id);
  for (const core::MachineParams& m : nc.machines) out.trajectory.machine_buses.push_back(m.bus);
  for (const env::InjectionPoint& p : sc.points) {
    out.trajectory.injection_labels.push_back(env::kind_name(p.kind) + "_g" +
                                              std::to_string(p.machine_bus));
  }
  out.trips.generators.resize(nc.machines.size());

  Eigen::VectorXd obs = e.reset(0);
  while (!e.done()) {
    const ppo::PolicyEval pe = ppo::policy_forward(params, obs);
    const env::StepResult r = e.step(pe.mean);  // deterministic mean action
    obs = r.observation;
    out.episode_reward += r.reward;
    sim::TrajectoryStep st;
    st.t = r.measurements.t;
    st.meas = r.measurements;
    st.injected = r.injected;
    out.trajectory.steps.push_back(std::move(st));
    for (std::size_t m = 0; m < out.trips.generators.size(); ++m) {
      if (r.trips.generators[m].tripped && !out.trips.generators[m].tripped) {
        out.trips.generators[m] = r.trips.generators[m];
      }
    }
  }
  std::vector<int> machine_area;
  for (const core::MachineParams& m : nc.machines) {
    machine_area.push_back(nc.buses[nc.bus_index(m.bus)].area);
  }
  out.metrics = analysis::trajectory_metrics(out.trajectory, sc.relays, machine_area);
  return out;
}

std::string metrics_to_text(const analysis::TrajectoryMetrics& tm,
                            const std::vector<int>& machine_buses) {
  std::ostringstream os;
  for (std::size_t m = 0; m < tm.generators.size(); ++m) {
    const auto& g = tm.generators[m];
    os << "generator g" << machine_buses[m] << ":\n";
    os << "  peak_abs_rocof_hzps " << g.peak_abs_rocof_hzps << "\n";
    os << "  peak_abs_freq_dev_hz " << g.peak_abs_freq_dev_hz << "\n";
    os << "  v_min " << g.v_min << "\n";
    os << "  v_max " << g.v_max << "\n";
    auto opt = [&os](const char* name, const std::optional<double>& v) {
      os << "  " << name << " ";
      if (v) os << *v;
      else os << "none";
      os << "\n";
    };
    opt("first_voltage_trip_time_s", g.first_voltage_trip_time);
    opt("first_freq_trip_time_s", g.first_freq_trip_time);
    opt("first_rocof_trip_time_s", g.first_rocof_trip_time);
  }
  for (const auto& a : tm.areas) {
    os << "area " << a.area << ":\n";
    os << "  peak_abs_rocof_hzps " << a.peak_abs_rocof_hzps << "\n";
    os << "  first_rocof_crossing_time_s ";
    if (a.first_rocof_crossing_time) os << *a.first_rocof_crossing_time;
    else os << "none";
    os << "\n";
  }
  os << "faster_growing_area ";
  if (tm.faster_growing_area) os << *tm.faster_growing_area;
  else os << "none";
  os << "\n";
  return os.str();
}

json trips_to_json(const prot::TripReport& report) {
  json arr = json::array();
  for (const auto& g : report.generators) {
    json jg;
    jg["tripped"] = g.tripped;
    json conds = json::array();
    for (const auto c : g.conditions) {
      conds.push_back(c == prot::TripCondition::Voltage     ? "voltage"
                      : c == prot::TripCondition::Frequency ? "frequency"
                                                            : "rocof");
    }
    jg["conditions"] = conds;
    if (g.first_trip_time) jg["first_trip_time_s"] = *g.first_trip_time;
    arr.push_back(jg);
  }
  return arr;
}

int cmd_train(const RunConfig& rc_in, std::uint64_t seed, const fs::path& out_dir, bool force,
              int num_envs) {
  RunConfig rc = rc_in;
  rc.ppo.seed = seed;
  rc.ppo.num_envs = num_envs;
  rc.ppo.validate();

  fs::create_directories(out_dir);
  OutputGuard guard{out_dir, force, {}};
  guard.claim("checkpoint.json");
  guard.claim("curve.csv");
  guard.claim("manifest.json");

  json manifest = manifest_base("train", rc, seed);

  const core::NetworkCase nc = rc.network;
  const env::Scenario sc = rc.scenario;
  const double istep = rc.internal_step;
  ppo::EnvFactory factory = [nc, sc, istep](int) {
    return std::make_unique<AttackTrainEnv>(nc, sc, istep);
  };

  long next_report = 0;
  ppo::TrainCallback progress = [&next_report](const ppo::TrainResult& partial) {
    if (partial.steps_collected >= next_report) {
      next_report = partial.steps_collected + 10000;
      const double ma = partial.curve.empty() ? 0.0 : partial.curve.back().moving_average_40;
      std::cout << "steps " << partial.steps_collected << "  episodes " << partial.curve.size()
                << "  ma40 " << ma << std::endl;
    }
  };

  const ppo::TrainResult result = ppo::train(factory, rc.ppo, progress);

  write_file(guard.path("checkpoint.json"),
             ppo::checkpoint_to_text(result.best_params, rc.ppo, result.steps_collected));
  write_file(guard.path("curve.csv"), curve_to_csv(result.curve));

  json summary;
  summary["episodes"] = result.curve.size();
  summary["steps_collected"] = result.steps_collected;
  summary["updates"] = result.updates;
  summary["aborted_updates"] = result.aborted_updates;
  summary["best_moving_average_40"] = result.best_moving_average;
  summary["final_moving_average_40"] =
      result.curve.empty() ? 0.0 : result.curve.back().moving_average_40;
  finish_manifest(manifest, guard, summary);
  return 0;
}

int cmd_eval(const RunConfig& rc, const std::string& checkpoint_path, int episodes,
             std::uint64_t seed, const fs::path& out_dir, bool force) {
  ppo::PolicyParams params;
  ppo::PPOConfig ckpt_cfg;
  long steps = 0;
  ppo::checkpoint_from_text(read_file(checkpoint_path), params, ckpt_cfg, steps);

  // dimensional compatibility
  env::AttackEnv probe(rc.network, rc.scenario, rc.internal_step);
  if (params.actor.input_dim() != probe.observation_dim() ||
      params.action_dim != probe.action_dim()) {
    std::ostringstream os;
    os << "checkpoint/scenario shape mismatch: checkpoint expects obs "
       << params.actor.input_dim() << ", action " << params.action_dim << "; scenario '"
       << rc.scenario.name << "' provides obs " << probe.observation_dim() << ", action "
       << probe.action_dim();
    throw std::runtime_error(os.str());
  }

  fs::create_directories(out_dir);
  OutputGuard guard{out_dir, force, {}};
  for (int ep = 0; ep < episodes; ++ep) {
    guard.claim("trajectory_ep" + std::to_string(ep) + ".csv");
  }
  guard.claim("metrics.txt");
  guard.claim("trips.json");
  guard.claim("manifest.json");

  json manifest = manifest_base("eval", rc, seed);
  manifest["checkpoint"] = checkpoint_path;

  std::ostringstream all_metrics;
  json all_trips = json::array();
  double peak_rocof = 0.0;
  double total_reward = 0.0;
  for (int ep = 0; ep < episodes; ++ep) {
    const EvalOutput out = eval_episode(rc.network, rc.scenario, params, rc.internal_step);
    write_file(guard.path("trajectory_ep" + std::to_string(ep) + ".csv"),
               trajectory_to_csv(out.trajectory));
    all_metrics << "episode " << ep << ":\n"
                << metrics_to_text(out.metrics, out.trajectory.machine_buses);
    all_trips.push_back(trips_to_json(out.trips));
    total_reward += out.episode_reward;
    for (const auto& g : out.metrics.generators) {
      peak_rocof = std::max(peak_rocof, g.peak_abs_rocof_hzps);
    }
  }
  write_file(guard.path("metrics.txt"), all_metrics.str());
  write_file(guard.path("trips.json"), all_trips.dump(2) + "\n");

  json summary;
  summary["episodes"] = episodes;
  summary["mean_episode_reward"] = total_reward / episodes;
  summary["peak_abs_rocof_hzps"] = peak_rocof;
  finish_manifest(manifest, guard, summary);
  return 0;
}

int cmd_analyze(const std::string& mode, const std::string& case_path,
                const std::string& input_path, int channel, const fs::path& out_dir,
                bool force) {
  fs::create_directories(out_dir);
  OutputGuard guard{out_dir, force, {}};
  const core::NetworkCase nc =
      case_path.empty() ? core::bundled_case() : core::load_case_file(case_path);

  json manifest;
  manifest["command"] = "analyze";
  manifest["mode"] = mode;
  manifest["started"] = iso_timestamp();
  json summary;

  if (mode == "eigen") {
    guard.claim("eigenvalues.csv");
    guard.claim("manifest.json");
    const core::PowerFlowSolution pf = sim::solve_power_flow(nc);
    sim::SystemModel model(nc, pf);
    const core::DynamicState eq = sim::init_equilibrium(model);
    const Eigen::MatrixXd a = analysis::linearize(model, eq);
    const analysis::EigenReport report = analysis::eigenmodes(a);
    std::ostringstream os;
    os << "re,im,freq_hz,damping_ratio\n";
    for (const auto& ev : report.eigenvalues) {
      char buf[128];
      const double f = std::abs(ev.imag()) / (2.0 * 3.14159265358979323846);
      const double zeta = std::abs(ev) > 0 ? -ev.real() / std::abs(ev) : 0.0;
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", ev.real(), ev.imag(), f,
                    zeta);
      os << buf;
    }
    write_file(guard.path("eigenvalues.csv"), os.str());
    if (report.dominant) {
      summary["dominant_re"] = report.dominant->eigenvalue.real();
      summary["dominant_im"] = report.dominant->eigenvalue.imag();
      summary["dominant_freq_hz"] = report.dominant->frequency_hz;
      summary["dominant_damping_ratio"] = report.dominant->damping_ratio;
    }
  } else if (mode == "fft") {
    guard.claim("spectrum.csv");
    guard.claim("manifest.json");
    const sim::Trajectory traj = sim::trajectory_from_csv(read_file(input_path));
    if (traj.n_steps() < 2) throw std::runtime_error("trajectory too short for a spectrum");
    const double ts = traj.steps[1].t - traj.steps[0].t;
    const analysis::Spectrum sp = analysis::fft_spectrum(traj.injection_series(channel), ts);
    std::ostringstream os;
    os << "omega_radps,magnitude\n";
    for (int k = 0; k < sp.omega.size(); ++k) {
      char buf[80];
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", sp.omega[k], sp.magnitude[k]);
      os << buf;
    }
    write_file(guard.path("spectrum.csv"), os.str());
    summary["peak_omega_radps"] = sp.peak_omega;
    summary["peak_magnitude"] = sp.peak_magnitude;
  } else if (mode == "metrics") {
    guard.claim("metrics.txt");
    guard.claim("manifest.json");
    const sim::Trajectory traj = sim::trajectory_from_csv(read_file(input_path));
    std::vector<int> machine_area;
    for (int bus : traj.machine_buses) {
      const int bi = nc.bus_index(bus);
      machine_area.push_back(bi >= 0 ? nc.buses[bi].area : 1);
    }
    prot::RelaySettings relays;
    const analysis::TrajectoryMetrics tm =
        analysis::trajectory_metrics(traj, relays, machine_area);
    write_file(guard.path("metrics.txt"), metrics_to_text(tm, traj.machine_buses));
    double peak = 0.0;
    for (const auto& g : tm.generators) peak = std::max(peak, g.peak_abs_rocof_hzps);
    summary["peak_abs_rocof_hzps"] = peak;
  } else {
    throw CLI::ValidationError("--mode", "must be one of eigen, fft, metrics");
  }

  manifest["finished"] = iso_timestamp();
  manifest["outputs"] = guard.files;
  manifest["summary"] = summary;
  write_file(guard.path("manifest.json"), manifest.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-area grid control-attack studies: train, evaluate and analyze "
               "measurement-falsification policies"};
  app.require_subcommand(1);

  std::string scenario = "gov-G1-wide";
  std::string case_path;
  std::string config_path;
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;  // fixed default; all randomness flows from --seed
  std::string out_dir = "out";
  std::string checkpoint;
  int episodes = 1;
  std::string mode = "eigen";
  std::string input_path;
  int channel = 0;
  int num_envs = 1;
  bool force = false;

  CLI::App* train = app.add_subcommand("train", "train an attack policy with PPO");
  train->add_option("--scenario", scenario, "bundled scenario name or path to a scenario file");
  train->add_option("--case", case_path, "path to a case file (default: bundled two-area)");
  train->add_option("--config", config_path, "JSON file with configuration overrides");
  train->add_option("--set", overrides, "key=value configuration override (repeatable)");
  train->add_option("--seed", seed, "RNG seed (default 0)");
  train->add_option("--out", out_dir, "output directory");
  train->add_option("--num-envs", num_envs, "parallel rollout environments");
  train->add_flag("--force", force, "overwrite existing outputs");

  CLI::App* eval = app.add_subcommand("eval", "deterministic rollouts of a trained policy");
  eval->add_option("--checkpoint", checkpoint, "checkpoint file")->required();
  eval->add_option("--scenario", scenario, "bundled scenario name or path");
  eval->add_option("--case", case_path, "path to a case file");
  eval->add_option("--config", config_path, "JSON file with configuration overrides");
  eval->add_option("--set", overrides, "key=value configuration override (repeatable)");
  eval->add_option("--episodes", episodes, "number of evaluation episodes");
  eval->add_option("--seed", seed, "RNG seed (default 0)");
  eval->add_option("--out", out_dir, "output directory");
  eval->add_flag("--force", force, "overwrite existing outputs");

  CLI::App* analyze = app.add_subcommand("analyze", "eigenmode, spectrum or metrics analysis");
  analyze->add_option("--mode", mode, "eigen | fft | metrics")->required();
  analyze->add_option("--case", case_path, "path to a case file");
  analyze->add_option("--input", input_path, "trajectory CSV (fft and metrics modes)");
  analyze->add_option("--channel", channel, "injection channel for fft mode");
  analyze->add_option("--out", out_dir, "output directory");
  analyze->add_flag("--force", force, "overwrite existing outputs");

  CLI::App* list = app.add_subcommand("list-scenarios", "list the bundled scenario catalog");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);  // --help exits 0; parse errors exit nonzero
  }

  try {
    if (list->parsed()) {
      const core::NetworkCase& nc = core::bundled_case();
      for (const std::string& name : env::bundled_scenario_names()) {
        const env::Scenario sc = env::bundled_scenario(name, nc);
        std::cout << name << ": ";
        for (std::size_t p = 0; p < sc.points.size(); ++p) {
          if (p) std::cout << ", ";
          std::cout << env::kind_name(sc.points[p].kind) << " g" << sc.points[p].machine_bus
                    << " [" << sc.points[p].lo << ", " << sc.points[p].hi << "]";
        }
        std::cout << "\n";
      }
      return 0;
    }

    if (train->parsed()) {
      const RunConfig rc = load_run_config(scenario, case_path, config_path, overrides);
      return cmd_train(rc, seed, out_dir, force, num_envs);
    }
    if (eval->parsed()) {
      const RunConfig rc = load_run_config(scenario, case_path, config_path, overrides);
      return cmd_eval(rc, checkpoint, episodes, seed, out_dir, force);
    }
    if (analyze->parsed()) {
      if ((mode == "fft" || mode == "metrics") && input_path.empty()) {
        std::cerr << "analyze --mode " << mode << " requires --input\n";
        return kExitUsage;
      }
      return cmd_analyze(mode, case_path, input_path, channel, out_dir, force);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const core::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
