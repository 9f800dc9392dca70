#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

#ifndef GRIDATTACK_CLI_PATH
#error "GRIDATTACK_CLI_PATH must point at the gridattack binary"
#endif

const char* kCli = GRIDATTACK_CLI_PATH;

struct RunOut {
  int exit_code = -1;
  std::string output;
};

RunOut run(const std::string& args) {
  static int counter = 0;
  const std::string out_file =
      (fs::temp_directory_path() /
       ("gridattack_cli_out_" + std::to_string(getpid()) + "_" + std::to_string(++counter)))
          .string();
  const std::string cmd = std::string(kCli) + " " + args + " >" + out_file + " 2>&1";
  const int rc = std::system(cmd.c_str());
  RunOut r;
  r.exit_code = WEXITSTATUS(rc);
  std::ifstream in(out_file);
  std::stringstream ss;
  ss << in.rdbuf();
  r.output = ss.str();
  fs::remove(out_file);
  return r;
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("gridattack_test_" + tag);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("--help succeeds for every subcommand without side effects") {
  CHECK(run("--help").exit_code == 0);
  CHECK(run("train --help").exit_code == 0);
  CHECK(run("eval --help").exit_code == 0);
  CHECK(run("analyze --help").exit_code == 0);
  CHECK(run("list-scenarios --help").exit_code == 0);
}

TEST_CASE("list-scenarios prints the six bundled configurations") {
  const auto r = run("list-scenarios");
  CHECK(r.exit_code == 0);
  for (const char* name : {"gov-G1-narrow", "gov-G1-wide", "gov-G1G3", "gov+avr-G1", "avr-G1",
                           "avr-G1G3"}) {
    CHECK(r.output.find(name) != std::string::npos);
  }
}

TEST_CASE("unknown --set keys exit with a usage error naming the key") {
  const auto r = run("train --scenario gov-G1-wide --set frobnicate=1 --out /tmp/never");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("frobnicate") != std::string::npos);
}

TEST_CASE("train writes checkpoint, curve and manifest; reruns refuse to overwrite") {
  const fs::path out = fresh_dir("train");
  const std::string args = "train --scenario gov-G1-narrow --seed 7 --out " + out.string() +
                           " --set total_steps=600 --set rollout_horizon=300";
  const auto r = run(args);
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(out / "checkpoint.json"));
  CHECK(fs::exists(out / "curve.csv"));
  CHECK(fs::exists(out / "manifest.json"));

  const json manifest = json::parse(slurp(out / "manifest.json"));
  CHECK(manifest.at("scenario") == "gov-G1-narrow");
  CHECK(manifest.at("seed") == 7);
  for (const auto& f : manifest.at("outputs")) {
    CHECK(fs::exists(out / f.get<std::string>()));
  }

  const auto again = run(args);
  CHECK(again.exit_code == 3);  // refuses without --force
  CHECK(again.output.find("--force") != std::string::npos);
  CHECK(run(args + " --force").exit_code == 0);
}

TEST_CASE("same seed and config give identical hashes and identical curves") {
  const fs::path a = fresh_dir("det_a");
  const fs::path b = fresh_dir("det_b");
  const std::string common =
      "train --scenario gov-G1-narrow --seed 3 --set total_steps=600 --set rollout_horizon=300";
  CHECK(run(common + " --out " + a.string()).exit_code == 0);
  CHECK(run(common + " --out " + b.string()).exit_code == 0);
  CHECK(slurp(a / "curve.csv") == slurp(b / "curve.csv"));
  const json ma = json::parse(slurp(a / "manifest.json"));
  const json mb = json::parse(slurp(b / "manifest.json"));
  CHECK(ma.at("config_hash") == mb.at("config_hash"));
  CHECK(slurp(a / "checkpoint.json") == slurp(b / "checkpoint.json"));
}

TEST_CASE("eval of a freshly initialized policy stays near the equilibrium") {
  const fs::path tr = fresh_dir("eval_train");
  CHECK(run("train --scenario gov-G1-narrow --seed 1 --out " + tr.string() +
            " --set total_steps=0")
            .exit_code == 0);
  const fs::path ev = fresh_dir("eval_out");
  const auto r = run("eval --checkpoint " + (tr / "checkpoint.json").string() +
                     " --scenario gov-G1-narrow --episodes 2 --out " + ev.string());
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(ev / "trajectory_ep0.csv"));
  CHECK(fs::exists(ev / "trajectory_ep1.csv"));
  CHECK(fs::exists(ev / "metrics.txt"));
  CHECK(fs::exists(ev / "trips.json"));

  const json manifest = json::parse(slurp(ev / "manifest.json"));
  CHECK(manifest.at("outputs").size() == 5);
  // near-zero actor output at init: the injected signal sits near the window
  // midpoint 60 Hz, so the plant barely moves
  CHECK(manifest.at("summary").at("peak_abs_rocof_hzps").get<double>() < 0.05);
}

TEST_CASE("eval rejects a checkpoint/scenario dimensional mismatch") {
  const fs::path tr = fresh_dir("mismatch_train");
  CHECK(run("train --scenario gov-G1-narrow --seed 1 --out " + tr.string() +
            " --set total_steps=0")
            .exit_code == 0);
  const auto r = run("eval --checkpoint " + (tr / "checkpoint.json").string() +
                     " --scenario avr-G1G3 --out " + fresh_dir("mismatch_out").string());
  CHECK(r.exit_code == 3);
  CHECK(r.output.find("mismatch") != std::string::npos);
  CHECK(r.output.find("obs") != std::string::npos);
}

TEST_CASE("analyze eigen emits the eigenvalue table with the dominant pair") {
  const fs::path out = fresh_dir("eigen");
  const auto r = run("analyze --mode eigen --out " + out.string());
  CHECK(r.exit_code == 0);
  const json manifest = json::parse(slurp(out / "manifest.json"));
  const double re = manifest.at("summary").at("dominant_re").get<double>();
  const double im = manifest.at("summary").at("dominant_im").get<double>();
  const std::complex<double> ref(-0.20, 4.22);
  CHECK(std::abs(std::complex<double>(re, im) - ref) <= 0.15 * std::abs(ref));
  const std::string csv = slurp(out / "eigenvalues.csv");
  CHECK(csv.rfind("re,im,freq_hz,damping_ratio", 0) == 0);
}

TEST_CASE("analyze fft finds a synthetic sinusoid's documented peak bin") {
  // build a synthetic trajectory carrying a 3.0 rad/s injected sinusoid
  const fs::path dir = fresh_dir("fft");
  fs::create_directories(dir);
  std::ostringstream csv;
  csv << "time_s,v_bus_1,freq_hz_g1,rocof_hzps_g1,inj_test\n";
  for (int k = 0; k < 100; ++k) {
    const double t = 0.2 * (k + 1);
    csv << t << ",1.0,60.0,0.0," << 60.0 + 0.5 * std::sin(3.0 * t) << "\n";
  }
  const fs::path traj = dir / "traj.csv";
  std::ofstream(traj) << csv.str();

  const auto r = run("analyze --mode fft --input " + traj.string() + " --out " + dir.string());
  CHECK(r.exit_code == 0);
  const json manifest = json::parse(slurp(dir / "manifest.json"));
  const double peak = manifest.at("summary").at("peak_omega_radps").get<double>();
  CHECK(std::abs(peak - 3.0) <= 2 * M_PI / 20.0 + 1e-9);  // within one bin
}

TEST_CASE("analyze metrics on an unattacked trajectory reports a near-zero summary") {
  const fs::path dir = fresh_dir("metrics");
  fs::create_directories(dir);
  std::ostringstream csv;
  csv << "time_s,v_bus_1,freq_hz_g1,rocof_hzps_g1,inj_test\n";
  for (int k = 0; k < 100; ++k) csv << 0.2 * (k + 1) << ",1.0,60.0,0.0,60.0\n";
  const fs::path traj = dir / "traj.csv";
  std::ofstream(traj) << csv.str();
  const auto r = run("analyze --mode metrics --input " + traj.string() + " --out " + dir.string());
  CHECK(r.exit_code == 0);
  const json manifest = json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest.at("summary").at("peak_abs_rocof_hzps").get<double>() == 0.0);
}

TEST_CASE("analyze fft propagates CSV parse failures with the line number") {
  const fs::path dir = fresh_dir("fft_bad");
  fs::create_directories(dir);
  const fs::path traj = dir / "bad.csv";
  std::ofstream(traj) << "time_s,inj_x\n0.2,59.5\n0.4,measured\n";
  const auto r = run("analyze --mode fft --input " + traj.string() + " --out " + dir.string());
  CHECK(r.exit_code == 3);
  CHECK(r.output.find("line 3") != std::string::npos);
}

TEST_CASE("analyze fft and metrics require --input") {
  CHECK(run("analyze --mode fft --out /tmp/never2").exit_code == 2);
  CHECK(run("analyze --mode metrics --out /tmp/never3").exit_code == 2);
}
