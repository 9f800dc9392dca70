#include "gridattack/analysis.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "gridattack/errors.hpp"

namespace gridattack::analysis {

Eigen::MatrixXd linearize(const sim::SystemModel& model, const core::DynamicState& equilibrium,
                          double perturbation) {
  Eigen::MatrixXd fx, fy, gx, gy;
  const sim::Injections none = sim::Injections::none(model.n_machines());
  model.jacobians(equilibrium.diff, equilibrium.alg, none, equilibrium.tripped, perturbation,
                  fx, fy, gx, gy);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(gy);
  const Eigen::MatrixXd gyi_gx = lu.solve(gx);
  if (!gyi_gx.allFinite()) {
    throw core::AnalysisError("algebraic Jacobian is singular at the given equilibrium");
  }
  return fx - fy * gyi_gx;
}

EigenReport eigenmodes(const Eigen::MatrixXd& state_matrix, double im_threshold) {
  if (state_matrix.rows() != state_matrix.cols() || !state_matrix.allFinite()) {
    throw core::AnalysisError("eigenmodes: matrix must be square and finite");
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(state_matrix, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw core::AnalysisError("eigen-decomposition failed");
  }
  EigenReport report;
  const auto& ev = solver.eigenvalues();
  report.eigenvalues.assign(ev.data(), ev.data() + ev.size());

  for (const auto& lambda : report.eigenvalues) {
    if (lambda.imag() > im_threshold) {
      OscillatoryPair pair;
      pair.eigenvalue = lambda;
      pair.frequency_hz = lambda.imag() / (2.0 * 3.14159265358979323846);
      pair.damping_ratio = -lambda.real() / std::abs(lambda);
      report.oscillatory.push_back(pair);
    }
  }
  std::sort(report.oscillatory.begin(), report.oscillatory.end(),
            [](const OscillatoryPair& a, const OscillatoryPair& b) {
              return a.eigenvalue.real() > b.eigenvalue.real();
            });
  if (!report.oscillatory.empty()) report.dominant = report.oscillatory.front();
  return report;
}

Spectrum fft_spectrum(const Eigen::VectorXd& signal, double ts) {
  const int n = static_cast<int>(signal.size());
  if (n < 8) throw core::ContractError("fft_spectrum: need at least 8 samples");
  if (!(ts > 0)) throw core::ContractError("fft_spectrum: sample interval must be positive");
  if (!signal.allFinite()) throw core::ContractError("fft_spectrum: non-finite samples");

  const Eigen::VectorXd x = signal.array() - signal.mean();
  const int n_bins = n / 2;  // k = 1 .. n/2 (Nyquist included for even n)
  Spectrum sp;
  sp.omega.resize(n_bins);
  sp.magnitude.resize(n_bins);
  const double dw = 2.0 * 3.14159265358979323846 / (n * ts);
  for (int k = 1; k <= n_bins; ++k) {
    double re = 0.0, im = 0.0;
    for (int t = 0; t < n; ++t) {
      const double ang = -2.0 * 3.14159265358979323846 * k * t / n;
      re += x[t] * std::cos(ang);
      im += x[t] * std::sin(ang);
    }
    sp.omega[k - 1] = k * dw;
    sp.magnitude[k - 1] = std::hypot(re, im);
  }
  int peak = 0;
  sp.magnitude.maxCoeff(&peak);
  sp.peak_omega = sp.omega[peak];
  sp.peak_magnitude = sp.magnitude[peak];
  return sp;
}

TrajectoryMetrics trajectory_metrics(const sim::Trajectory& traj,
                                     const prot::RelaySettings& settings,
                                     const std::vector<int>& machine_area) {
  if (traj.steps.empty()) throw core::ContractError("trajectory_metrics: empty trajectory");
  const int nm = static_cast<int>(traj.machine_buses.size());
  TrajectoryMetrics out;
  out.generators.resize(nm);
  for (int m = 0; m < nm; ++m) {
    GeneratorMetrics& gm = out.generators[m];
    gm.v_min = traj.steps.front().meas.gen_v[m];
    gm.v_max = gm.v_min;
  }

  std::vector<int> areas = machine_area;
  std::sort(areas.begin(), areas.end());
  areas.erase(std::unique(areas.begin(), areas.end()), areas.end());
  for (int a : areas) {
    AreaMetrics am;
    am.area = a;
    out.areas.push_back(am);
  }
  auto area_slot = [&](int area) {
    for (auto& am : out.areas) {
      if (am.area == area) return &am;
    }
    return static_cast<AreaMetrics*>(nullptr);
  };

  for (const sim::TrajectoryStep& st : traj.steps) {
    for (int m = 0; m < nm; ++m) {
      GeneratorMetrics& gm = out.generators[m];
      const double v = st.meas.gen_v[m];
      const double f = st.meas.gen_freq_hz[m];
      const double r = st.meas.gen_rocof_hzps[m];
      gm.peak_abs_rocof_hzps = std::max(gm.peak_abs_rocof_hzps, std::abs(r));
      gm.peak_abs_freq_dev_hz = std::max(gm.peak_abs_freq_dev_hz, std::abs(f - 60.0));
      gm.v_min = std::min(gm.v_min, v);
      gm.v_max = std::max(gm.v_max, v);
      if ((v < settings.v_low || v > settings.v_high) && !gm.first_voltage_trip_time) {
        gm.first_voltage_trip_time = st.t;
      }
      if ((f < settings.w_low || f > settings.w_high) && !gm.first_freq_trip_time) {
        gm.first_freq_trip_time = st.t;
      }
      if (std::abs(r) > settings.rocof_limit && !gm.first_rocof_trip_time) {
        gm.first_rocof_trip_time = st.t;
      }
      AreaMetrics* am = area_slot(machine_area[m]);
      am->peak_abs_rocof_hzps = std::max(am->peak_abs_rocof_hzps, std::abs(r));
      if (std::abs(r) > settings.rocof_limit && !am->first_rocof_crossing_time) {
        am->first_rocof_crossing_time = st.t;
      }
    }
  }

  double best_time = std::numeric_limits<double>::infinity();
  for (const AreaMetrics& am : out.areas) {
    if (am.first_rocof_crossing_time && *am.first_rocof_crossing_time < best_time) {
      best_time = *am.first_rocof_crossing_time;
      out.faster_growing_area = am.area;
    }
  }
  return out;
}

}  // namespace gridattack::analysis
