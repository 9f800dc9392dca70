#ifndef GRIDATTACK_ANALYSIS_HPP_
#define GRIDATTACK_ANALYSIS_HPP_

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "gridattack/protection.hpp"
#include "gridattack/system_model.hpp"
#include "gridattack/trajectory.hpp"

namespace gridattack::analysis {

// Reduced state matrix of the differential states at an equilibrium:
// A = fx - fy * gy^-1 * gx, blocks by central differences with the given
// perturbation. Throws AnalysisError if the algebraic Jacobian is singular.
Eigen::MatrixXd linearize(const sim::SystemModel& model, const core::DynamicState& equilibrium,
                          double perturbation = 1e-6);

struct OscillatoryPair {
  std::complex<double> eigenvalue;  // the +imag member
  double frequency_hz = 0.0;
  double damping_ratio = 0.0;
};

struct EigenReport {
  std::vector<std::complex<double>> eigenvalues;  // all, conjugate-closed
  std::vector<OscillatoryPair> oscillatory;       // sorted by real part, descending
  std::optional<OscillatoryPair> dominant;        // largest real part among oscillatory
};

// Full eigen-decomposition. Pairs with |imag| <= im_threshold rad/s are
// treated as non-oscillatory; the default keeps numerically split real roots
// out of the oscillatory set.
EigenReport eigenmodes(const Eigen::MatrixXd& state_matrix, double im_threshold = 1e-3);

struct Spectrum {
  Eigen::VectorXd omega;      // rad/s, spacing 2*pi/(N*Ts), bins 1..N/2
  Eigen::VectorXd magnitude;  // |DFT|
  double peak_omega = 0.0;
  double peak_magnitude = 0.0;
};

// Magnitude spectrum of a uniformly sampled signal up to Nyquist, mean
// removed before the transform. Requires at least 8 samples.
Spectrum fft_spectrum(const Eigen::VectorXd& signal, double ts);

struct GeneratorMetrics {
  double peak_abs_rocof_hzps = 0.0;
  double peak_abs_freq_dev_hz = 0.0;
  double v_min = 0.0, v_max = 0.0;
  std::optional<double> first_voltage_trip_time;
  std::optional<double> first_freq_trip_time;
  std::optional<double> first_rocof_trip_time;
};

struct AreaMetrics {
  int area = 0;
  double peak_abs_rocof_hzps = 0.0;
  std::optional<double> first_rocof_crossing_time;  // any machine in the area
};

struct TrajectoryMetrics {
  std::vector<GeneratorMetrics> generators;
  std::vector<AreaMetrics> areas;          // ascending area id
  std::optional<int> faster_growing_area;  // earliest rocof crossing
};

TrajectoryMetrics trajectory_metrics(const sim::Trajectory& traj,
                                     const prot::RelaySettings& settings,
                                     const std::vector<int>& machine_area);

}  // namespace gridattack::analysis

#endif  // GRIDATTACK_ANALYSIS_HPP_
