#pragma once

#include "qbench/circuit.hpp"
#include "qbench/routing.hpp"

#include <Eigen/Dense>

#include <limits>
#include <span>
#include <string>
#include <vector>

namespace qbench {

inline constexpr double kNoDecay = std::numeric_limits<double>::infinity();

struct QubitParams {
  double t1_us = kNoDecay;
  /// Ramsey coherence time (T2*).
  double t2_us = kNoDecay;
  /// readout(i, j) = P(measure j | prepared i); rows sum to one.
  Eigen::Matrix2d readout = Eigen::Matrix2d::Identity();
  /// Depolarizing strength of each physical single-qubit pulse.
  double p1 = 0.0;
};

struct DriftEpoch {
  double start_s = 0.0;
  double t2_multiplier = 1.0;
};

/// Piecewise-constant T2 multiplier over wall-clock time plus a Gaussian
/// relative jitter re-drawn at every recalibration.
struct DriftSchedule {
  std::vector<DriftEpoch> epochs;
  double jitter_sigma = 0.0;

  bool empty() const { return epochs.empty() && jitter_sigma == 0.0; }
  double multiplier_at(double time_s) const;
};

/// Noise and timing description of a simulated device.
struct DeviceModel {
  std::string name;
  std::vector<QubitParams> qubits;
  double p2 = 0.0;
  TimingModel timing;
  std::vector<Edge> edges;
  /// Probability that both ends of a coupled pair flip together at readout.
  double readout_correlation = 0.0;
  DriftSchedule drift;

  int n_qubits() const { return static_cast<int>(qubits.size()); }
  Topology topology() const { return Topology(n_qubits(), edges); }
  bool connected(int a, int b) const;
  /// No gate, decay, readout or correlated error anywhere.
  bool noiseless() const;
  void validate() const;

  /// Snapshot of the model at `time_s` with per-qubit relative jitter factors
  /// (T2 -> T2 * multiplier * (1 + jitter[q]), clipped to (0, 2 T1]).
  DeviceModel at(double time_s, std::span<const double> jitter) const;
};

/// Average gate infidelity of pure T1/T2 decay over `duration_ns`.
double idle_infidelity(double t1_us, double t2_us, double duration_ns);

/// Depolarizing strength whose pulses, together with decay during the pulse,
/// average to gate fidelity `f1q`.
double depolarizing_for_fidelity(double f1q, double t1_us, double t2_us, double pulse_ns);

/// Five-qubit star device built from the published single-qubit table.
DeviceModel starmon5_reference_model();

/// Noiseless device with all-to-all coupling.
DeviceModel ideal_model(int n_qubits);

}  // namespace qbench
