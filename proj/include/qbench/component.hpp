#pragma once

#include "qbench/backend.hpp"
#include "qbench/circuit.hpp"
#include "qbench/fit.hpp"

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qbench {

// Closed-form conversions.

/// Error per Clifford from the RB decay constant: r = (1 - alpha) / 2.
double epc_from_alpha(double alpha);
/// Gate fidelity from EPC: F = (1 - r)^(1 / pulses_per_clifford).
double f1q_from_epc(double epc, double pulses_per_clifford = 1.875);
/// F_RO = 1 - (M(0,1) + M(1,0)) / 2 with M(i,j) = P(read j | prepared i).
double readout_fidelity(const Eigen::Matrix2d& m);
/// Mean T2* (microseconds) divided by the gate duration (nanoseconds).
double q_factor(std::span<const double> t2star_us, double gate_ns);

struct RBConfig {
  std::vector<int> lengths{1, 20, 40, 80, 120};
  int sequences_per_length = 10;
  std::int64_t shots = 4096;
  std::uint64_t seed = 0;
};

/// Random Clifford sequences plus their inverse and a final measurement, on
/// `qubit` of an `n_qubits`-wide circuit. Ordered by length, then sequence.
std::vector<Circuit> gen_rb_sequences(const RBConfig& cfg, int qubit, int n_qubits);

struct RBResult {
  int qubit = 0;
  DataSeries data;
  FitResult fit;
  double alpha = 0.0;
  double epc = 0.0;
  double f1q = 0.0;
  bool valid = false;
  std::string flag;
};

/// Fits A alpha^N + B to the mean |1> fraction at each length.
RBResult run_rb(Backend& backend, const RBConfig& cfg, int qubit);

struct ReadoutResult {
  std::vector<Eigen::Matrix2d> assignment;
  std::vector<double> fidelity;
  std::int64_t shots = 0;
};

/// Prepares all-zeros and all-ones on every qubit and reads the per-qubit
/// assignment matrices.
ReadoutResult measure_readout(Backend& backend, std::int64_t shots = 4096, std::uint64_t seed = 0);

/// Kronecker product of per-qubit assignment matrices, qubit 0 as the most
/// significant bit.
Eigen::MatrixXd tensor_assignment(std::span<const Eigen::Matrix2d> per_qubit);

struct CrosstalkResult {
  /// Row b: distribution of outcomes when preparing basis state b.
  Eigen::MatrixXd matrix;
  /// Per-qubit marginals estimated from the same data.
  std::vector<Eigen::Matrix2d> marginals;
  /// Max over rows of the L1 distance to the tensor product of marginals.
  double summary = 0.0;
  std::int64_t shots = 0;
};

inline constexpr int kCrosstalkMaxQubits = 6;

CrosstalkResult measure_crosstalk(Backend& backend, std::int64_t shots = 16384, std::uint64_t seed = 0);
/// Max row L1 distance between an assignment matrix and a prediction.
double max_row_l1(const Eigen::MatrixXd& measured, const Eigen::MatrixXd& predicted);

struct CoherenceConfig {
  int n_waits = 32;
  double max_wait_us = 60.0;
  /// Artificial detuning for the Ramsey experiment.
  double detuning_mhz = 0.125;
  std::int64_t shots = 4096;
  std::uint64_t seed = 0;

  static CoherenceConfig t1() { return {32, 60.0, 0.0}; }
  static CoherenceConfig t2star() { return {32, 24.0, 0.125}; }
  static CoherenceConfig t2hahn() { return {32, 120.0, 0.0}; }
  /// Linearly spaced waits from 0 to max_wait_us inclusive.
  std::vector<double> waits_us() const;
};

struct CoherenceResult {
  int qubit = 0;
  DataSeries data;  // x in microseconds
  FitResult fit;
  /// Fitted time constant and its standard error, microseconds.
  double value_us = 0.0;
  double std_error_us = 0.0;
  bool valid = false;
  std::string flag;
};

std::vector<Circuit> t1_circuits(const CoherenceConfig& cfg, int qubit, int n_qubits);
std::vector<Circuit> t2star_circuits(const CoherenceConfig& cfg, int qubit, int n_qubits);
std::vector<Circuit> t2hahn_circuits(const CoherenceConfig& cfg, int qubit, int n_qubits);

CoherenceResult t1_experiment(Backend& backend, int qubit, const CoherenceConfig& cfg = CoherenceConfig::t1());
CoherenceResult t2star_experiment(Backend& backend, int qubit,
                                  const CoherenceConfig& cfg = CoherenceConfig::t2star());
CoherenceResult t2hahn_experiment(Backend& backend, int qubit,
                                  const CoherenceConfig& cfg = CoherenceConfig::t2hahn());

struct CalibrationConfig {
  RBConfig rb;
  CoherenceConfig t1 = CoherenceConfig::t1();
  CoherenceConfig t2star = CoherenceConfig::t2star();
  CoherenceConfig t2hahn = CoherenceConfig::t2hahn();
  std::int64_t readout_shots = 4096;
  double gate_ns = 20.0;
  std::uint64_t seed = 0;
};

struct QubitCalibration {
  RBResult rb;
  CoherenceResult t1, t2star, t2hahn;
  double f_ro = 0.0;
  Eigen::Matrix2d assignment;
};

struct CalibrationResult {
  std::vector<QubitCalibration> qubits;
  ReadoutResult readout;
  /// Over qubits with a valid T2*; NaN when there are none.
  double q_factor = 0.0;
};

/// Every component metric on every qubit of the backend.
CalibrationResult run_calibration(Backend& backend, const CalibrationConfig& cfg);

}  // namespace qbench
