#pragma once

#include "qbench/backend.hpp"
#include "qbench/circuit.hpp"
#include "qbench/linalg.hpp"

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace qbench {

/// One model-circuit layer: a permutation of the d labels, then a Haar SU(4)
/// on each pair (perm[2k], perm[2k+1]).
struct QVLayer {
  std::vector<int> permutation;
  std::vector<Eigen::Matrix4cd> blocks;
};

struct QVCircuitSpec {
  int width = 0;
  std::vector<QVLayer> layers;

  /// Dense layer product, qubit 0 most significant.
  Eigen::MatrixXcd unitary() const;
};

struct QVCircuit {
  QVCircuitSpec spec;
  /// Native logical circuit on `width` qubits, measured.
  Circuit circuit;
};

QVCircuit gen_qv_circuit(int d, std::uint64_t seed);
/// Same construction with `depth` layers on `width` qubits.
QVCircuit gen_model_circuit(int width, int depth, std::uint64_t seed);

/// Outcomes whose probability is strictly above the median.
std::set<std::uint64_t> heavy_set(const Eigen::VectorXd& ideal_probs);
double heavy_mass(const Eigen::VectorXd& ideal_probs);

struct QVConfig {
  int n_circuits = 100;
  std::int64_t shots = 100;
  int min_width = 2;
  /// 0 means the backend width.
  int max_width = 0;
  std::uint64_t seed = 0;
  double threshold = 2.0 / 3.0;
  double z = 2.0;
};

struct QVDepthResult {
  int width = 0;
  double mean_heavy = 0.0;
  double std_error = 0.0;
  /// Average ideal heavy mass of the sampled circuits.
  double ideal_heavy = 0.0;
  bool pass = false;
};

struct QVResult {
  int qv = 1;
  std::vector<QVDepthResult> depths;
  std::string flag;

  int log2_qv() const;
};

QVResult run_quantum_volume(Backend& backend, const QVConfig& cfg);

}  // namespace qbench
