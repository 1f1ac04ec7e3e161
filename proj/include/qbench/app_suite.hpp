#pragma once

#include "qbench/backend.hpp"

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace qbench {

using Distribution = std::map<std::string, double>;

/// Logical circuit plus the qubits whose outcomes count.
struct AppCircuit {
  std::string algorithm;
  Circuit circuit;
  std::vector<int> measured;
};

/// Bernstein-Vazirani on secret.size() data qubits plus one ancilla (last).
AppCircuit bv_circuit(const std::string& secret);
/// Deutsch-Jozsa on n inputs plus one ancilla. A balanced oracle computes
/// mask . x, a constant one returns `constant_value`.
AppCircuit dj_circuit(int n_inputs, bool balanced, std::uint64_t mask, bool constant_value = false);
/// Prepares |basis>, applies QFT then its inverse.
AppCircuit qft_roundtrip_circuit(int n, std::uint64_t basis);

/// Marginal over `qubits`, in that order.
Distribution marginal(const ShotTable& t, const std::vector<int>& qubits);
Distribution marginal(const Distribution& d, const std::vector<int>& qubits);

/// (sum sqrt(p q))^2.
double hellinger_fidelity(const Distribution& p, const Distribution& q);
/// Hellinger fidelity rescaled so the uniform distribution over `n_bits`
/// scores 0 and a perfect match scores 1.
double normalized_fidelity(const Distribution& measured, const Distribution& ideal, int n_bits);

struct VolumetricCell {
  std::string algorithm;
  int width = 0;
  int depth = 0;
  double fidelity = 0.0;
  /// Set when the cell could not run.
  std::string skipped;
};

struct AppSuiteConfig {
  std::vector<int> widths{2, 3, 4, 5};
  int circuits_per_cell = 3;
  std::int64_t shots = 1024;
  std::uint64_t seed = 0;
};

std::vector<VolumetricCell> run_app_suite(Backend& backend, const AppSuiteConfig& cfg);

/// algorithm,width,depth,fidelity
void write_volumetric_csv(std::ostream& os, const std::vector<VolumetricCell>& cells);

}  // namespace qbench
