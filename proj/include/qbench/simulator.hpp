#pragma once

#include "qbench/circuit.hpp"
#include "qbench/device.hpp"
#include "qbench/shots.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <string>

namespace qbench {

inline constexpr int kIdealQubitCap = 12;
inline constexpr int kNoisyQubitCap = 10;

/// Exact Born-rule probabilities of the final state, indexed by basis state.
/// WAIT is a no-op.
Eigen::VectorXd run_ideal(const Circuit& c, int max_qubits = kIdealQubitCap);

/// Sparse bitstring -> probability view, dropping entries below `cutoff`.
std::map<std::string, double> to_distribution(const Eigen::VectorXd& probs, int n_qubits,
                                              double cutoff = 1e-12);

/// Sample `shots` outcomes from the noisy density-matrix evolution of `c` on
/// `device`. Deterministic for a given seed.
///
/// Each physical gate applies its unitary and then depolarizing noise (p1 or
/// p2); RZ is an error-free frame change. After every layer each active qubit
/// relaxes for the layer's duration. Readout applies the per-qubit confusion
/// matrices and then correlated pair flips.
ShotTable run_noisy(const Circuit& c, const DeviceModel& device, std::int64_t shots,
                    std::uint64_t seed);

/// Draw shots from an exact distribution (no readout error).
ShotTable sample_distribution(const Eigen::VectorXd& probs, int n_qubits, std::int64_t shots,
                              std::uint64_t seed);

/// Check that `c` can run on `device`; throws CapabilityError otherwise.
void check_executable(const Circuit& c, const DeviceModel& device);

}  // namespace qbench
