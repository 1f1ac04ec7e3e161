#pragma once

#include "qbench/circuit.hpp"
#include "qbench/linalg.hpp"

#include <vector>

namespace qbench {

/// Unitary of a single native gate (2x2) or of a whole circuit (dense, qubit 0
/// is the most significant bit of the basis index). WAIT and MEASURE_ALL act
/// as identity.
Eigen::Matrix2cd single_qubit_matrix(const Gate& g);
Eigen::MatrixXcd circuit_unitary(const Circuit& c);

/// U = e^{i g} RZ(phi) RY(theta) RZ(lambda), with theta in [0, pi].
struct ZyzAngles {
  double theta = 0, phi = 0, lambda = 0;
};
ZyzAngles zyz_decompose(const Eigen::Matrix2cd& u);

/// Native gates realizing `u` on `qubit` up to global phase: at most two X90
/// pulses (one X90 or X for quarter and half turns) dressed by RZ.
std::vector<Gate> synthesize_1q(const Eigen::Matrix2cd& u, int qubit);

/// Canonical (KAK) form U = e^{i g} (A0 x A1) exp(i(a XX + b YY + c ZZ)) (B0 x B1).
struct KakDecomposition {
  Eigen::Matrix2cd after0, after1;
  Eigen::Matrix2cd before0, before1;
  double a = 0, b = 0, c = 0;
  double global_phase = 0;
};
KakDecomposition kak_decompose(const Eigen::Matrix4cd& u);
Eigen::Matrix4cd canonical_gate(double a, double b, double c);

/// Any two-qubit unitary as local gates around exactly three CZs.
std::vector<Gate> synthesize_2q(const Eigen::Matrix4cd& u, int q0, int q1);

// Compiled helpers for common non-native gates.
std::vector<Gate> hadamard(int q);
std::vector<Gate> cnot(int control, int target);
std::vector<Gate> swap_gates(int a, int b);
/// exp(-i theta Z_a Z_b / 2).
std::vector<Gate> rzz(int a, int b, double theta);
std::vector<Gate> rx(int q, double theta);
/// diag(1, 1, 1, e^{i theta}).
std::vector<Gate> cphase(int a, int b, double theta);

/// Fuse every run of concrete single-qubit gates on a qubit into one
/// synthesized run. Symbolic RZ gates are kept as they are.
Circuit merge_single_qubit_gates(const Circuit& c);

}  // namespace qbench
