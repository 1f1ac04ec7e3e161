#pragma once

#include "qbench/circuit.hpp"
#include "qbench/linalg.hpp"

#include <vector>

namespace qbench {

/// One of the 24 single-qubit Clifford elements. Index 0 is the identity.
struct CliffordElement {
  int index = 0;
  friend bool operator==(CliffordElement, CliffordElement) = default;
};

inline constexpr int kCliffordGroupSize = 24;
inline constexpr CliffordElement kCliffordIdentity{0};

/// Group product "apply a, then b": the element whose unitary is U_b U_a.
CliffordElement compose_cliffords(CliffordElement a, CliffordElement b);
CliffordElement inverse_clifford(CliffordElement a);

/// Native decomposition of an element acting on `qubit`.
std::vector<Gate> clifford_gates(CliffordElement c, int qubit);

/// Defining unitary (fixed global phase).
Eigen::Matrix2cd clifford_unitary(CliffordElement c);

/// Mean number of physical pulses (X, X90, Y90) per element; RZ is free.
double mean_clifford_pulse_count();

/// Element matching `u` up to global phase; throws if `u` is not Clifford.
CliffordElement clifford_from_unitary(const Eigen::Matrix2cd& u);

}  // namespace qbench
