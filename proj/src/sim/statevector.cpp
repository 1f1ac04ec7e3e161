#include "qbench/statevector.hpp"

#include "qbench/error.hpp"
#include "qbench/synthesis.hpp"

namespace qbench {

StateVector::StateVector(int n_qubits) : n_(n_qubits), amp_(Eigen::VectorXcd::Zero(Eigen::Index(1) << n_qubits)) {
  amp_(0) = 1.0;
}

void StateVector::apply(const Gate& g) {
  switch (g.kind) {
    case GateKind::Wait:
    case GateKind::MeasureAll: return;
    case GateKind::CZ: apply_cz(g.qubits[0], g.qubits[1]); return;
    default: apply_1q(g.qubits[0], single_qubit_matrix(g));
  }
}

void StateVector::apply_1q(int q, const Eigen::Matrix2cd& m) {
  const Eigen::Index mask = Eigen::Index(1) << (n_ - 1 - q);
  for (Eigen::Index i = 0; i < amp_.size(); ++i) {
    if (i & mask) continue;
    const auto a0 = amp_(i), a1 = amp_(i | mask);
    amp_(i) = m(0, 0) * a0 + m(0, 1) * a1;
    amp_(i | mask) = m(1, 0) * a0 + m(1, 1) * a1;
  }
}

void StateVector::apply_cz(int a, int b) {
  const Eigen::Index both = (Eigen::Index(1) << (n_ - 1 - a)) | (Eigen::Index(1) << (n_ - 1 - b));
  for (Eigen::Index i = 0; i < amp_.size(); ++i)
    if ((i & both) == both) amp_(i) = -amp_(i);
}

}  // namespace qbench
