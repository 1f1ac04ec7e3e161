#pragma once

#include "qbench/circuit.hpp"

#include <Eigen/Dense>

namespace qbench {

/// Pure state over n qubits; qubit 0 is the most significant index bit.
class StateVector {
 public:
  explicit StateVector(int n_qubits);

  int n_qubits() const { return n_; }
  const Eigen::VectorXcd& amplitudes() const { return amp_; }

  void apply(const Gate& g);
  void apply_1q(int q, const Eigen::Matrix2cd& m);
  void apply_cz(int a, int b);
  Eigen::VectorXd probabilities() const { return amp_.cwiseAbs2(); }

 private:
  int n_;
  Eigen::VectorXcd amp_;
};

}  // namespace qbench
