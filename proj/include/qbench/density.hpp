#pragma once

#include <Eigen/Dense>

#include <vector>

namespace qbench {

/// Single-qubit channel in Kraus form; completeness sum K^dag K = I is checked
/// on construction.
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<Eigen::Matrix2cd> ops);

  static KrausChannel amplitude_damping(double gamma);
  /// Off-diagonal elements shrink by (1 - lambda).
  static KrausChannel phase_damping(double lambda);
  /// rho -> (1 - p) rho + p I/2.
  static KrausChannel depolarizing(double p);

  const std::vector<Eigen::Matrix2cd>& ops() const { return ops_; }

 private:
  std::vector<Eigen::Matrix2cd> ops_;
};

/// Mixed state over n qubits; qubit 0 is the most significant index bit.
class DensityMatrix {
 public:
  explicit DensityMatrix(int n_qubits);

  int n_qubits() const { return n_; }
  const Eigen::MatrixXcd& matrix() const { return rho_; }
  /// Replace the state; dimensions must match.
  void set_matrix(const Eigen::MatrixXcd& rho);

  void apply_1q(int q, const Eigen::Matrix2cd& u);
  void apply_cz(int a, int b);
  void apply_channel(int q, const KrausChannel& k);

  // Closed-form channel updates, equivalent to their Kraus forms.
  void depolarize_1q(int q, double p);
  /// rho -> (1 - p) rho + p Tr_ab(rho) (x) I/4.
  void depolarize_2q(int a, int b, double p);
  /// Amplitude damping (gamma) followed by pure dephasing (lambda).
  void relax(int q, double gamma, double lambda);

  Eigen::VectorXd diagonal() const;
  double trace() const { return rho_.trace().real(); }
  /// Hermitian, unit trace and positive semidefinite within tol.
  bool is_physical(double tol = 1e-9) const;

 private:
  Eigen::Index mask(int q) const { return Eigen::Index(1) << (n_ - 1 - q); }

  int n_;
  Eigen::MatrixXcd rho_;
};

}  // namespace qbench
