#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

namespace qbench {

template <typename Scalar>
using Mat2 = Eigen::Matrix<std::complex<Scalar>, 2, 2>;
template <typename Scalar>
using Mat4 = Eigen::Matrix<std::complex<Scalar>, 4, 4>;
template <typename Scalar>
using MatX = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

// Gate matrices. Two-qubit matrices use the basis index 2*b0 + b1, where b0
// is the first qubit argument.

template <typename Scalar = double>
Mat2<Scalar> rz_matrix(Scalar angle) {
  Mat2<Scalar> m = Mat2<Scalar>::Zero();
  m(0, 0) = std::polar(Scalar(1), -angle / 2);
  m(1, 1) = std::polar(Scalar(1), angle / 2);
  return m;
}

template <typename Scalar = double>
Mat2<Scalar> rx_matrix(Scalar angle) {
  using C = std::complex<Scalar>;
  const Scalar c = std::cos(angle / 2), s = std::sin(angle / 2);
  Mat2<Scalar> m;
  m << C(c, 0), C(0, -s), C(0, -s), C(c, 0);
  return m;
}

template <typename Scalar = double>
Mat2<Scalar> ry_matrix(Scalar angle) {
  using C = std::complex<Scalar>;
  const Scalar c = std::cos(angle / 2), s = std::sin(angle / 2);
  Mat2<Scalar> m;
  m << C(c, 0), C(-s, 0), C(s, 0), C(c, 0);
  return m;
}

template <typename Scalar = double>
Mat2<Scalar> x_matrix() {
  Mat2<Scalar> m = Mat2<Scalar>::Zero();
  m(0, 1) = m(1, 0) = 1;
  return m;
}

template <typename Scalar = double>
Mat2<Scalar> x90_matrix() {
  return rx_matrix<Scalar>(std::numbers::pi_v<Scalar> / 2);
}

template <typename Scalar = double>
Mat2<Scalar> y90_matrix() {
  return ry_matrix<Scalar>(std::numbers::pi_v<Scalar> / 2);
}

template <typename Scalar = double>
Mat4<Scalar> cz_matrix() {
  Mat4<Scalar> m = Mat4<Scalar>::Identity();
  m(3, 3) = -1;
  return m;
}

/// Kronecker product of two dense matrices.
template <typename A, typename B>
auto kron(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  using Scalar = typename A::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(),
                                                            a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// True when a = e^{i phi} b for some phase, entrywise within tol.
template <typename A, typename B>
bool equal_up_to_phase(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b,
                       double tol = 1e-9) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  Eigen::Index r = 0, c = 0;
  b.cwiseAbs().maxCoeff(&r, &c);
  if (std::abs(b(r, c)) < tol) return a.cwiseAbs().maxCoeff() < tol;
  const auto ratio = a(r, c) / b(r, c);
  if (std::abs(std::abs(ratio) - 1.0) > tol) return false;
  const auto phase = ratio / std::abs(ratio);
  return (a - phase * b).cwiseAbs().maxCoeff() <= tol;
}

/// Haar-random n x n unitary: QR of a complex Ginibre matrix with the phases
/// of R's diagonal folded back into Q.
template <typename Scalar = double, typename Rng>
MatX<Scalar> haar_unitary(Eigen::Index n, Rng& rng) {
  std::normal_distribution<Scalar> normal(0, 1);
  MatX<Scalar> z(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) z(i, j) = {normal(rng), normal(rng)};
  Eigen::HouseholderQR<MatX<Scalar>> qr(z);
  MatX<Scalar> q = qr.householderQ();
  const MatX<Scalar> r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto d = r(j, j);
    const Scalar mag = std::abs(d);
    if (mag > 0) q.col(j) *= d / mag;
  }
  return q;
}

/// Haar-random element of SU(4).
template <typename Scalar = double, typename Rng>
Mat4<Scalar> haar_su4(Rng& rng) {
  Mat4<Scalar> u = haar_unitary<Scalar>(4, rng);
  const std::complex<Scalar> det = u.determinant();
  u /= std::pow(det, Scalar(0.25));
  return u;
}

}  // namespace qbench
