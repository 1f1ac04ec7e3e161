#include "qbench/density.hpp"

#include "qbench/error.hpp"

#include <cmath>

namespace qbench {

KrausChannel::KrausChannel(std::vector<Eigen::Matrix2cd> ops) : ops_(std::move(ops)) {
  Eigen::Matrix2cd sum = Eigen::Matrix2cd::Zero();
  for (const auto& k : ops_) sum += k.adjoint() * k;
  if ((sum - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() > 1e-9)
    throw PreconditionError("Kraus operators are not trace preserving");
}

KrausChannel KrausChannel::amplitude_damping(double gamma) {
  Eigen::Matrix2cd k0 = Eigen::Matrix2cd::Zero(), k1 = Eigen::Matrix2cd::Zero();
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  k1(0, 1) = std::sqrt(gamma);
  return KrausChannel({k0, k1});
}

KrausChannel KrausChannel::phase_damping(double lambda) {
  Eigen::Matrix2cd z = Eigen::Matrix2cd::Zero();
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  return KrausChannel({std::sqrt(1.0 - lambda / 2) * Eigen::Matrix2cd::Identity(),
                       std::sqrt(lambda / 2) * z});
}

KrausChannel KrausChannel::depolarizing(double p) {
  using C = std::complex<double>;
  Eigen::Matrix2cd x, y, z;
  x << 0, 1, 1, 0;
  y << 0, C(0, -1), C(0, 1), 0;
  z << 1, 0, 0, -1;
  const double s = std::sqrt(p / 4);
  return KrausChannel({std::sqrt(1.0 - 3 * p / 4) * Eigen::Matrix2cd::Identity(), s * x, s * y, s * z});
}

DensityMatrix::DensityMatrix(int n_qubits)
    : n_(n_qubits), rho_(Eigen::MatrixXcd::Zero(Eigen::Index(1) << n_qubits, Eigen::Index(1) << n_qubits)) {
  rho_(0, 0) = 1.0;
}

void DensityMatrix::set_matrix(const Eigen::MatrixXcd& rho) {
  if (rho.rows() != rho_.rows() || rho.cols() != rho_.cols())
    throw PreconditionError("density matrix dimension mismatch");
  rho_ = rho;
}

void DensityMatrix::apply_1q(int q, const Eigen::Matrix2cd& u) {
  const Eigen::Index m = mask(q);
  const Eigen::Index dim = rho_.rows();
  for (Eigen::Index r = 0; r < dim; ++r) {
    if (r & m) continue;
    for (Eigen::Index c = 0; c < dim; ++c) {
      const auto a0 = rho_(r, c), a1 = rho_(r | m, c);
      rho_(r, c) = u(0, 0) * a0 + u(0, 1) * a1;
      rho_(r | m, c) = u(1, 0) * a0 + u(1, 1) * a1;
    }
  }
  const Eigen::Matrix2cd ud = u.adjoint();
  for (Eigen::Index c = 0; c < dim; ++c) {
    if (c & m) continue;
    for (Eigen::Index r = 0; r < dim; ++r) {
      const auto a0 = rho_(r, c), a1 = rho_(r, c | m);
      rho_(r, c) = a0 * ud(0, 0) + a1 * ud(1, 0);
      rho_(r, c | m) = a0 * ud(0, 1) + a1 * ud(1, 1);
    }
  }
}

void DensityMatrix::apply_cz(int a, int b) {
  const Eigen::Index both = mask(a) | mask(b);
  const Eigen::Index dim = rho_.rows();
  for (Eigen::Index r = 0; r < dim; ++r) {
    const bool sr = (r & both) == both;
    for (Eigen::Index c = 0; c < dim; ++c)
      if (sr != ((c & both) == both)) rho_(r, c) = -rho_(r, c);
  }
}

void DensityMatrix::apply_channel(int q, const KrausChannel& k) {
  const Eigen::MatrixXcd before = rho_;
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(rho_.rows(), rho_.cols());
  for (const auto& op : k.ops()) {
    rho_ = before;
    // K rho K^dag via the unitary path; apply_1q only assumes a 2x2 matrix.
    apply_1q(q, op);
    acc += rho_;
  }
  rho_ = std::move(acc);
}

void DensityMatrix::depolarize_1q(int q, double p) {
  if (p == 0.0) return;
  const Eigen::Index m = mask(q);
  const Eigen::Index dim = rho_.rows();
  for (Eigen::Index r = 0; r < dim; ++r) {
    if (r & m) continue;
    for (Eigen::Index c = 0; c < dim; ++c) {
      if (c & m) continue;
      const auto avg = 0.5 * (rho_(r, c) + rho_(r | m, c | m));
      rho_(r, c) = (1 - p) * rho_(r, c) + p * avg;
      rho_(r | m, c | m) = (1 - p) * rho_(r | m, c | m) + p * avg;
      rho_(r | m, c) *= (1 - p);
      rho_(r, c | m) *= (1 - p);
    }
  }
}

void DensityMatrix::depolarize_2q(int a, int b, double p) {
  if (p == 0.0) return;
  const Eigen::Index ma = mask(a), mb = mask(b), both = ma | mb;
  const Eigen::Index sub[4] = {0, mb, ma, both};
  const Eigen::Index dim = rho_.rows();
  for (Eigen::Index r = 0; r < dim; ++r) {
    if (r & both) continue;
    for (Eigen::Index c = 0; c < dim; ++c) {
      if (c & both) continue;
      std::complex<double> tr = 0;
      for (Eigen::Index s : sub) tr += rho_(r | s, c | s);
      for (Eigen::Index s : sub)
        for (Eigen::Index t : sub) rho_(r | s, c | t) *= (1 - p);
      for (Eigen::Index s : sub) rho_(r | s, c | s) += p * tr / 4.0;
    }
  }
}

void DensityMatrix::relax(int q, double gamma, double lambda) {
  if (gamma == 0.0 && lambda == 0.0) return;
  const Eigen::Index m = mask(q);
  const Eigen::Index dim = rho_.rows();
  const double coh = std::sqrt(1.0 - gamma) * (1.0 - lambda);
  for (Eigen::Index r = 0; r < dim; ++r) {
    if (r & m) continue;
    for (Eigen::Index c = 0; c < dim; ++c) {
      if (c & m) continue;
      rho_(r, c) += gamma * rho_(r | m, c | m);
      rho_(r | m, c | m) *= (1.0 - gamma);
      rho_(r | m, c) *= coh;
      rho_(r, c | m) *= coh;
    }
  }
}

Eigen::VectorXd DensityMatrix::diagonal() const { return rho_.diagonal().real(); }

bool DensityMatrix::is_physical(double tol) const {
  if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  if (std::abs(trace() - 1.0) > tol) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho_);
  return es.eigenvalues().minCoeff() >= -tol;
}

}  // namespace qbench
