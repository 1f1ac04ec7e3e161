#include "qbench/synthesis.hpp"

#include "qbench/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>

namespace qbench {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAngleTol = 1e-10;

double wrap_angle(double a) {
  a = std::remainder(a, 2 * kPi);
  return a;
}

void push_rz(std::vector<Gate>& out, int q, double angle) {
  angle = wrap_angle(angle);
  if (std::abs(angle) > kAngleTol) out.push_back(Gate::rz(q, angle));
}

// Magic basis: local unitaries become real orthogonal matrices and XX, YY,
// ZZ become diagonal.
const Eigen::Matrix4cd& magic() {
  static const Eigen::Matrix4cd m = [] {
    using C = std::complex<double>;
    const double s = 1.0 / std::sqrt(2.0);
    Eigen::Matrix4cd m;
    m << C(s, 0), C(0, 0), C(0, 0), C(0, s),
         C(0, 0), C(0, s), C(s, 0), C(0, 0),
         C(0, 0), C(0, s), C(-s, 0), C(0, 0),
         C(s, 0), C(0, 0), C(0, 0), C(0, -s);
    return m;
  }();
  return m;
}

Eigen::Matrix2cd pauli(int k) {
  using C = std::complex<double>;
  Eigen::Matrix2cd p;
  switch (k) {
    case 1: p << 0, 1, 1, 0; break;
    case 2: p << 0, C(0, -1), C(0, 1), 0; break;
    default: p << 1, 0, 0, -1; break;
  }
  return p;
}

// Split a 4x4 product A (x) B into its factors.
std::pair<Eigen::Matrix2cd, Eigen::Matrix2cd> factor_local(const Eigen::Matrix4cd& l) {
  int bi = 0, bj = 0;
  double best = -1;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double n = l.block<2, 2>(2 * i, 2 * j).norm();
      if (n > best) best = n, bi = i, bj = j;
    }
  Eigen::Matrix2cd b = l.block<2, 2>(2 * bi, 2 * bj);
  const std::complex<double> det = b.determinant();
  b /= std::sqrt(det);
  Eigen::Matrix2cd a;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) a(i, j) = (b.adjoint() * l.block<2, 2>(2 * i, 2 * j)).trace() / 2.0;
  return {a, b};
}

}  // namespace

Eigen::Matrix2cd single_qubit_matrix(const Gate& g) {
  switch (g.kind) {
    case GateKind::X: return x_matrix();
    case GateKind::X90: return x90_matrix();
    case GateKind::Y90: return y90_matrix();
    case GateKind::RZ:
      if (g.is_symbolic()) throw PreconditionError("symbolic RZ has no matrix; bind parameters first");
      return rz_matrix(g.angle_rad);
    case GateKind::Wait: return Eigen::Matrix2cd::Identity();
    default: throw PreconditionError("not a single-qubit gate: " + std::string(to_string(g.kind)));
  }
}

Eigen::MatrixXcd circuit_unitary(const Circuit& c) {
  const int n = c.n_qubits();
  const Eigen::Index dim = Eigen::Index(1) << n;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  for (const Gate& g : c.ops()) {
    if (g.kind == GateKind::MeasureAll || g.kind == GateKind::Wait) continue;
    if (g.kind == GateKind::CZ) {
      const Eigen::Index ma = Eigen::Index(1) << (n - 1 - g.qubits[0]);
      const Eigen::Index mb = Eigen::Index(1) << (n - 1 - g.qubits[1]);
      for (Eigen::Index r = 0; r < dim; ++r)
        if ((r & ma) && (r & mb)) u.row(r) *= -1.0;
      continue;
    }
    const Eigen::Matrix2cd m = single_qubit_matrix(g);
    const Eigen::Index mask = Eigen::Index(1) << (n - 1 - g.qubits[0]);
    for (Eigen::Index r = 0; r < dim; ++r) {
      if (r & mask) continue;
      const Eigen::RowVectorXcd r0 = u.row(r), r1 = u.row(r | mask);
      u.row(r) = m(0, 0) * r0 + m(0, 1) * r1;
      u.row(r | mask) = m(1, 0) * r0 + m(1, 1) * r1;
    }
  }
  return u;
}

ZyzAngles zyz_decompose(const Eigen::Matrix2cd& u) {
  const std::complex<double> det = u.determinant();
  const Eigen::Matrix2cd v = u / std::sqrt(det);
  ZyzAngles z;
  z.theta = 2 * std::atan2(std::abs(v(1, 0)), std::abs(v(0, 0)));
  const double sum = 2 * std::arg(v(1, 1));   // phi + lambda
  const double diff = 2 * std::arg(v(1, 0));  // phi - lambda
  z.phi = (sum + diff) / 2;
  z.lambda = (sum - diff) / 2;
  return z;
}

std::vector<Gate> synthesize_1q(const Eigen::Matrix2cd& u, int qubit) {
  const ZyzAngles z = zyz_decompose(u);
  std::vector<Gate> out;
  if (z.theta < kAngleTol) {
    push_rz(out, qubit, z.phi + z.lambda);
  } else if (std::abs(z.theta - kPi / 2) < kAngleTol) {
    // RY(pi/2) = RZ(pi/2) X90 RZ(-pi/2)
    push_rz(out, qubit, z.lambda - kPi / 2);
    out.push_back(Gate::x90(qubit));
    push_rz(out, qubit, z.phi + kPi / 2);
  } else if (std::abs(z.theta - kPi) < kAngleTol) {
    push_rz(out, qubit, z.lambda - kPi / 2);
    out.push_back(Gate::x(qubit));
    push_rz(out, qubit, z.phi + kPi / 2);
  } else {
    // RZ(phi) RY(theta) RZ(lambda) = RZ(phi + pi) X90 RZ(theta + pi) X90 RZ(lambda)
    push_rz(out, qubit, z.lambda);
    out.push_back(Gate::x90(qubit));
    push_rz(out, qubit, z.theta + kPi);
    out.push_back(Gate::x90(qubit));
    push_rz(out, qubit, z.phi + kPi);
  }
  return out;
}

Eigen::Matrix4cd canonical_gate(double a, double b, double c) {
  const std::complex<double> i(0, 1);
  Eigen::Matrix4cd out = Eigen::Matrix4cd::Identity();
  const std::array<double, 3> coeff{a, b, c};
  for (int k = 0; k < 3; ++k) {
    const Eigen::Matrix4cd p = kron(pauli(k + 1), pauli(k + 1));
    out = out * (std::cos(coeff[static_cast<size_t>(k)]) * Eigen::Matrix4cd::Identity() +
                 i * std::sin(coeff[static_cast<size_t>(k)]) * p);
  }
  return out;
}

KakDecomposition kak_decompose(const Eigen::Matrix4cd& u_in) {
  const Eigen::Matrix4cd& m = magic();
  const std::complex<double> det = u_in.determinant();
  const std::complex<double> norm = std::pow(det, 0.25);
  const Eigen::Matrix4cd u = u_in / norm;
  const Eigen::Matrix4cd up = m.adjoint() * u * m;
  const Eigen::Matrix4cd sym = up.transpose() * up;

  // sym is complex symmetric and unitary: its real and imaginary parts commute
  // and share a real orthogonal eigenbasis. A generic real combination of the
  // two exposes it.
  Eigen::Matrix4d p;
  bool ok = false;
  for (double w : {0.5, 0.3137, 0.7541, 0.1292, 0.9013, 0.6421}) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(w * sym.real() + (1 - w) * sym.imag());
    p = es.eigenvectors();
    const Eigen::Matrix4cd d = p.transpose().cast<std::complex<double>>() * sym * p;
    if ((d - Eigen::Matrix4cd(d.diagonal().asDiagonal())).cwiseAbs().maxCoeff() < 1e-9) {
      ok = true;
      break;
    }
  }
  if (!ok) throw Error("KAK: failed to diagonalize");
  if (p.determinant() < 0) p.col(0) *= -1;

  const Eigen::Matrix4cd pc = p.cast<std::complex<double>>();
  Eigen::Vector4cd d = (pc.transpose() * sym * pc).diagonal();
  for (int k = 0; k < 4; ++k) d(k) = std::sqrt(d(k));
  Eigen::Matrix4cd k1 = up * pc * d.cwiseInverse().asDiagonal();
  if (k1.determinant().real() < 0) {
    d(0) = -d(0);
    k1.col(0) *= -1;
  }
  const Eigen::Matrix4cd k2 = pc.transpose();

  // Diagonal phases -> (a, b, c, g) through the eigenvalue signs of XX, YY, ZZ
  // in the magic basis.
  Eigen::Matrix4d signs;
  for (int k = 0; k < 3; ++k) {
    const Eigen::Matrix4cd pp = m.adjoint() * kron(pauli(k + 1), pauli(k + 1)) * m;
    for (int r = 0; r < 4; ++r) signs(r, k) = pp(r, r).real();
  }
  signs.col(3).setOnes();
  Eigen::Vector4d phases;
  for (int r = 0; r < 4; ++r) phases(r) = std::arg(d(r));
  const Eigen::Vector4d abcg = signs.fullPivLu().solve(phases);

  KakDecomposition out;
  out.a = abcg(0);
  out.b = abcg(1);
  out.c = abcg(2);
  out.global_phase = abcg(3) + std::arg(norm);
  const Eigen::Matrix4cd left = m * k1 * m.adjoint();
  const Eigen::Matrix4cd right = m * k2 * m.adjoint();
  std::tie(out.after0, out.after1) = factor_local(left);
  std::tie(out.before0, out.before1) = factor_local(right);
  return out;
}

std::vector<Gate> synthesize_2q(const Eigen::Matrix4cd& u, int q0, int q1) {
  const KakDecomposition k = kak_decompose(u);
  const Eigen::Matrix2cd h = (Eigen::Matrix2cd() << 1, 1, 1, -1).finished() / std::sqrt(2.0);

  // Three-CNOT realization of the canonical gate, each CNOT written as
  // H(target) CZ H(target). Segments hold the local gates between CZs, in
  // time order, for qubit 0 and qubit 1.
  std::array<Eigen::Matrix2cd, 4> s0, s1;
  s0[0] = h * k.before0;
  s1[0] = rz_matrix(-kPi / 2) * k.before1;
  s0[1] = rz_matrix(kPi / 2 - 2 * k.c) * h;
  s1[1] = h * ry_matrix(2 * k.a - kPi / 2);
  s0[2] = h;
  s1[2] = ry_matrix(kPi / 2 - 2 * k.b) * h;
  s0[3] = k.after0 * rz_matrix(kPi / 2) * h;
  s1[3] = k.after1;

  std::vector<Gate> out;
  for (int seg = 0; seg < 4; ++seg) {
    if (seg > 0) out.push_back(Gate::cz(q0, q1));
    for (Gate g : synthesize_1q(s0[static_cast<size_t>(seg)], q0)) out.push_back(g);
    for (Gate g : synthesize_1q(s1[static_cast<size_t>(seg)], q1)) out.push_back(g);
  }
  return out;
}

std::vector<Gate> hadamard(int q) {
  return {Gate::rz(q, kPi / 2), Gate::x90(q), Gate::rz(q, kPi / 2)};
}

std::vector<Gate> cnot(int control, int target) {
  std::vector<Gate> out = hadamard(target);
  out.push_back(Gate::cz(control, target));
  for (Gate g : hadamard(target)) out.push_back(g);
  return out;
}

std::vector<Gate> swap_gates(int a, int b) {
  std::vector<Gate> out;
  for (auto [c, t] : {std::pair{a, b}, std::pair{b, a}, std::pair{a, b}})
    for (Gate g : cnot(c, t)) out.push_back(g);
  return out;
}

std::vector<Gate> rzz(int a, int b, double theta) {
  std::vector<Gate> out = cnot(a, b);
  out.push_back(Gate::rz(b, theta));
  for (Gate g : cnot(a, b)) out.push_back(g);
  return out;
}

std::vector<Gate> rx(int q, double theta) {
  std::vector<Gate> out = hadamard(q);
  out.push_back(Gate::rz(q, theta));
  for (Gate g : hadamard(q)) out.push_back(g);
  return out;
}

std::vector<Gate> cphase(int a, int b, double theta) {
  std::vector<Gate> out{Gate::rz(a, theta / 2), Gate::rz(b, theta / 2)};
  for (Gate g : rzz(a, b, -theta / 2)) out.push_back(g);
  return out;
}

Circuit merge_single_qubit_gates(const Circuit& c) {
  Circuit out(c.n_qubits(), c.label());
  std::vector<std::optional<Eigen::Matrix2cd>> pending(static_cast<size_t>(c.n_qubits()));
  auto flush = [&](int q) {
    auto& p = pending[static_cast<size_t>(q)];
    if (!p) return;
    for (Gate g : synthesize_1q(*p, q)) out.append(g);
    p.reset();
  };
  for (Gate g : c.ops()) {
    g.parallel = false;
    switch (g.kind) {
      case GateKind::X:
      case GateKind::X90:
      case GateKind::Y90:
      case GateKind::RZ: {
        const int q = g.qubits[0];
        if (g.is_symbolic()) {
          flush(q);
          out.append(g);
          break;
        }
        auto& p = pending[static_cast<size_t>(q)];
        p = single_qubit_matrix(g) * p.value_or(Eigen::Matrix2cd::Identity());
        break;
      }
      case GateKind::CZ:
      case GateKind::Wait:
        for (int q : g.targets()) flush(q);
        out.append(g);
        break;
      case GateKind::MeasureAll:
        for (int q = 0; q < c.n_qubits(); ++q) flush(q);
        out.append(g);
        break;
    }
  }
  for (int q = 0; q < c.n_qubits(); ++q) flush(q);
  return out;
}

}  // namespace qbench
