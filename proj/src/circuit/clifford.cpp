#include "qbench/clifford.hpp"

#include "qbench/error.hpp"

#include <array>
#include <numbers>

namespace qbench {
namespace {

constexpr double kPi = std::numbers::pi;

enum class Pulse { X, Y, X90, MX90, Y90, MY90, YY };

// Frame-changed pulses cost nothing extra: Y = RZ(pi/2) X RZ(-pi/2), and the
// negative quarter turns are the positive ones conjugated by RZ(pi).
void emit(Pulse p, std::vector<Gate>& out) {
  switch (p) {
    case Pulse::X: out.push_back(Gate::x(0)); break;
    case Pulse::Y:
      out.push_back(Gate::rz(0, -kPi / 2));
      out.push_back(Gate::x(0));
      out.push_back(Gate::rz(0, kPi / 2));
      break;
    case Pulse::X90: out.push_back(Gate::x90(0)); break;
    case Pulse::MX90:
      out.push_back(Gate::rz(0, kPi));
      out.push_back(Gate::x90(0));
      out.push_back(Gate::rz(0, -kPi));
      break;
    case Pulse::Y90: out.push_back(Gate::y90(0)); break;
    case Pulse::MY90:
      out.push_back(Gate::rz(0, kPi));
      out.push_back(Gate::y90(0));
      out.push_back(Gate::rz(0, -kPi));
      break;
    case Pulse::YY:
      out.push_back(Gate::y90(0));
      out.push_back(Gate::y90(0));
      break;
  }
}

// Generator words in time order, grouped as Paulis, 2pi/3 rotations, pi/2
// rotations and Hadamard-like elements. 45 pulses over 24 elements.
const std::vector<std::vector<Pulse>>& words() {
  using enum Pulse;
  static const std::vector<std::vector<Pulse>> w = {
      {}, {X}, {YY}, {Y, X},
      {X90, Y90}, {X90, MY90}, {MX90, Y90}, {MX90, MY90},
      {Y90, X90}, {Y90, MX90}, {MY90, X90}, {MY90, MX90},
      {X90}, {MX90}, {Y90}, {MY90}, {MX90, Y90, X90}, {MX90, MY90, X90},
      {X, Y90}, {X, MY90}, {Y, X90}, {Y, MX90}, {X90, Y90, X90}, {MX90, Y90, MX90},
  };
  return w;
}

Eigen::Matrix2cd gate_matrix(const Gate& g) {
  switch (g.kind) {
    case GateKind::X: return x_matrix();
    case GateKind::X90: return x90_matrix();
    case GateKind::Y90: return y90_matrix();
    case GateKind::RZ: return rz_matrix(g.angle_rad);
    default: throw PreconditionError("not a single-qubit gate");
  }
}

struct Table {
  std::array<std::vector<Gate>, kCliffordGroupSize> gates;
  std::array<Eigen::Matrix2cd, kCliffordGroupSize> unitary;
  std::array<std::array<int, kCliffordGroupSize>, kCliffordGroupSize> product{};
  std::array<int, kCliffordGroupSize> inverse{};
  int pulses = 0;

  int find(const Eigen::Matrix2cd& u) const {
    for (int i = 0; i < kCliffordGroupSize; ++i)
      if (equal_up_to_phase(u, unitary[static_cast<size_t>(i)], 1e-9)) return i;
    return -1;
  }
};

const Table& table() {
  static const Table t = [] {
    Table t;
    const auto& w = words();
    for (size_t i = 0; i < w.size(); ++i) {
      for (Pulse p : w[i]) emit(p, t.gates[i]);
      Eigen::Matrix2cd u = Eigen::Matrix2cd::Identity();
      for (const Gate& g : t.gates[i]) {
        u = gate_matrix(g) * u;
        if (is_physical(g.kind)) ++t.pulses;
      }
      t.unitary[i] = u;
    }
    for (int a = 0; a < kCliffordGroupSize; ++a) {
      for (int b = 0; b < kCliffordGroupSize; ++b) {
        const int c = t.find(t.unitary[static_cast<size_t>(b)] * t.unitary[static_cast<size_t>(a)]);
        if (c < 0) throw Error("Clifford table is not closed");
        t.product[static_cast<size_t>(a)][static_cast<size_t>(b)] = c;
        if (c == 0) t.inverse[static_cast<size_t>(a)] = b;
      }
    }
    return t;
  }();
  return t;
}

void check(CliffordElement c) {
  if (c.index < 0 || c.index >= kCliffordGroupSize)
    throw PreconditionError("Clifford index out of range");
}

}  // namespace

CliffordElement compose_cliffords(CliffordElement a, CliffordElement b) {
  check(a);
  check(b);
  return {table().product[static_cast<size_t>(a.index)][static_cast<size_t>(b.index)]};
}

CliffordElement inverse_clifford(CliffordElement a) {
  check(a);
  return {table().inverse[static_cast<size_t>(a.index)]};
}

std::vector<Gate> clifford_gates(CliffordElement c, int qubit) {
  check(c);
  std::vector<Gate> out = table().gates[static_cast<size_t>(c.index)];
  for (Gate& g : out) g.qubits[0] = qubit;
  return out;
}

Eigen::Matrix2cd clifford_unitary(CliffordElement c) {
  check(c);
  return table().unitary[static_cast<size_t>(c.index)];
}

double mean_clifford_pulse_count() {
  return static_cast<double>(table().pulses) / kCliffordGroupSize;
}

CliffordElement clifford_from_unitary(const Eigen::Matrix2cd& u) {
  const int i = table().find(u);
  if (i < 0) throw PreconditionError("unitary is not a single-qubit Clifford");
  return {i};
}

}  // namespace qbench
