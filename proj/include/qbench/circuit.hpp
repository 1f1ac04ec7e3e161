#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qbench {

enum class GateKind { X, X90, Y90, RZ, CZ, Wait, MeasureAll };

std::string_view to_string(GateKind kind);
GateKind gate_kind_from_string(std::string_view name);

/// True for gates that drive a physical pulse (and therefore carry gate noise).
constexpr bool is_physical(GateKind kind) {
  return kind == GateKind::X || kind == GateKind::X90 || kind == GateKind::Y90 ||
         kind == GateKind::CZ;
}

/// One native operation.
///
/// `parallel` marks an op that starts in the same layer as the op before it;
/// ops sharing a layer must act on disjoint qubits. An RZ with `param >= 0`
/// is symbolic and only valid inside a ParamCircuit.
struct Gate {
  GateKind kind = GateKind::X;
  std::array<int, 2> qubits{-1, -1};
  double angle_rad = 0.0;
  double duration_ns = 0.0;
  int param = -1;
  bool parallel = false;

  static Gate x(int q) { return {GateKind::X, {q, -1}}; }
  static Gate x90(int q) { return {GateKind::X90, {q, -1}}; }
  static Gate y90(int q) { return {GateKind::Y90, {q, -1}}; }
  static Gate rz(int q, double angle) { return {GateKind::RZ, {q, -1}, angle}; }
  static Gate rz_param(int q, int index) {
    Gate g{GateKind::RZ, {q, -1}};
    g.param = index;
    return g;
  }
  static Gate cz(int a, int b) { return {GateKind::CZ, {a, b}}; }
  static Gate wait(int q, double ns) { return {GateKind::Wait, {q, -1}, 0.0, ns}; }
  static Gate measure_all() { return {GateKind::MeasureAll, {-1, -1}}; }

  int arity() const {
    switch (kind) {
      case GateKind::CZ: return 2;
      case GateKind::MeasureAll: return 0;
      default: return 1;
    }
  }
  std::span<const int> targets() const { return {qubits.data(), static_cast<size_t>(arity())}; }
  bool is_symbolic() const { return kind == GateKind::RZ && param >= 0; }

  friend bool operator==(const Gate&, const Gate&) = default;
};

/// Gate durations in nanoseconds. RZ is a virtual frame change.
struct TimingModel {
  double single_qubit_gate_ns = 20.0;
  double two_qubit_gate_ns = 40.0;
  double rz_ns = 0.0;
  double measure_ns = 1000.0;

  double duration(const Gate& g) const;
  void validate() const;
  friend bool operator==(const TimingModel&, const TimingModel&) = default;
};

/// Ordered native-gate program over `n_qubits` qubits.
///
/// Every append is validated, so a constructed Circuit always satisfies its
/// invariants: indices in range, CZ on distinct qubits, finite RZ angles,
/// non-negative waits, at most one MEASURE_ALL and only as the final op.
class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(int n_qubits, std::string label = {});

  Circuit& append(Gate g);
  Circuit& append(std::span<const Gate> gates);

  int n_qubits() const { return n_qubits_; }
  const std::vector<Gate>& ops() const { return ops_; }
  const std::string& label() const { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }
  bool measured() const { return !ops_.empty() && ops_.back().kind == GateKind::MeasureAll; }
  bool has_symbolic() const;
  /// Largest symbolic parameter index plus one.
  int parameter_count() const;

  /// [begin, end) op ranges of the explicit layers.
  std::vector<std::pair<size_t, size_t>> layers() const;

  friend bool operator==(const Circuit&, const Circuit&) = default;

 private:
  int n_qubits_ = 0;
  std::vector<Gate> ops_;
  std::string label_;
};

/// Template circuit whose RZ angles may be symbolic parameters 0..k-1.
class ParamCircuit {
 public:
  ParamCircuit() = default;
  explicit ParamCircuit(Circuit body);

  const Circuit& body() const { return body_; }
  int parameter_count() const { return n_params_; }

 private:
  Circuit body_;
  int n_params_ = 0;
};

/// Replace every symbolic RZ by its concrete angle.
Circuit bind_params(const ParamCircuit& pc, std::span<const double> values);

/// Wall time of a circuit under layered scheduling: each explicit layer costs
/// its longest op.
double circuit_duration(const Circuit& c, const TimingModel& t);

/// `a` followed by `b`. The first op of `b` always opens a new layer.
Circuit concatenate(const Circuit& a, const Circuit& b);

/// Greedy layer packing: an op joins the current layer when its qubits are
/// disjoint from it. Ops on disjoint qubits commute, so the unitary is
/// unchanged.
Circuit pack_layers(const Circuit& c);

/// Physical-gate depth under as-soon-as-possible scheduling (RZ, WAIT and
/// measurement excluded).
int native_depth(const Circuit& c);

/// Number of physical pulses (X, X90, Y90, CZ).
int physical_gate_count(const Circuit& c);

}  // namespace qbench
