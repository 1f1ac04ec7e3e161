#include "qbench/circuit.hpp"

#include "qbench/error.hpp"

#include <algorithm>
#include <cmath>

namespace qbench {

std::string_view to_string(GateKind kind) {
  switch (kind) {
    case GateKind::X: return "X";
    case GateKind::X90: return "X90";
    case GateKind::Y90: return "Y90";
    case GateKind::RZ: return "RZ";
    case GateKind::CZ: return "CZ";
    case GateKind::Wait: return "WAIT";
    case GateKind::MeasureAll: return "MEASURE_ALL";
  }
  return "?";
}

GateKind gate_kind_from_string(std::string_view name) {
  for (GateKind k : {GateKind::X, GateKind::X90, GateKind::Y90, GateKind::RZ, GateKind::CZ,
                     GateKind::Wait, GateKind::MeasureAll}) {
    if (to_string(k) == name) return k;
  }
  throw PreconditionError("unknown gate kind '" + std::string(name) + "'");
}

double TimingModel::duration(const Gate& g) const {
  switch (g.kind) {
    case GateKind::X:
    case GateKind::X90:
    case GateKind::Y90: return single_qubit_gate_ns;
    case GateKind::RZ: return rz_ns;
    case GateKind::CZ: return two_qubit_gate_ns;
    case GateKind::Wait: return g.duration_ns;
    case GateKind::MeasureAll: return measure_ns;
  }
  return 0.0;
}

void TimingModel::validate() const {
  for (double d : {single_qubit_gate_ns, two_qubit_gate_ns, rz_ns, measure_ns}) {
    if (!(d >= 0.0) || !std::isfinite(d))
      throw PreconditionError("timing model durations must be finite and >= 0");
  }
}

Circuit::Circuit(int n_qubits, std::string label) : n_qubits_(n_qubits), label_(std::move(label)) {
  if (n_qubits < 0) throw PreconditionError("circuit qubit count must be >= 0");
}

Circuit& Circuit::append(Gate g) {
  if (measured()) throw PreconditionError("no op may follow MEASURE_ALL");
  for (int q : g.targets()) {
    if (q < 0 || q >= n_qubits_)
      throw PreconditionError("qubit index " + std::to_string(q) + " out of range for " +
                              std::to_string(n_qubits_) + "-qubit circuit");
  }
  switch (g.kind) {
    case GateKind::CZ:
      if (g.qubits[0] == g.qubits[1]) throw PreconditionError("CZ needs two distinct qubits");
      break;
    case GateKind::RZ:
      if (!std::isfinite(g.angle_rad)) throw PreconditionError("RZ angle must be finite");
      break;
    case GateKind::Wait:
      if (!(g.duration_ns >= 0.0) || !std::isfinite(g.duration_ns))
        throw PreconditionError("WAIT duration must be finite and >= 0");
      break;
    case GateKind::MeasureAll:
      g.parallel = false;
      break;
    default: break;
  }
  if (g.kind != GateKind::RZ) g.param = -1;
  if (g.kind != GateKind::CZ) g.qubits[1] = -1;
  if (g.kind == GateKind::MeasureAll) g.qubits = {-1, -1};
  if (g.parallel) {
    if (ops_.empty()) {
      g.parallel = false;
    } else {
      // The op must be disjoint from everything already in the open layer.
      size_t start = ops_.size() - 1;
      while (start > 0 && ops_[start].parallel) --start;
      for (size_t i = start; i < ops_.size(); ++i) {
        for (int a : ops_[i].targets())
          for (int b : g.targets())
            if (a == b) throw PreconditionError("ops in one layer must act on disjoint qubits");
      }
    }
  }
  ops_.push_back(g);
  return *this;
}

Circuit& Circuit::append(std::span<const Gate> gates) {
  for (const Gate& g : gates) append(g);
  return *this;
}

bool Circuit::has_symbolic() const {
  return std::any_of(ops_.begin(), ops_.end(), [](const Gate& g) { return g.is_symbolic(); });
}

int Circuit::parameter_count() const {
  int n = 0;
  for (const Gate& g : ops_)
    if (g.is_symbolic()) n = std::max(n, g.param + 1);
  return n;
}

std::vector<std::pair<size_t, size_t>> Circuit::layers() const {
  std::vector<std::pair<size_t, size_t>> out;
  for (size_t i = 0; i < ops_.size(); ++i) {
    if (i == 0 || !ops_[i].parallel) out.emplace_back(i, i + 1);
    else out.back().second = i + 1;
  }
  return out;
}

ParamCircuit::ParamCircuit(Circuit body) : body_(std::move(body)), n_params_(body_.parameter_count()) {}

Circuit bind_params(const ParamCircuit& pc, std::span<const double> values) {
  if (static_cast<int>(values.size()) != pc.parameter_count())
    throw PreconditionError("bind_params: expected " + std::to_string(pc.parameter_count()) +
                            " values, got " + std::to_string(values.size()));
  const Circuit& body = pc.body();
  Circuit out(body.n_qubits(), body.label());
  for (Gate g : body.ops()) {
    if (g.is_symbolic()) {
      g.angle_rad = values[static_cast<size_t>(g.param)];
      g.param = -1;
    }
    out.append(g);
  }
  return out;
}

double circuit_duration(const Circuit& c, const TimingModel& t) {
  double total = 0.0;
  for (auto [begin, end] : c.layers()) {
    double longest = 0.0;
    for (size_t i = begin; i < end; ++i) longest = std::max(longest, t.duration(c.ops()[i]));
    total += longest;
  }
  return total;
}

Circuit concatenate(const Circuit& a, const Circuit& b) {
  Circuit out(std::max(a.n_qubits(), b.n_qubits()), a.label());
  out.append(a.ops());
  bool first = true;
  for (Gate g : b.ops()) {
    if (first) g.parallel = false;
    first = false;
    out.append(g);
  }
  return out;
}

Circuit pack_layers(const Circuit& c) {
  Circuit out(c.n_qubits(), c.label());
  std::vector<bool> busy(static_cast<size_t>(c.n_qubits()), false);
  bool open = false;
  for (Gate g : c.ops()) {
    bool fits = open && g.kind != GateKind::MeasureAll;
    for (int q : g.targets())
      if (busy[static_cast<size_t>(q)]) fits = false;
    if (!fits) std::fill(busy.begin(), busy.end(), false);
    g.parallel = fits;
    for (int q : g.targets()) busy[static_cast<size_t>(q)] = true;
    open = g.kind != GateKind::MeasureAll;
    out.append(g);
  }
  return out;
}

int native_depth(const Circuit& c) {
  std::vector<int> level(static_cast<size_t>(c.n_qubits()), 0);
  int depth = 0;
  for (const Gate& g : c.ops()) {
    if (!is_physical(g.kind)) continue;
    int l = 0;
    for (int q : g.targets()) l = std::max(l, level[static_cast<size_t>(q)]);
    ++l;
    for (int q : g.targets()) level[static_cast<size_t>(q)] = l;
    depth = std::max(depth, l);
  }
  return depth;
}

int physical_gate_count(const Circuit& c) {
  return static_cast<int>(
      std::count_if(c.ops().begin(), c.ops().end(), [](const Gate& g) { return is_physical(g.kind); }));
}

}  // namespace qbench
