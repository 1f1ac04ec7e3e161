#include "qbench/device.hpp"

#include "qbench/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace qbench {

double DriftSchedule::multiplier_at(double time_s) const {
  double m = 1.0;
  for (const DriftEpoch& e : epochs)
    if (time_s >= e.start_s) m = e.t2_multiplier;
  return m;
}

bool DeviceModel::connected(int a, int b) const {
  return std::any_of(edges.begin(), edges.end(), [&](const Edge& e) {
    return (e.first == a && e.second == b) || (e.first == b && e.second == a);
  });
}

bool DeviceModel::noiseless() const {
  if (p2 != 0.0 || readout_correlation != 0.0) return false;
  return std::all_of(qubits.begin(), qubits.end(), [](const QubitParams& q) {
    return q.p1 == 0.0 && std::isinf(q.t1_us) && std::isinf(q.t2_us) &&
           q.readout == Eigen::Matrix2d::Identity();
  });
}

void DeviceModel::validate() const {
  timing.validate();
  for (size_t i = 0; i < qubits.size(); ++i) {
    const QubitParams& q = qubits[i];
    const std::string where = "qubit " + std::to_string(i) + ": ";
    if (!(q.t1_us > 0.0)) throw PreconditionError(where + "T1 must be > 0");
    if (!(q.t2_us > 0.0) || q.t2_us > 2.0 * q.t1_us)
      throw PreconditionError(where + "need 0 < T2 <= 2 T1");
    for (int r = 0; r < 2; ++r) {
      if ((q.readout.row(r).array() < 0.0).any() || (q.readout.row(r).array() > 1.0).any())
        throw PreconditionError(where + "readout entries must lie in [0, 1]");
      if (std::abs(q.readout.row(r).sum() - 1.0) > 1e-12)
        throw PreconditionError(where + "readout rows must sum to 1");
    }
    if (!(q.p1 >= 0.0 && q.p1 < 1.0)) throw PreconditionError(where + "need 0 <= p1 < 1");
  }
  if (!(p2 >= 0.0 && p2 < 1.0)) throw PreconditionError("need 0 <= p2 < 1");
  if (!(readout_correlation >= 0.0 && readout_correlation <= 1.0))
    throw PreconditionError("readout correlation must lie in [0, 1]");
  if (!(drift.jitter_sigma >= 0.0)) throw PreconditionError("jitter sigma must be >= 0");
  for (const DriftEpoch& e : drift.epochs)
    if (!(e.t2_multiplier > 0.0)) throw PreconditionError("drift multipliers must be > 0");
  (void)topology();
}

DeviceModel DeviceModel::at(double time_s, std::span<const double> jitter) const {
  DeviceModel snap = *this;
  snap.drift = {};
  const double m = drift.multiplier_at(time_s);
  for (size_t i = 0; i < snap.qubits.size(); ++i) {
    QubitParams& q = snap.qubits[i];
    if (std::isinf(q.t2_us)) continue;
    const double j = i < jitter.size() ? jitter[i] : 0.0;
    double t2 = q.t2_us * m * std::max(1.0 + j, 1e-3);
    q.t2_us = std::min(t2, 2.0 * q.t1_us);
  }
  return snap;
}

double idle_infidelity(double t1_us, double t2_us, double duration_ns) {
  const double t = duration_ns * 1e-3;
  const double pop = std::isinf(t1_us) ? 1.0 : std::exp(-t / t1_us);
  const double coh = std::isinf(t2_us) ? 1.0 : std::exp(-t / t2_us);
  return 1.0 - (0.5 + pop / 6.0 + coh / 3.0);
}

double depolarizing_for_fidelity(double f1q, double t1_us, double t2_us, double pulse_ns) {
  // Depolarizing then decay: F = (1 - p) F_idle + p / 2, since decay maps I/2
  // to a state with mean fidelity 1/2 over any 2-design.
  const double f_idle = 1.0 - idle_infidelity(t1_us, t2_us, pulse_ns);
  return std::max(0.0, (f_idle - f1q) / (f_idle - 0.5));
}

DeviceModel starmon5_reference_model() {
  constexpr std::array<double, 5> t1{15.45, 15.95, 19.42, 22.74, 12.21};
  constexpr std::array<double, 5> t2{13.29, 24.68, 21.40, 21.40, 16.20};
  constexpr std::array<double, 5> f1q{0.99798, 0.99827, 0.99812, 0.99828, 0.99868};
  constexpr std::array<double, 5> fro{0.967, 0.968, 0.975, 0.984, 0.964};

  DeviceModel d;
  d.name = "starmon5-reference";
  d.p2 = 0.02;
  d.edges = {{0, 2}, {1, 2}, {3, 2}, {4, 2}};
  for (size_t i = 0; i < t1.size(); ++i) {
    QubitParams q;
    q.t1_us = t1[i];
    q.t2_us = t2[i];
    const double e = 1.0 - fro[i];
    q.readout << 1.0 - e, e, e, 1.0 - e;
    q.p1 = depolarizing_for_fidelity(f1q[i], q.t1_us, q.t2_us, d.timing.single_qubit_gate_ns);
    d.qubits.push_back(q);
  }
  d.validate();
  return d;
}

DeviceModel ideal_model(int n_qubits) {
  DeviceModel d;
  d.name = "ideal";
  d.qubits.assign(static_cast<size_t>(n_qubits), QubitParams{});
  d.edges = Topology::all_to_all(n_qubits).edges();
  return d;
}

}  // namespace qbench
