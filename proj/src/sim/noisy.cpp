#include "qbench/simulator.hpp"

#include "qbench/density.hpp"
#include "qbench/error.hpp"
#include "qbench/statevector.hpp"
#include "qbench/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>

namespace qbench {
namespace {

// Qubits touched by anything other than the final measurement.
std::vector<int> active_qubits(const Circuit& c) {
  std::vector<bool> used(static_cast<size_t>(c.n_qubits()), false);
  for (const Gate& g : c.ops())
    for (int q : g.targets()) used[static_cast<size_t>(q)] = true;
  std::vector<int> out;
  for (int q = 0; q < c.n_qubits(); ++q)
    if (used[static_cast<size_t>(q)]) out.push_back(q);
  return out;
}

// Expand an index over the active qubits into an index over all n qubits.
std::uint64_t expand_index(std::uint64_t local, const std::vector<int>& active, int n) {
  const int k = static_cast<int>(active.size());
  std::uint64_t full = 0;
  for (int i = 0; i < k; ++i)
    if ((local >> (k - 1 - i)) & 1u) full |= std::uint64_t(1) << (n - 1 - active[static_cast<size_t>(i)]);
  return full;
}

double decay_probability(double t_us, double tau_us) {
  if (std::isinf(tau_us) || t_us <= 0.0) return 0.0;
  return 1.0 - std::exp(-t_us / tau_us);
}

Eigen::VectorXd simulate_density(const Circuit& c, const DeviceModel& d, const std::vector<int>& active) {
  std::vector<int> local(static_cast<size_t>(c.n_qubits()), -1);
  for (size_t i = 0; i < active.size(); ++i) local[static_cast<size_t>(active[i])] = static_cast<int>(i);
  DensityMatrix rho(static_cast<int>(active.size()));

  // Per-qubit relaxation parameters: 1/T_phi = 1/T2 - 1/(2 T1).
  struct Decay {
    double t1, tphi;
  };
  std::vector<Decay> decay;
  for (int q : active) {
    const QubitParams& p = d.qubits[static_cast<size_t>(q)];
    const double rate = (std::isinf(p.t2_us) ? 0.0 : 1.0 / p.t2_us) - (std::isinf(p.t1_us) ? 0.0 : 0.5 / p.t1_us);
    decay.push_back({p.t1_us, rate > 1e-15 ? 1.0 / rate : kNoDecay});
  }

  for (auto [begin, end] : c.layers()) {
    double tau_ns = 0.0;
    bool measure = false;
    for (size_t i = begin; i < end; ++i) {
      const Gate& g = c.ops()[i];
      tau_ns = std::max(tau_ns, d.timing.duration(g));
      switch (g.kind) {
        case GateKind::MeasureAll: measure = true; break;
        case GateKind::Wait: break;
        case GateKind::CZ: {
          const int a = local[static_cast<size_t>(g.qubits[0])], b = local[static_cast<size_t>(g.qubits[1])];
          rho.apply_cz(a, b);
          rho.depolarize_2q(a, b, d.p2);
          break;
        }
        case GateKind::RZ: rho.apply_1q(local[static_cast<size_t>(g.qubits[0])], single_qubit_matrix(g)); break;
        default: {
          const int q = local[static_cast<size_t>(g.qubits[0])];
          rho.apply_1q(q, single_qubit_matrix(g));
          rho.depolarize_1q(q, d.qubits[static_cast<size_t>(g.qubits[0])].p1);
        }
      }
    }
    // Readout error covers the measurement window.
    if (measure || tau_ns <= 0.0) continue;
    const double tau_us = tau_ns * 1e-3;
    for (size_t i = 0; i < active.size(); ++i)
      rho.relax(static_cast<int>(i), decay_probability(tau_us, decay[i].t1),
                decay_probability(tau_us, decay[i].tphi));
  }
  return rho.diagonal();
}

Eigen::VectorXd simulate_pure(const Circuit& c, const std::vector<int>& active) {
  std::vector<int> local(static_cast<size_t>(c.n_qubits()), -1);
  for (size_t i = 0; i < active.size(); ++i) local[static_cast<size_t>(active[i])] = static_cast<int>(i);
  StateVector psi(static_cast<int>(active.size()));
  for (Gate g : c.ops()) {
    if (g.kind == GateKind::MeasureAll || g.kind == GateKind::Wait) continue;
    for (int k = 0; k < g.arity(); ++k) g.qubits[static_cast<size_t>(k)] = local[static_cast<size_t>(g.qubits[static_cast<size_t>(k)])];
    psi.apply(g);
  }
  return psi.probabilities();
}

Eigen::VectorXd clean(Eigen::VectorXd p) {
  p = p.cwiseMax(0.0);
  const double s = p.sum();
  if (s > 0) p /= s;
  return p;
}

}  // namespace

void check_executable(const Circuit& c, const DeviceModel& device) {
  if (c.n_qubits() > device.n_qubits())
    throw CapabilityError("circuit '" + c.label() + "' needs " + std::to_string(c.n_qubits()) +
                          " qubits, device has " + std::to_string(device.n_qubits()));
  for (const Gate& g : c.ops()) {
    if (g.is_symbolic()) throw CapabilityError("circuit '" + c.label() + "' has unbound parameters");
    if (g.kind == GateKind::CZ && !device.connected(g.qubits[0], g.qubits[1]))
      throw CapabilityError("CZ(" + std::to_string(g.qubits[0]) + "," + std::to_string(g.qubits[1]) +
                            ") is not a coupled pair on " + device.name);
  }
}

Eigen::VectorXd run_ideal(const Circuit& c, int max_qubits) {
  if (c.n_qubits() > max_qubits)
    throw PreconditionError("ideal simulation capped at " + std::to_string(max_qubits) + " qubits");
  if (c.has_symbolic()) throw PreconditionError("bind parameters before simulating");
  StateVector psi(c.n_qubits());
  for (const Gate& g : c.ops()) psi.apply(g);
  return psi.probabilities();
}

std::map<std::string, double> to_distribution(const Eigen::VectorXd& probs, int n_qubits, double cutoff) {
  std::map<std::string, double> out;
  for (Eigen::Index i = 0; i < probs.size(); ++i)
    if (probs(i) > cutoff) out[to_bitstring(static_cast<std::uint64_t>(i), n_qubits)] = probs(i);
  return out;
}

ShotTable sample_distribution(const Eigen::VectorXd& probs, int n_qubits, std::int64_t shots,
                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Eigen::VectorXd p = clean(probs);
  std::discrete_distribution<std::uint64_t> pick(p.data(), p.data() + p.size());
  std::unordered_map<std::uint64_t, std::int64_t> hist;
  for (std::int64_t s = 0; s < shots; ++s) ++hist[pick(rng)];
  ShotTable t;
  t.shots = shots;
  t.seed = seed;
  t.n_qubits = n_qubits;
  for (auto [idx, n] : hist) t.counts[to_bitstring(idx, n_qubits)] = n;
  return t;
}

ShotTable run_noisy(const Circuit& c, const DeviceModel& device, std::int64_t shots, std::uint64_t seed) {
  device.validate();
  check_executable(c, device);
  if (shots < 0) throw PreconditionError("shot count must be >= 0");
  const int n = c.n_qubits();
  const std::vector<int> active = active_qubits(c);
  if (static_cast<int>(active.size()) > kNoisyQubitCap)
    throw PreconditionError("noisy simulation capped at " + std::to_string(kNoisyQubitCap) + " active qubits");

  const Eigen::VectorXd probs = clean(device.noiseless() ? simulate_pure(c, active)
                                                         : simulate_density(c, device, active));

  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::uint64_t> pick(probs.data(), probs.data() + probs.size());
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<Edge> pairs;
  if (device.readout_correlation > 0.0)
    for (auto [a, b] : device.edges)
      if (a < n && b < n) pairs.emplace_back(a, b);

  std::unordered_map<std::uint64_t, std::int64_t> hist;
  for (std::int64_t s = 0; s < shots; ++s) {
    std::uint64_t bits = expand_index(pick(rng), active, n);
    for (int q = 0; q < n; ++q) {
      const std::uint64_t m = std::uint64_t(1) << (n - 1 - q);
      const int prepared = (bits & m) ? 1 : 0;
      const double flip = device.qubits[static_cast<size_t>(q)].readout(prepared, 1 - prepared);
      if (flip > 0.0 && unit(rng) < flip) bits ^= m;
    }
    for (auto [a, b] : pairs)
      if (unit(rng) < device.readout_correlation)
        bits ^= (std::uint64_t(1) << (n - 1 - a)) | (std::uint64_t(1) << (n - 1 - b));
    ++hist[bits];
  }

  ShotTable t;
  t.shots = shots;
  t.seed = seed;
  t.n_qubits = n;
  for (auto [idx, cnt] : hist) t.counts[to_bitstring(idx, n)] = cnt;
  return t;
}

}  // namespace qbench
