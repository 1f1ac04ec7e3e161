#include "qbench/quantum_volume.hpp"

#include "qbench/error.hpp"
#include "qbench/routing.hpp"
#include "qbench/simulator.hpp"
#include "qbench/synthesis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace qbench {
namespace {

// Embed a two-qubit block acting on (a, b) into an n-qubit operator.
Eigen::MatrixXcd embed_pair(const Eigen::Matrix4cd& u, int a, int b, int n) {
  const Eigen::Index dim = Eigen::Index(1) << n;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  const int sa = n - 1 - a, sb = n - 1 - b;
  for (Eigen::Index col = 0; col < dim; ++col) {
    const int in = int((col >> sa) & 1) * 2 + int((col >> sb) & 1);
    const Eigen::Index rest = col & ~((Eigen::Index(1) << sa) | (Eigen::Index(1) << sb));
    for (int o = 0; o < 4; ++o) {
      const Eigen::Index row = rest | (Eigen::Index(o >> 1) << sa) | (Eigen::Index(o & 1) << sb);
      out(row, col) = u(o, in);
    }
  }
  return out;
}

}  // namespace

Eigen::MatrixXcd QVCircuitSpec::unitary() const {
  const Eigen::Index dim = Eigen::Index(1) << width;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  for (const QVLayer& layer : layers)
    for (size_t k = 0; k < layer.blocks.size(); ++k)
      u = embed_pair(layer.blocks[k], layer.permutation[2 * k], layer.permutation[2 * k + 1], width) * u;
  return u;
}

QVCircuit gen_qv_circuit(int d, std::uint64_t seed) { return gen_model_circuit(d, d, seed); }

QVCircuit gen_model_circuit(int d, int depth, std::uint64_t seed) {
  if (d < 2) throw PreconditionError("QV width must be >= 2");
  if (depth < 0) throw PreconditionError("QV depth must be >= 0");
  std::mt19937_64 rng(seed);
  QVCircuit out;
  out.spec.width = d;
  Circuit c(d, "qv_w" + std::to_string(d) + "_d" + std::to_string(depth));
  for (int l = 0; l < depth; ++l) {
    QVLayer layer;
    layer.permutation.resize(static_cast<size_t>(d));
    std::iota(layer.permutation.begin(), layer.permutation.end(), 0);
    std::shuffle(layer.permutation.begin(), layer.permutation.end(), rng);
    for (int k = 0; k < d / 2; ++k) {
      layer.blocks.push_back(haar_su4(rng));
      c.append(synthesize_2q(layer.blocks.back(), layer.permutation[2 * k], layer.permutation[2 * k + 1]));
    }
    out.spec.layers.push_back(std::move(layer));
  }
  out.circuit = pack_layers(merge_single_qubit_gates(c));
  out.circuit.append(Gate::measure_all());
  return out;
}

std::set<std::uint64_t> heavy_set(const Eigen::VectorXd& ideal_probs) {
  if (ideal_probs.size() == 0) throw PreconditionError("empty distribution");
  std::vector<double> sorted(ideal_probs.begin(), ideal_probs.end());
  std::sort(sorted.begin(), sorted.end());
  const size_t n = sorted.size();
  const double median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  std::set<std::uint64_t> heavy;
  for (Eigen::Index i = 0; i < ideal_probs.size(); ++i)
    if (ideal_probs[i] > median) heavy.insert(static_cast<std::uint64_t>(i));
  return heavy;
}

double heavy_mass(const Eigen::VectorXd& ideal_probs) {
  double m = 0.0;
  for (std::uint64_t i : heavy_set(ideal_probs)) m += ideal_probs[static_cast<Eigen::Index>(i)];
  return m;
}

int QVResult::log2_qv() const { return std::countr_zero(static_cast<unsigned>(qv)); }

QVResult run_quantum_volume(Backend& backend, const QVConfig& cfg) {
  const Capabilities caps = backend.capabilities();
  const int max_width = cfg.max_width > 0 ? cfg.max_width : caps.n_qubits;
  if (cfg.min_width < 2 || max_width < cfg.min_width)
    throw PreconditionError("QV widths must satisfy 2 <= min_width <= max_width");
  if (max_width > caps.n_qubits) throw CapabilityError("QV width exceeds the backend");
  if (cfg.n_circuits < 1 || cfg.shots < 1) throw PreconditionError("QV needs circuits and shots");
  const Topology topo = caps.topology();

  QVResult out;
  bool consecutive = true;
  for (int d = cfg.min_width; d <= max_width; ++d) {
    std::vector<Circuit> physical;
    std::vector<std::vector<int>> layouts;
    std::vector<std::set<std::uint64_t>> heavy;
    double ideal = 0.0;
    for (int i = 0; i < cfg.n_circuits; ++i) {
      const QVCircuit qc = gen_qv_circuit(d, circuit_seed(circuit_seed(cfg.seed, static_cast<size_t>(d)), i));
      const Eigen::VectorXd probs = run_ideal(qc.circuit);
      heavy.push_back(heavy_set(probs));
      for (std::uint64_t h : heavy.back()) ideal += probs[static_cast<Eigen::Index>(h)];
      MappedCircuit mc = map_to_device(qc.circuit, topo);
      physical.push_back(pack_layers(merge_single_qubit_gates(mc.circuit)));
      layouts.push_back(std::move(mc.final_layout));
    }
    const auto tables = submit_and_wait(backend, physical, cfg.shots, circuit_seed(cfg.seed, 1000 + d));

    QVDepthResult r;
    r.width = d;
    r.ideal_heavy = ideal / cfg.n_circuits;
    double sum = 0.0;
    for (size_t i = 0; i < tables.size(); ++i) {
      const ShotTable logical = remap_to_logical(tables[i], layouts[i]);
      std::int64_t hits = 0;
      for (const auto& [bits, count] : logical.counts)
        if (heavy[i].count(from_bitstring(bits))) hits += count;
      sum += static_cast<double>(hits) / static_cast<double>(logical.shots);
    }
    r.mean_heavy = sum / cfg.n_circuits;
    r.std_error = std::sqrt(r.mean_heavy * (1.0 - r.mean_heavy) / cfg.n_circuits);
    r.pass = r.mean_heavy - cfg.z * r.std_error > cfg.threshold;
    consecutive = consecutive && r.pass;
    if (consecutive) out.qv = 1 << d;
    out.depths.push_back(r);
  }
  if (out.qv == 1) out.flag = "no depth passed";
  return out;
}

}  // namespace qbench
