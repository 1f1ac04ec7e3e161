#include "qbench/app_suite.hpp"

#include "qbench/error.hpp"
#include "qbench/routing.hpp"
#include "qbench/simulator.hpp"
#include "qbench/synthesis.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <random>

namespace qbench {
namespace {

constexpr double kPi = std::numbers::pi;

void append_qft(Circuit& c, int n, bool inverse) {
  std::vector<std::vector<Gate>> blocks;
  for (int i = 0; i < n; ++i) {
    blocks.push_back(hadamard(i));
    for (int j = i + 1; j < n; ++j) blocks.push_back(cphase(j, i, kPi / double(1 << (j - i))));
  }
  for (int i = 0; i < n / 2; ++i) blocks.push_back(swap_gates(i, n - 1 - i));
  if (!inverse) {
    for (const auto& b : blocks) c.append(b);
    return;
  }
  // Inverse: reversed blocks with negated phases. H and SWAP are self-inverse.
  for (int i = n / 2 - 1; i >= 0; --i) c.append(swap_gates(i, n - 1 - i));
  for (int i = n - 1; i >= 0; --i) {
    for (int j = n - 1; j > i; --j) c.append(cphase(j, i, -kPi / double(1 << (j - i))));
    c.append(hadamard(i));
  }
}

std::vector<int> range(int n) {
  std::vector<int> v(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = i;
  return v;
}

}  // namespace

AppCircuit bv_circuit(const std::string& secret) {
  const int n = static_cast<int>(secret.size());
  if (n < 1) throw PreconditionError("BV needs a non-empty secret");
  for (char ch : secret)
    if (ch != '0' && ch != '1') throw PreconditionError("BV secret must be a bitstring");
  Circuit c(n + 1, "bv_" + secret);
  c.append(Gate::x(n)).append(hadamard(n));
  for (int q = 0; q < n; ++q) c.append(hadamard(q));
  for (int q = 0; q < n; ++q)
    if (secret[static_cast<size_t>(q)] == '1') c.append(cnot(q, n));
  for (int q = 0; q < n; ++q) c.append(hadamard(q));
  c.append(hadamard(n)).append(Gate::x(n));
  c.append(Gate::measure_all());
  return {"bv", std::move(c), range(n)};
}

AppCircuit dj_circuit(int n, bool balanced, std::uint64_t mask, bool constant_value) {
  if (n < 1 || n > 62) throw PreconditionError("DJ needs 1..62 inputs");
  if (balanced && (mask == 0 || mask >> n)) throw PreconditionError("balanced DJ needs a non-zero n-bit mask");
  Circuit c(n + 1, balanced ? "dj_balanced" : "dj_constant");
  c.append(Gate::x(n)).append(hadamard(n));
  for (int q = 0; q < n; ++q) c.append(hadamard(q));
  if (balanced) {
    for (int q = 0; q < n; ++q)
      if ((mask >> (n - 1 - q)) & 1u) c.append(cnot(q, n));
  } else if (constant_value) {
    c.append(Gate::x(n));
  }
  for (int q = 0; q < n; ++q) c.append(hadamard(q));
  c.append(hadamard(n)).append(Gate::x(n));
  c.append(Gate::measure_all());
  return {"dj", std::move(c), range(n)};
}

AppCircuit qft_roundtrip_circuit(int n, std::uint64_t basis) {
  if (n < 1 || n > 62) throw PreconditionError("QFT width must be 1..62");
  if (basis >> n) throw PreconditionError("basis state out of range");
  Circuit c(n, "qft_" + to_bitstring(basis, n));
  for (int q = 0; q < n; ++q)
    if ((basis >> (n - 1 - q)) & 1u) c.append(Gate::x(q));
  append_qft(c, n, false);
  append_qft(c, n, true);
  c.append(Gate::measure_all());
  return {"qft", std::move(c), range(n)};
}

Distribution marginal(const Distribution& d, const std::vector<int>& qubits) {
  Distribution out;
  for (const auto& [bits, p] : d) {
    std::string key;
    for (int q : qubits) key += bits.at(static_cast<size_t>(q));
    out[key] += p;
  }
  return out;
}

Distribution marginal(const ShotTable& t, const std::vector<int>& qubits) {
  Distribution d;
  for (const auto& [bits, count] : t.counts) d[bits] = static_cast<double>(count) / static_cast<double>(t.shots);
  return marginal(d, qubits);
}

double hellinger_fidelity(const Distribution& p, const Distribution& q) {
  double s = 0.0;
  for (const auto& [bits, pv] : p) {
    const auto it = q.find(bits);
    if (it != q.end()) s += std::sqrt(pv * it->second);
  }
  return s * s;
}

double normalized_fidelity(const Distribution& measured, const Distribution& ideal, int n_bits) {
  if (n_bits < 1 || n_bits > 24) throw PreconditionError("normalized fidelity supports 1..24 bits");
  // Against the uniform distribution: F_u = (sum sqrt(q_i / 2^n))^2.
  double root = 0.0;
  for (const auto& [bits, q] : ideal) root += std::sqrt(q);
  const double f_u = root * root / std::ldexp(1.0, n_bits);
  if (f_u >= 1.0 - 1e-12) throw PreconditionError("ideal distribution is uniform; fidelity is not normalizable");
  const double f_s = hellinger_fidelity(measured, ideal);
  return std::max(0.0, (f_s - f_u) / (1.0 - f_u));
}

std::vector<VolumetricCell> run_app_suite(Backend& backend, const AppSuiteConfig& cfg) {
  if (cfg.circuits_per_cell < 1 || cfg.shots < 1) throw PreconditionError("app suite needs circuits and shots");
  const Capabilities caps = backend.capabilities();
  const Topology topo = caps.topology();
  std::vector<VolumetricCell> cells;
  const std::vector<std::string> algorithms{"bv", "dj", "qft"};
  for (size_t ai = 0; ai < algorithms.size(); ++ai) {
    const std::string& algorithm = algorithms[ai];
    for (int w : cfg.widths) {
      VolumetricCell cell;
      cell.algorithm = algorithm;
      cell.width = w;
      if (w < 2) throw PreconditionError("app suite widths must be >= 2");
      if (w > caps.n_qubits) {
        cell.skipped = "width " + std::to_string(w) + " exceeds the backend's " + std::to_string(caps.n_qubits) + " qubits";
        cell.fidelity = std::nan("");
        cells.push_back(cell);
        continue;
      }
      std::mt19937_64 rng(circuit_seed(circuit_seed(cfg.seed, static_cast<size_t>(w)), ai));
      std::vector<AppCircuit> apps;
      for (int k = 0; k < cfg.circuits_per_cell; ++k) {
        const int data = algorithm == "qft" ? w : w - 1;
        const std::uint64_t r = rng() >> (64 - data);
        if (algorithm == "bv") apps.push_back(bv_circuit(to_bitstring(r, data)));
        else if (algorithm == "dj") apps.push_back(k % 2 ? dj_circuit(data, true, r == 0 ? 1 : r) : dj_circuit(data, false, 0, r & 1));
        else apps.push_back(qft_roundtrip_circuit(data, r));
      }
      std::vector<Circuit> physical;
      std::vector<std::vector<int>> layouts;
      int depth = 0;
      for (const AppCircuit& a : apps) {
        const MappedCircuit mc = map_to_device(a.circuit, topo);
        physical.push_back(pack_layers(merge_single_qubit_gates(mc.circuit)));
        depth = std::max(depth, native_depth(physical.back()));
        layouts.push_back(mc.final_layout);
      }
      const auto tables = submit_and_wait(backend, physical, cfg.shots, circuit_seed(cfg.seed, 7000 + static_cast<size_t>(w)));
      double sum = 0.0;
      for (size_t i = 0; i < apps.size(); ++i) {
        const Distribution ideal =
            marginal(to_distribution(run_ideal(apps[i].circuit), apps[i].circuit.n_qubits()), apps[i].measured);
        const Distribution got = marginal(remap_to_logical(tables[i], layouts[i]), apps[i].measured);
        sum += normalized_fidelity(got, ideal, static_cast<int>(apps[i].measured.size()));
      }
      cell.depth = depth;
      cell.fidelity = sum / static_cast<double>(apps.size());
      cells.push_back(cell);
    }
  }
  return cells;
}

void write_volumetric_csv(std::ostream& os, const std::vector<VolumetricCell>& cells) {
  os << "algorithm,width,depth,fidelity\n";
  for (const VolumetricCell& c : cells) {
    if (!c.skipped.empty()) continue;
    os << c.algorithm << ',' << c.width << ',' << c.depth << ',' << std::setprecision(17) << c.fidelity << '\n';
  }
}

}  // namespace qbench
