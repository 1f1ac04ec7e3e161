#include "qbench/clops.hpp"

#include "qbench/error.hpp"
#include "qbench/quantum_volume.hpp"
#include "qbench/routing.hpp"
#include "qbench/synthesis.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <numbers>
#include <random>

namespace qbench {
namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

std::uint64_t fnv1a(std::uint64_t h, std::string_view s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

std::vector<double> uniform_angles(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  std::vector<double> out(static_cast<size_t>(n));
  for (double& a : out) a = u(rng);
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

double clops_formula(double templates, double updates, double shots, double layers, double t_total_s) {
  if (!(t_total_s > 0)) throw PreconditionError("CLOPS needs a positive total time");
  return templates * updates * shots * layers / t_total_s;
}

std::uint64_t outcome_hash(const ShotTable& t) {
  std::uint64_t h = kFnvOffset;
  for (const auto& [bits, count] : t.counts) {
    for (std::int64_t i = 0; i < count; ++i) h = fnv1a(h, bits);
  }
  return h;
}

std::vector<double> next_round_angles(const ShotTable& previous, int n_params) {
  return uniform_angles(outcome_hash(previous), n_params);
}

ParamCircuit clops_template(const Capabilities& caps, int layers, std::uint64_t seed) {
  const int width = std::max(2, layers);
  if (width > caps.n_qubits) throw CapabilityError("CLOPS template wider than the backend");
  const QVCircuit qc = gen_model_circuit(width, layers, seed);
  const MappedCircuit mc = map_to_device(qc.circuit, caps.topology());
  const Circuit concrete = pack_layers(merge_single_qubit_gates(mc.circuit));
  Circuit body(concrete.n_qubits(), "clops_template");
  int next = 0;
  for (Gate g : concrete.ops()) {
    if (g.kind == GateKind::RZ) {
      const bool parallel = g.parallel;
      g = Gate::rz_param(g.qubits[0], next++);
      g.parallel = parallel;
    }
    body.append(g);
  }
  return ParamCircuit(std::move(body));
}

CLOPSResult run_clops(Backend& backend, const CLOPSConfig& cfg, int measured_qv) {
  if (measured_qv < 2 || !std::has_single_bit(static_cast<unsigned>(measured_qv)))
    throw PreconditionError("CLOPS needs a measured QV that is a power of two >= 2");
  if (cfg.templates < 1 || cfg.updates < 1 || cfg.shots < 1)
    throw PreconditionError("CLOPS needs templates, updates and shots >= 1");
  CLOPSResult out;
  out.templates = cfg.templates;
  out.updates = cfg.updates;
  out.shots = cfg.shots;
  out.layers = cfg.layers > 0 ? cfg.layers : std::countr_zero(static_cast<unsigned>(measured_qv));

  const Capabilities caps = backend.capabilities();
  std::vector<ParamCircuit> templates;
  for (int m = 0; m < cfg.templates; ++m)
    templates.push_back(clops_template(caps, out.layers, circuit_seed(cfg.seed, static_cast<size_t>(m))));

  CLOPSTiming& timing = out.timing;
  std::vector<std::vector<double>> angles;
  auto t0 = std::chrono::steady_clock::now();
  for (int m = 0; m < cfg.templates; ++m)
    angles.push_back(uniform_angles(circuit_seed(cfg.seed ^ 0x9e3779b97f4a7c15ULL, static_cast<size_t>(m)),
                                    templates[static_cast<size_t>(m)].parameter_count()));
  timing.classical_s += seconds_since(t0);

  std::uint64_t digest = kFnvOffset;
  for (int k = 0; k < cfg.updates; ++k) {
    t0 = std::chrono::steady_clock::now();
    std::vector<Circuit> bound;
    for (int m = 0; m < cfg.templates; ++m)
      bound.push_back(bind_params(templates[static_cast<size_t>(m)], angles[static_cast<size_t>(m)]));
    timing.classical_s += seconds_since(t0);

    JobResult r;
    t0 = std::chrono::steady_clock::now();
    try {
      r = run_job(backend, bound, cfg.shots, circuit_seed(cfg.seed, 100000 + static_cast<size_t>(k)));
    } catch (const Error& e) {
      throw CLOPSPartialError("CLOPS round " + std::to_string(k) + " failed: " + e.what(), k, timing);
    }
    const double wall = seconds_since(t0);
    if (r.execution_time_s) {
      timing.quantum_s += *r.execution_time_s;
    } else {
      timing.quantum_s += wall;
      timing.backend_reported = false;
    }

    t0 = std::chrono::steady_clock::now();
    for (int m = 0; m < cfg.templates; ++m) {
      const ShotTable& t = r.tables[static_cast<size_t>(m)];
      angles[static_cast<size_t>(m)] = next_round_angles(t, templates[static_cast<size_t>(m)].parameter_count());
      digest = (digest ^ outcome_hash(t)) * kFnvPrime;
    }
    timing.classical_s += seconds_since(t0);
  }
  out.outcome_digest = digest;
  out.clops = clops_formula(out.templates, out.updates, static_cast<double>(out.shots), out.layers, timing.total_s());
  return out;
}

}  // namespace qbench
