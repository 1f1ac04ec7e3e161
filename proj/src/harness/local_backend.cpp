#include "qbench/backend.hpp"

#include "qbench/error.hpp"
#include "qbench/simulator.hpp"

#include <cmath>

namespace qbench {

LocalBackend::LocalBackend(DeviceModel device, std::uint64_t drift_seed)
    : device_(std::move(device)), drift_rng_(drift_seed), jitter_(device_.qubits.size(), 0.0) {
  device_.validate();
  redraw_jitter();
}

void LocalBackend::redraw_jitter() {
  if (device_.drift.jitter_sigma <= 0) return;
  std::normal_distribution<double> normal(0.0, device_.drift.jitter_sigma);
  for (double& j : jitter_) j = normal(drift_rng_);
}

Capabilities LocalBackend::capabilities() const {
  Capabilities c;
  c.n_qubits = device_.n_qubits();
  c.edges = device_.edges;
  c.timing = device_.timing;
  return c;
}

DeviceModel LocalBackend::current_device() const {
  std::lock_guard lock(mu_);
  if (device_.drift.empty()) return device_;
  return device_.at(clock_s_, jitter_);
}

JobHandle LocalBackend::submit(std::span<const Circuit> circuits, std::int64_t shots, std::uint64_t seed) {
  check_capabilities(capabilities(), circuits);
  const DeviceModel snapshot = current_device();
  JobResult r;
  double seconds = 0.0;
  for (std::size_t i = 0; i < circuits.size(); ++i) {
    r.tables.push_back(run_noisy(circuits[i], snapshot, shots, circuit_seed(seed, i)));
    seconds += circuit_duration(circuits[i], snapshot.timing) * 1e-9 * static_cast<double>(shots);
  }
  r.execution_time_s = seconds;
  std::lock_guard lock(mu_);
  clock_s_ += seconds;
  const std::string id = "local-" + std::to_string(next_id_++);
  jobs_.emplace(id, std::move(r));
  return {id};
}

JobStatus LocalBackend::status(const JobHandle& job) {
  std::lock_guard lock(mu_);
  if (!jobs_.count(job.id)) throw NotFoundError("unknown job " + job.id);
  return JobStatus::Done;
}

JobResult LocalBackend::result(const JobHandle& job) {
  std::lock_guard lock(mu_);
  const auto it = jobs_.find(job.id);
  if (it == jobs_.end()) throw NotFoundError("unknown job " + job.id);
  return it->second;
}

std::map<std::string, std::string> LocalBackend::metadata() const {
  return {{"backend", "local"}, {"device", device_.name}, {"n_qubits", std::to_string(device_.n_qubits())}};
}

double LocalBackend::now_s() const {
  std::lock_guard lock(mu_);
  return clock_s_;
}

void LocalBackend::idle_for(double seconds) {
  if (seconds < 0) throw PreconditionError("idle time must be >= 0");
  std::lock_guard lock(mu_);
  clock_s_ += seconds;
  redraw_jitter();
}

UniformRandomBackend::UniformRandomBackend(int n_qubits) : n_(n_qubits) {
  if (n_qubits <= 0 || n_qubits > 62) throw PreconditionError("uniform backend width must be in [1, 62]");
}

Capabilities UniformRandomBackend::capabilities() const {
  Capabilities c;
  c.n_qubits = n_;
  c.edges = Topology::all_to_all(n_).edges();
  return c;
}

JobHandle UniformRandomBackend::submit(std::span<const Circuit> circuits, std::int64_t shots, std::uint64_t seed) {
  check_capabilities(capabilities(), circuits);
  JobResult r;
  for (std::size_t i = 0; i < circuits.size(); ++i) {
    const int n = circuits[i].n_qubits();
    std::mt19937_64 rng(circuit_seed(seed, i));
    ShotTable t;
    t.shots = shots;
    t.seed = circuit_seed(seed, i);
    t.n_qubits = n;
    for (std::int64_t s = 0; s < shots; ++s) {
      const std::uint64_t bits = n == 0 ? 0 : rng() >> (64 - n);
      ++t.counts[to_bitstring(bits, n)];
    }
    r.tables.push_back(std::move(t));
  }
  std::lock_guard lock(mu_);
  const std::string id = "uniform-" + std::to_string(next_id_++);
  jobs_.emplace(id, std::move(r));
  return {id};
}

JobStatus UniformRandomBackend::status(const JobHandle& job) {
  std::lock_guard lock(mu_);
  if (!jobs_.count(job.id)) throw NotFoundError("unknown job " + job.id);
  return JobStatus::Done;
}

JobResult UniformRandomBackend::result(const JobHandle& job) {
  std::lock_guard lock(mu_);
  const auto it = jobs_.find(job.id);
  if (it == jobs_.end()) throw NotFoundError("unknown job " + job.id);
  return it->second;
}

std::map<std::string, std::string> UniformRandomBackend::metadata() const {
  return {{"backend", "uniform-random"}, {"n_qubits", std::to_string(n_)}};
}

}  // namespace qbench
