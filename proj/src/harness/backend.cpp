#include "qbench/backend.hpp"

#include "qbench/error.hpp"

#include <algorithm>
#include <chrono>
#include <thread>

namespace qbench {

bool Capabilities::connected(int a, int b) const {
  return std::any_of(edges.begin(), edges.end(), [&](const Edge& e) {
    return (e.first == a && e.second == b) || (e.first == b && e.second == a);
  });
}

std::string_view to_string(JobStatus s) {
  switch (s) {
    case JobStatus::Queued: return "queued";
    case JobStatus::Running: return "running";
    case JobStatus::Done: return "done";
    case JobStatus::Failed: return "failed";
  }
  return "?";
}

JobStatus job_status_from_string(std::string_view s) {
  for (JobStatus k : {JobStatus::Queued, JobStatus::Running, JobStatus::Done, JobStatus::Failed})
    if (to_string(k) == s) return k;
  throw BackendError("unknown job status '" + std::string(s) + "'");
}

double Backend::now_s() const {
  using namespace std::chrono;
  return duration<double>(system_clock::now().time_since_epoch()).count();
}

void Backend::idle_for(double seconds) {
  if (seconds > 0) std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
}

void check_capabilities(const Capabilities& caps, std::span<const Circuit> circuits) {
  for (const Circuit& c : circuits) {
    const std::string where = "circuit '" + c.label() + "': ";
    if (c.n_qubits() > caps.n_qubits)
      throw CapabilityError(where + "needs " + std::to_string(c.n_qubits()) + " qubits, backend has " +
                            std::to_string(caps.n_qubits));
    for (const Gate& g : c.ops()) {
      if (std::find(caps.native_gates.begin(), caps.native_gates.end(), g.kind) == caps.native_gates.end())
        throw CapabilityError(where + "gate " + std::string(to_string(g.kind)) + " is not native");
      if (g.is_symbolic()) throw CapabilityError(where + "unbound parameter");
      if (g.kind == GateKind::CZ && !caps.connected(g.qubits[0], g.qubits[1]))
        throw CapabilityError(where + "CZ(" + std::to_string(g.qubits[0]) + "," + std::to_string(g.qubits[1]) +
                              ") is not a coupled pair");
    }
  }
}

JobResult run_job(Backend& backend, std::span<const Circuit> circuits, std::int64_t shots, std::uint64_t seed,
                  double timeout_s) {
  if (circuits.empty()) return {};
  if (shots <= 0) throw PreconditionError("shots must be positive");
  check_capabilities(backend.capabilities(), circuits);
  const JobHandle job = backend.submit(circuits, shots, seed);

  using clock = std::chrono::steady_clock;
  const auto deadline = clock::now() + std::chrono::duration<double>(timeout_s);
  auto wait = std::chrono::milliseconds(1);
  for (;;) {
    const JobStatus s = backend.status(job);
    if (s == JobStatus::Done) break;
    if (s == JobStatus::Failed) throw BackendError("job " + job.id + " failed");
    if (clock::now() >= deadline) throw TimeoutError("job " + job.id + " did not finish in time", job.id);
    std::this_thread::sleep_for(wait);
    wait = std::min(wait * 2, std::chrono::milliseconds(100));
  }
  JobResult r = backend.result(job);
  if (r.tables.size() != circuits.size())
    throw BackendError("job " + job.id + " returned " + std::to_string(r.tables.size()) + " results for " +
                       std::to_string(circuits.size()) + " circuits");
  return r;
}

std::vector<ShotTable> submit_and_wait(Backend& backend, std::span<const Circuit> circuits, std::int64_t shots,
                                       std::uint64_t seed, double timeout_s) {
  return run_job(backend, circuits, shots, seed, timeout_s).tables;
}

std::uint64_t circuit_seed(std::uint64_t job_seed, std::size_t index) {
  // splitmix64 finalizer over the combined value.
  std::uint64_t z = job_seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace qbench
