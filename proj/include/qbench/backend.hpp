#pragma once

#include "qbench/circuit.hpp"
#include "qbench/device.hpp"
#include "qbench/routing.hpp"
#include "qbench/shots.hpp"

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace qbench {

struct Capabilities {
  int n_qubits = 0;
  std::vector<Edge> edges;
  std::vector<GateKind> native_gates{GateKind::X, GateKind::X90, GateKind::Y90, GateKind::RZ,
                                     GateKind::CZ, GateKind::Wait, GateKind::MeasureAll};
  TimingModel timing;

  Topology topology() const { return Topology(n_qubits, edges); }
  bool connected(int a, int b) const;
};

enum class JobStatus { Queued, Running, Done, Failed };

std::string_view to_string(JobStatus s);
JobStatus job_status_from_string(std::string_view s);

struct JobHandle {
  std::string id;
};

struct JobResult {
  std::vector<ShotTable> tables;
  /// Quantum execution time reported by the backend, excluding queueing.
  std::optional<double> execution_time_s;
};

/// Anything that executes circuits and returns shot histograms.
///
/// A completed job's result never changes. Implementations must accept
/// concurrent submissions.
class Backend {
 public:
  virtual ~Backend() = default;

  virtual Capabilities capabilities() const = 0;
  virtual JobHandle submit(std::span<const Circuit> circuits, std::int64_t shots, std::uint64_t seed) = 0;
  virtual JobStatus status(const JobHandle& job) = 0;
  /// Throws NotFoundError for unknown jobs and BackendError for failed or
  /// unfinished ones.
  virtual JobResult result(const JobHandle& job) = 0;
  virtual std::map<std::string, std::string> metadata() const = 0;

  /// Backend clock in seconds, used to timestamp drift-sensitive runs.
  virtual double now_s() const;
  /// Let the device sit for `seconds` between experiments.
  virtual void idle_for(double seconds);
};

/// Throws CapabilityError when a circuit does not fit the backend.
void check_capabilities(const Capabilities& caps, std::span<const Circuit> circuits);

/// Submit, poll until done and return the full job result.
JobResult run_job(Backend& backend, std::span<const Circuit> circuits, std::int64_t shots, std::uint64_t seed,
                  double timeout_s = 600.0);

/// One ShotTable per circuit, in submission order.
std::vector<ShotTable> submit_and_wait(Backend& backend, std::span<const Circuit> circuits, std::int64_t shots,
                                       std::uint64_t seed, double timeout_s = 600.0);

/// Seed of circuit `index` inside a job seeded with `job_seed`.
std::uint64_t circuit_seed(std::uint64_t job_seed, std::size_t index);

/// In-process density-matrix simulator of a DeviceModel.
///
/// The clock is virtual: it advances by the modeled execution time of every
/// job and by idle_for(). A device with drift draws fresh per-qubit jitter
/// on every idle_for() call.
class LocalBackend : public Backend {
 public:
  explicit LocalBackend(DeviceModel device, std::uint64_t drift_seed = 0);

  Capabilities capabilities() const override;
  JobHandle submit(std::span<const Circuit> circuits, std::int64_t shots, std::uint64_t seed) override;
  JobStatus status(const JobHandle& job) override;
  JobResult result(const JobHandle& job) override;
  std::map<std::string, std::string> metadata() const override;
  double now_s() const override;
  void idle_for(double seconds) override;

  const DeviceModel& device() const { return device_; }
  /// Device snapshot currently in effect.
  DeviceModel current_device() const;

 private:
  void redraw_jitter();

  DeviceModel device_;
  mutable std::mutex mu_;
  double clock_s_ = 0.0;
  std::mt19937_64 drift_rng_;
  std::vector<double> jitter_;
  std::map<std::string, JobResult> jobs_;
  std::uint64_t next_id_ = 0;
};

/// Returns uniformly random bitstrings regardless of the circuit.
class UniformRandomBackend : public Backend {
 public:
  explicit UniformRandomBackend(int n_qubits);

  Capabilities capabilities() const override;
  JobHandle submit(std::span<const Circuit> circuits, std::int64_t shots, std::uint64_t seed) override;
  JobStatus status(const JobHandle& job) override;
  JobResult result(const JobHandle& job) override;
  std::map<std::string, std::string> metadata() const override;

 private:
  int n_;
  std::mutex mu_;
  std::map<std::string, JobResult> jobs_;
  std::uint64_t next_id_ = 0;
};

}  // namespace qbench
