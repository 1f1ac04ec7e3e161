#pragma once

#include "qbench/backend.hpp"

#include <atomic>
#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

namespace qbench {

/// Client for the JSON job protocol:
///   GET  /backend      -> {n_qubits, edges, native_gates, timing, metadata}
///   POST /jobs         {circuits, shots, seed, idempotency_key} -> 201 {job_id}
///   GET  /jobs/{id}    -> {status, results: [{counts}], execution_time_s?}
///
/// Every submit carries a fresh idempotency key and is retried only with that
/// key, so a retry never creates a second job.
class RemoteBackend : public Backend {
 public:
  explicit RemoteBackend(std::string base_url, int submit_attempts = 3);

  Capabilities capabilities() const override;
  JobHandle submit(std::span<const Circuit> circuits, std::int64_t shots, std::uint64_t seed) override;
  JobStatus status(const JobHandle& job) override;
  JobResult result(const JobHandle& job) override;
  std::map<std::string, std::string> metadata() const override;

  /// Submit with a caller-chosen key.
  JobHandle submit_with_key(std::span<const Circuit> circuits, std::int64_t shots, std::uint64_t seed,
                            const std::string& idempotency_key);

 private:
  struct Observed {
    std::optional<std::chrono::steady_clock::time_point> running, done;
  };

  void observe(const std::string& id, JobStatus s);

  std::string url_;
  int attempts_;
  mutable std::mutex mu_;
  mutable std::optional<Capabilities> caps_;
  mutable std::map<std::string, std::string> meta_;
  std::map<std::string, Observed> observed_;
};

/// 128-bit random key in hex.
std::string new_idempotency_key();

struct MockServerOptions {
  /// Polls answered "queued", then "running", before a job reports done.
  int queued_polls = 1;
  int running_polls = 1;
  bool report_execution_time = true;
  /// Create the job but answer the first N submits with 503, as if the
  /// response had been lost.
  int lose_submit_responses = 0;
  bool fail_jobs = false;
};

/// In-process HTTP server speaking the job protocol on top of any Backend.
class MockJobServer {
 public:
  explicit MockJobServer(Backend& backend, MockServerOptions opts = {});
  ~MockJobServer();
  MockJobServer(const MockJobServer&) = delete;
  MockJobServer& operator=(const MockJobServer&) = delete;

  /// Bind (port 0 picks a free one), serve on a background thread and return
  /// the port.
  int start(const std::string& host = "127.0.0.1", int port = 0);
  void stop();
  /// Block until stop() is called from elsewhere.
  void wait();

  std::string url() const;
  int jobs_created() const { return jobs_created_.load(); }
  int submit_requests() const { return submit_requests_.load(); }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::atomic<int> jobs_created_{0};
  std::atomic<int> submit_requests_{0};
};

}  // namespace qbench
