#include "qbench/remote.hpp"

#include "qbench/error.hpp"
#include "qbench/json_io.hpp"

#include <httplib.h>

#include <iomanip>
#include <random>
#include <sstream>

namespace qbench {
namespace {

httplib::Client make_client(const std::string& url) {
  httplib::Client cli(url);
  cli.set_connection_timeout(5, 0);
  cli.set_read_timeout(30, 0);
  return cli;
}

std::string describe(const httplib::Result& r) {
  if (!r) return "transport error: " + httplib::to_string(r.error());
  std::string msg = "HTTP " + std::to_string(r->status);
  try {
    const Json j = Json::parse(r->body);
    if (j.contains("error")) msg += ": " + j["error"].get<std::string>();
  } catch (const Json::exception&) {
  }
  return msg;
}

Json parse_body(const httplib::Result& r) {
  try {
    return Json::parse(r->body);
  } catch (const Json::exception& e) {
    throw BackendError(std::string("malformed server response: ") + e.what());
  }
}

Json get_job(const std::string& url, const std::string& id) {
  auto cli = make_client(url);
  const auto r = cli.Get("/jobs/" + id);
  if (r && r->status == 404) throw NotFoundError("unknown job " + id);
  if (!r || r->status != 200) throw BackendError("GET /jobs/" + id + " failed: " + describe(r));
  return parse_body(r);
}

}  // namespace

std::string new_idempotency_key() {
  static std::mutex mu;
  static std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard lock(mu);
  std::ostringstream os;
  os << std::hex << std::setfill('0') << std::setw(16) << rng() << std::setw(16) << rng();
  return os.str();
}

RemoteBackend::RemoteBackend(std::string base_url, int submit_attempts)
    : url_(std::move(base_url)), attempts_(submit_attempts) {
  if (url_.empty()) throw PreconditionError("remote backend needs a URL");
  if (attempts_ < 1) throw PreconditionError("submit attempts must be >= 1");
}

Capabilities RemoteBackend::capabilities() const {
  std::lock_guard lock(mu_);
  if (caps_) return *caps_;
  auto cli = make_client(url_);
  const auto r = cli.Get("/backend");
  if (!r || r->status != 200) throw BackendError("GET /backend failed: " + describe(r));
  const Json j = parse_body(r);
  caps_ = capabilities_from_json(j);
  if (j.contains("metadata"))
    for (const auto& [k, v] : j["metadata"].items()) meta_[k] = v.get<std::string>();
  return *caps_;
}

JobHandle RemoteBackend::submit(std::span<const Circuit> circuits, std::int64_t shots, std::uint64_t seed) {
  return submit_with_key(circuits, shots, seed, new_idempotency_key());
}

JobHandle RemoteBackend::submit_with_key(std::span<const Circuit> circuits, std::int64_t shots, std::uint64_t seed,
                                         const std::string& idempotency_key) {
  if (idempotency_key.empty()) throw PreconditionError("submits need an idempotency key");
  check_capabilities(capabilities(), circuits);
  Json body{{"shots", shots}, {"seed", seed}, {"idempotency_key", idempotency_key}};
  body["circuits"] = Json::array();
  for (const Circuit& c : circuits) body["circuits"].push_back(circuit_to_json(c));
  const std::string payload = body.dump();

  std::string last;
  for (int attempt = 0; attempt < attempts_; ++attempt) {
    auto cli = make_client(url_);
    const auto r = cli.Post("/jobs", payload, "application/json");
    if (r && (r->status == 200 || r->status == 201)) return {parse_body(r).at("job_id").get<std::string>()};
    last = describe(r);
    // Client errors will not go away on retry.
    if (r && r->status >= 400 && r->status < 500) throw BackendError("POST /jobs rejected: " + last);
  }
  throw BackendError("POST /jobs failed after " + std::to_string(attempts_) + " attempts: " + last);
}

void RemoteBackend::observe(const std::string& id, JobStatus s) {
  const auto now = std::chrono::steady_clock::now();
  std::lock_guard lock(mu_);
  Observed& o = observed_[id];
  if (s == JobStatus::Running && !o.running) o.running = now;
  if (s == JobStatus::Done && !o.done) o.done = now;
}

JobStatus RemoteBackend::status(const JobHandle& job) {
  const JobStatus s = job_status_from_string(get_job(url_, job.id).at("status").get<std::string>());
  observe(job.id, s);
  return s;
}

JobResult RemoteBackend::result(const JobHandle& job) {
  const Json j = get_job(url_, job.id);
  const JobStatus s = job_status_from_string(j.at("status").get<std::string>());
  observe(job.id, s);
  if (s == JobStatus::Failed) throw BackendError("job " + job.id + " failed");
  if (s != JobStatus::Done) throw BackendError("job " + job.id + " is not finished");
  JobResult out;
  for (const Json& r : j.at("results")) out.tables.push_back(shot_table_from_json(r));
  if (j.contains("execution_time_s") && !j["execution_time_s"].is_null()) {
    out.execution_time_s = j["execution_time_s"].get<double>();
  } else {
    std::lock_guard lock(mu_);
    const Observed& o = observed_[job.id];
    // Without a server figure, time from the first "running" to "done" seen.
    if (o.running && o.done) out.execution_time_s = std::chrono::duration<double>(*o.done - *o.running).count();
  }
  return out;
}

std::map<std::string, std::string> RemoteBackend::metadata() const {
  (void)capabilities();
  std::lock_guard lock(mu_);
  auto m = meta_;
  m["remote_url"] = url_;
  return m;
}

}  // namespace qbench
