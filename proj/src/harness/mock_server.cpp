#include "qbench/remote.hpp"

#include "qbench/error.hpp"
#include "qbench/json_io.hpp"

#include <httplib.h>

namespace qbench {

struct MockJobServer::Impl {
  struct Job {
    JobHandle inner;
    int polls = 0;
  };

  Backend& backend;
  MockServerOptions opts;
  httplib::Server server;
  std::thread thread;
  std::string host;
  int port = 0;
  std::mutex mu;
  std::map<std::string, std::string> by_key;
  std::map<std::string, Job> jobs;
  int next_id = 0;
  int lost = 0;

  Impl(Backend& b, MockServerOptions o) : backend(b), opts(o) {}
};

namespace {

void reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

}  // namespace

MockJobServer::MockJobServer(Backend& backend, MockServerOptions opts)
    : impl_(std::make_unique<Impl>(backend, opts)) {
  Impl& s = *impl_;

  s.server.Get("/backend", [&s](const httplib::Request&, httplib::Response& res) {
    Json j = capabilities_to_json(s.backend.capabilities());
    j["metadata"] = s.backend.metadata();
    reply(res, 200, j);
  });

  s.server.Post("/jobs", [this, &s](const httplib::Request& req, httplib::Response& res) {
    ++submit_requests_;
    std::string id;
    try {
      const Json body = Json::parse(req.body);
      const std::string key = body.at("idempotency_key").get<std::string>();
      if (key.empty()) throw PreconditionError("empty idempotency key");
      std::lock_guard lock(s.mu);
      if (const auto it = s.by_key.find(key); it != s.by_key.end()) {
        id = it->second;
      } else {
        std::vector<Circuit> circuits;
        for (const Json& c : body.at("circuits")) circuits.push_back(circuit_from_json(c));
        const JobHandle inner =
            s.backend.submit(circuits, body.at("shots").get<std::int64_t>(), body.at("seed").get<std::uint64_t>());
        id = "job-" + std::to_string(s.next_id++);
        s.jobs[id] = {inner};
        s.by_key[key] = id;
        ++jobs_created_;
      }
      if (s.lost < s.opts.lose_submit_responses) {
        ++s.lost;
        return reply(res, 503, {{"error", "response lost"}});
      }
    } catch (const Json::exception& e) {
      return reply(res, 400, {{"error", std::string("malformed request: ") + e.what()}});
    } catch (const Error& e) {
      return reply(res, 400, {{"error", e.what()}});
    }
    reply(res, 201, {{"job_id", id}});
  });

  s.server.Get(R"(/jobs/([A-Za-z0-9_-]+))", [&s](const httplib::Request& req, httplib::Response& res) {
    std::lock_guard lock(s.mu);
    const auto it = s.jobs.find(req.matches[1].str());
    if (it == s.jobs.end()) return reply(res, 404, {{"error", "unknown job"}});
    Impl::Job& job = it->second;
    const int poll = job.polls++;
    if (poll < s.opts.queued_polls) return reply(res, 200, {{"status", "queued"}});
    if (poll < s.opts.queued_polls + s.opts.running_polls) return reply(res, 200, {{"status", "running"}});
    if (s.opts.fail_jobs) return reply(res, 200, {{"status", "failed"}});
    const JobResult r = s.backend.result(job.inner);
    Json body{{"status", "done"}, {"results", Json::array()}};
    for (const ShotTable& t : r.tables) body["results"].push_back(shot_table_to_json(t));
    if (s.opts.report_execution_time && r.execution_time_s) body["execution_time_s"] = *r.execution_time_s;
    reply(res, 200, body);
  });
}

MockJobServer::~MockJobServer() { stop(); }

int MockJobServer::start(const std::string& host, int port) {
  Impl& s = *impl_;
  if (s.thread.joinable()) throw PreconditionError("server already running");
  s.host = host;
  s.port = port == 0 ? s.server.bind_to_any_port(host) : (s.server.bind_to_port(host, port) ? port : -1);
  if (s.port <= 0) throw BackendError("cannot bind " + host + ":" + std::to_string(port));
  s.thread = std::thread([&s] { s.server.listen_after_bind(); });
  s.server.wait_until_ready();
  return s.port;
}

void MockJobServer::stop() {
  Impl& s = *impl_;
  s.server.stop();
  if (s.thread.joinable()) s.thread.join();
}

void MockJobServer::wait() {
  if (impl_->thread.joinable()) impl_->thread.join();
}

std::string MockJobServer::url() const { return "http://" + impl_->host + ":" + std::to_string(impl_->port); }

}  // namespace qbench
