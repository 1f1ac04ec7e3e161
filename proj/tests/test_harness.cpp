#include "doctest.h"

#include "qbench/backend.hpp"
#include "qbench/cli.hpp"
#include "qbench/error.hpp"
#include "qbench/json_io.hpp"
#include "qbench/remote.hpp"
#include "qbench/report.hpp"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace qbench;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qbench_test_" + name + "_" + random_uuid().substr(0, 8));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

Circuit random_circuit(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> kind(0, 6), qubit(0, n - 1);
  std::uniform_real_distribution<double> angle(-10.0, 10.0);
  Circuit c(n, "random");
  for (int i = 0; i < 30; ++i) {
    const int a = qubit(rng);
    int b = qubit(rng);
    if (b == a) b = (a + 1) % n;
    Gate g;
    switch (kind(rng)) {
      case 0: g = Gate::x(a); break;
      case 1: g = Gate::x90(a); break;
      case 2: g = Gate::y90(a); break;
      case 3: g = Gate::rz(a, angle(rng)); break;
      case 4: g = Gate::cz(a, b); break;
      case 5: g = Gate::wait(a, std::abs(angle(rng)) * 37.1); break;
      default: g = Gate::rz_param(a, i % 4); break;
    }
    c.append(g);
  }
  c.append(Gate::measure_all());
  return pack_layers(c);
}

struct Cli {
  int code;
  std::string out, err;
};

Cli run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("circuit JSON round trip") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 50; ++t) {
    const Circuit c = random_circuit(rng, 2 + t % 4);
    const Circuit back = circuit_from_json(Json::parse(circuit_to_json(c).dump()));
    CHECK(back == c);
  }
  CHECK_THROWS_AS(circuit_from_json(Json::parse(R"({"n_qubits": 2, "ops": [{"kind": "CZ", "qubits": [0]}]})")),
                  PreconditionError);
  CHECK_THROWS_AS(circuit_from_json(Json::parse(R"({"n_qubits": 2, "ops": [{"kind": "H", "qubits": [0]}]})")),
                  PreconditionError);
  CHECK_THROWS_AS(circuit_from_json(Json::parse(R"({"ops": []})")), PreconditionError);
}

TEST_CASE("device JSON") {
  const DeviceModel ref = starmon5_reference_model();
  const DeviceModel back = device_from_json(Json::parse(device_to_json(ref).dump()));
  CHECK(back.qubits.size() == ref.qubits.size());
  for (size_t i = 0; i < ref.qubits.size(); ++i) {
    CHECK(back.qubits[i].t1_us == ref.qubits[i].t1_us);
    CHECK(back.qubits[i].p1 == ref.qubits[i].p1);
    CHECK(back.qubits[i].readout == ref.qubits[i].readout);
  }
  CHECK(back.edges == ref.edges);

  const DeviceModel file = load_device(fs::path(QBENCH_DATA_DIR) / "starmon5.json");
  REQUIRE(file.n_qubits() == 5);
  for (size_t i = 0; i < 5; ++i) {
    CHECK(file.qubits[i].t2_us == ref.qubits[i].t2_us);
    CHECK(file.qubits[i].p1 == doctest::Approx(ref.qubits[i].p1).epsilon(1e-12));
    CHECK((file.qubits[i].readout - ref.qubits[i].readout).cwiseAbs().maxCoeff() < 1e-15);
  }
  CHECK(file.edges == ref.edges);
  CHECK(file.p2 == ref.p2);

  const DeviceModel ideal = load_device(fs::path(QBENCH_DATA_DIR) / "ideal.json");
  CHECK(ideal.noiseless());
  CHECK(ideal.n_qubits() == 5);
  CHECK(std::isinf(device_from_json(device_to_json(ideal)).qubits[0].t1_us));

  CHECK_THROWS_AS(device_from_json(Json::parse(R"({"qubits": [{"t1_us": 10, "t2_us": 30}]})")), PreconditionError);
  CHECK_THROWS_AS(load_device("/nonexistent/device.json"), NotFoundError);
}

TEST_CASE("shot table JSON") {
  ShotTable t;
  t.n_qubits = 2;
  t.shots = 5;
  t.seed = 42;
  t.counts = {{"00", 3}, {"11", 2}};
  CHECK(shot_table_from_json(shot_table_to_json(t)) == t);
  CHECK_THROWS_AS(shot_table_from_json(Json::parse(R"({"counts": {"0": 1, "11": 1}})")), PreconditionError);
  CHECK_THROWS_AS(shot_table_from_json(Json::parse(R"({"counts": {"01": 1}, "shots": 3})")), PreconditionError);
}

TEST_CASE("metric report round trip is exact") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int t = 0; t < 20; ++t) {
    MetricReport r;
    r.metric = "rb";
    r.run_id = random_uuid();
    r.seed = rng();
    r.config = {{"shots", 4096}, {"lengths", {1, 20, 40}}};
    r.backend = {{"backend", "local"}};
    for (int i = 0; i < 5; ++i) r.scalars["q" + std::to_string(i) + ".x"] = scalar(u(rng) / 3.0, "us");
    r.scalars["nan"] = scalar(std::nan(""), "us");
    r.scalars["count"] = {Json(17), "points"};
    r.timing = {{"wall_s", u(rng)}};
    r.flags = {"something"};
    r.valid = t % 2;
    const MetricReport back = MetricReport::from_json(Json::parse(r.to_json().dump()));
    CHECK(back == r);
    CHECK(back.scalars_dump() == r.scalars_dump());
    CHECK(back.scalars.at("nan").value.is_null());
  }
}

TEST_CASE("run store is append-only") {
  const fs::path root = scratch_dir("store");
  RunStore store = RunStore::create(root, "run-a");
  CHECK_THROWS_AS(RunStore::create(root, "run-a"), PreconditionError);
  MetricReport a;
  a.metric = "qv";
  a.run_id = store.id();
  a.scalars["qv"] = {Json(8), "dimensionless"};
  store.append(a);
  const std::string first_line = [&] {
    std::ifstream in(store.dir() / "records.jsonl");
    std::string l;
    std::getline(in, l);
    return l;
  }();
  MetricReport b = a;
  b.metric = "qscore";
  b.scalars = {{"qscore", {Json(3), "nodes"}}};
  const std::string raw = store.write_raw("qscore", {{"k", 1}});
  b.raw = {raw};
  store.append(b);
  CHECK(raw.rfind("raw/qscore/", 0) == 0);
  CHECK(store.read_raw(raw) == Json{{"k", 1}});

  const auto records = RunStore::open(root / "run-a").records();
  REQUIRE(records.size() == 2);
  CHECK(records[0] == a);
  CHECK(records[1] == b);
  std::ifstream in(store.dir() / "records.jsonl");
  std::string l;
  std::getline(in, l);
  CHECK(l == first_line);
  fs::remove_all(root);
}

TEST_CASE("emit report") {
  const fs::path root = scratch_dir("report");
  RunStore s1 = RunStore::create(root, "r1");
  MetricReport cal;
  cal.metric = "coherence";
  cal.scalars["q0.t1_us"] = scalar(15.0, "us");
  cal.scalars["q1.f_ro"] = scalar(0.97, "dimensionless");
  s1.append(cal);
  RunStore s2 = RunStore::create(root, "r2");
  MetricReport app;
  app.metric = "appsuite";
  app.raw = {s2.write_raw("appsuite", {{"cells", cells_to_json({{"bv", 2, 3, 0.9, ""}})}})};
  s2.append(app);

  const Json summary = emit_report(root, {}, root);
  CHECK(summary["qubits"].size() == 2);
  CHECK(summary["qubits"][0]["t1_us"] == 15.0);
  CHECK(summary["qubits"][0]["f_ro"].is_null());
  CHECK(summary["qubits"][1]["f_ro"] == 0.97);
  CHECK(summary["qv"].is_null());
  CHECK(summary["clops"].is_null());
  CHECK(fs::exists(root / "summary.json"));
  std::ifstream csv(root / "volumetric.csv");
  std::string header, row;
  std::getline(csv, header);
  std::getline(csv, row);
  CHECK(header == "algorithm,width,depth,fidelity");
  CHECK(row == "bv,2,3,0.90000000000000002");

  CHECK_THROWS_AS(emit_report(root, {"missing"}, root), NotFoundError);
  fs::remove_all(root);
}

TEST_CASE("submit and wait on the local backend") {
  LocalBackend b(ideal_model(2));
  CHECK(submit_and_wait(b, std::vector<Circuit>{}, 100, 1).empty());
  Circuit c(2);
  c.append(Gate::x(0)).append(Gate::measure_all());
  const std::vector<Circuit> two{c, c};
  const auto tables = submit_and_wait(b, two, 100, 1);
  REQUIRE(tables.size() == 2);
  for (const ShotTable& t : tables) {
    CHECK(t.shots == 100);
    CHECK(t.counts.at("10") == 100);
  }
  Circuit wide(3);
  wide.append(Gate::measure_all());
  CHECK_THROWS_AS(submit_and_wait(b, std::vector<Circuit>{wide}, 10, 1), CapabilityError);
  CHECK_THROWS_AS(b.result({"nope"}), NotFoundError);
}

TEST_CASE("remote backend against the mock server") {
  LocalBackend local(starmon5_reference_model());
  MockJobServer server(local);
  server.start();
  RemoteBackend remote(server.url());

  const Capabilities caps = remote.capabilities();
  CHECK(caps.n_qubits == 5);
  CHECK(caps.edges == local.capabilities().edges);
  CHECK(remote.metadata().at("device") == "starmon5-reference");

  std::mt19937_64 rng(2);
  Circuit c(5);
  c.append(Gate::x90(2)).append(Gate::cz(2, 0)).append(Gate::rz(0, 0.1234567890123)).append(Gate::measure_all());
  const std::vector<Circuit> batch{c, c};
  LocalBackend reference(starmon5_reference_model());
  const auto expect = submit_and_wait(reference, batch, 200, 77);
  const JobResult got = run_job(remote, batch, 200, 77, 10.0);
  REQUIRE(got.tables.size() == 2);
  for (size_t i = 0; i < 2; ++i) {
    CHECK(got.tables[i].counts == expect[i].counts);
    CHECK(got.tables[i].seed == expect[i].seed);
  }
  CHECK(got.execution_time_s.has_value());

  CHECK(submit_and_wait(remote, std::vector<Circuit>{}, 10, 1).empty());
  CHECK_THROWS_AS(remote.status({"job-999"}), NotFoundError);
  CHECK_THROWS_AS(remote.result({"job-999"}), NotFoundError);

  const int before = server.jobs_created();
  const JobHandle h1 = remote.submit_with_key(batch, 10, 1, "same-key");
  const JobHandle h2 = remote.submit_with_key(batch, 10, 1, "same-key");
  CHECK(h1.id == h2.id);
  CHECK(server.jobs_created() == before + 1);
  CHECK_THROWS_AS(remote.submit_with_key(batch, 10, 1, ""), PreconditionError);

  Circuit bad(5);
  bad.append(Gate::cz(0, 1)).append(Gate::measure_all());
  CHECK_THROWS_AS(remote.submit(std::vector<Circuit>{bad}, 10, 1), CapabilityError);
  server.stop();
}

TEST_CASE("lost submit responses are retried under the same key") {
  LocalBackend local(ideal_model(2));
  MockServerOptions opts;
  opts.lose_submit_responses = 2;
  MockJobServer server(local, opts);
  server.start();
  RemoteBackend remote(server.url(), 3);
  Circuit c(2);
  c.append(Gate::x(1)).append(Gate::measure_all());
  const auto tables = submit_and_wait(remote, std::vector<Circuit>{c}, 50, 3, 10.0);
  CHECK(tables[0].counts.at("01") == 50);
  CHECK(server.submit_requests() == 3);
  CHECK(server.jobs_created() == 1);

  MockServerOptions lossy;
  lossy.lose_submit_responses = 10;
  MockJobServer server2(local, lossy);
  server2.start();
  RemoteBackend give_up(server2.url(), 2);
  CHECK_THROWS_AS(give_up.submit(std::vector<Circuit>{c}, 10, 1), BackendError);
  CHECK(server2.jobs_created() == 1);
}

TEST_CASE("remote failures and timeouts") {
  LocalBackend local(ideal_model(2));
  Circuit c(2);
  c.append(Gate::measure_all());
  const std::vector<Circuit> batch{c};

  MockServerOptions failing;
  failing.fail_jobs = true;
  MockJobServer s1(local, failing);
  s1.start();
  RemoteBackend r1(s1.url());
  CHECK_THROWS_AS(run_job(r1, batch, 10, 1, 10.0), BackendError);

  MockServerOptions slow;
  slow.queued_polls = 1000000;
  MockJobServer s2(local, slow);
  s2.start();
  RemoteBackend r2(s2.url());
  try {
    run_job(r2, batch, 10, 1, 0.05);
    FAIL("expected a timeout");
  } catch (const TimeoutError& e) {
    CHECK(!e.job_id().empty());
    CHECK(r2.status({e.job_id()}) == JobStatus::Queued);
  }

  MockServerOptions silent;
  silent.report_execution_time = false;
  silent.running_polls = 2;
  MockJobServer s3(local, silent);
  s3.start();
  RemoteBackend r3(s3.url());
  const JobResult res = run_job(r3, batch, 10, 1, 10.0);
  REQUIRE(res.execution_time_s.has_value());
  CHECK(*res.execution_time_s >= 0.0);

  RemoteBackend nobody("http://127.0.0.1:1");
  CHECK_THROWS_AS(nobody.capabilities(), BackendError);
}

TEST_CASE("CLI usage errors") {
  const Cli unknown = run_cli({"rb", "--bogus"});
  CHECK(unknown.code == kExitUsage);
  CHECK(unknown.err.find("Usage") != std::string::npos);
  CHECK(run_cli({}).code == kExitUsage);
  CHECK(run_cli({"coherence", "t3"}).code == kExitUsage);
  CHECK(run_cli({"--backend", "cloud", "rb"}).code == kExitUsage);
  CHECK(run_cli({"--help"}).code == kExitOk);
  CHECK(run_cli({"--device", "/nonexistent.json", "readout"}).code == kExitUsage);
}

TEST_CASE("CLI metric runs are reproducible") {
  const fs::path root = scratch_dir("cli");
  const std::string device = (fs::path(QBENCH_DATA_DIR) / "starmon5.json").string();
  const std::vector<std::string> args{"rb", "--backend", "sim", "--device", device, "--seed", "7",
                                      "--out", root.string(), "--qubit", "1"};
  const Cli a = run_cli(args), b = run_cli(args);
  REQUIRE(a.code == kExitOk);
  REQUIRE(b.code == kExitOk);
  const MetricReport ra = MetricReport::from_json(Json::parse(a.out));
  const MetricReport rb = MetricReport::from_json(Json::parse(b.out));
  CHECK(ra.scalars_dump() == rb.scalars_dump());
  CHECK(ra.run_id != rb.run_id);
  CHECK(ra.scalars.count("q1.f1q") == 1);

  const std::string ideal = (fs::path(QBENCH_DATA_DIR) / "ideal.json").string();
  const Cli qv = run_cli({"qv", "--device", ideal, "--max-width", "3", "--seed", "1", "--out", root.string()});
  REQUIRE(qv.code == kExitOk);
  CHECK(Json::parse(qv.out)["scalars"]["qv"]["value"] == 8);

  const Cli rep = run_cli({"report", "--out", root.string()});
  REQUIRE(rep.code == kExitOk);
  const Json summary = Json::parse(rep.out);
  CHECK(summary["qv"] == 8);
  CHECK(summary["qubits"][1]["f1q"].is_number());
  CHECK(summary["qscore"].is_null());
  CHECK(fs::exists(root / "summary.json"));
  CHECK(fs::exists(root / "volumetric.csv"));
  fs::remove_all(root);
}

TEST_CASE("CLI against the mock server") {
  LocalBackend local(starmon5_reference_model());
  MockJobServer server(local);
  server.start();
  const fs::path root = scratch_dir("cli_remote");
  const Cli r = run_cli({"readout", "--backend", "remote", "--url", server.url(), "--seed", "3", "--out", root.string()});
  CHECK(r.code == kExitOk);
  CHECK(Json::parse(r.out)["scalars"]["q3.f_ro"]["value"].get<double>() == doctest::Approx(0.984).epsilon(0.01));
  CHECK(run_cli({"readout", "--backend", "remote", "--out", root.string()}).code == kExitUsage);
  fs::remove_all(root);
}
