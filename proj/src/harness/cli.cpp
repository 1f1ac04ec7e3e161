#include "qbench/cli.hpp"

#include "qbench/backend.hpp"
#include "qbench/clops.hpp"
#include "qbench/component.hpp"
#include "qbench/error.hpp"
#include "qbench/json_io.hpp"
#include "qbench/quantum_volume.hpp"
#include "qbench/qscore.hpp"
#include "qbench/remote.hpp"
#include "qbench/report.hpp"
#include "qbench/stability.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <memory>

namespace qbench {
namespace {

struct Options {
  std::string backend = "sim";
  std::string device;
  std::string url;
  std::uint64_t seed = 0;
  std::int64_t shots = 0;
  std::string out = "runs";
  std::string run_id;
  double time_limit_s = 60.0;
  // Subcommand options.
  std::vector<int> qubits;
  std::string coherence_kind;
  int max_width = 0;
  int circuits = 100;
  int measured_qv = 0;
  int templates = 100;
  int updates = 10;
  int repeats = 5;
  double interval_s = 3600.0;
  std::vector<int> sizes{2, 3, 4, 5};
  int graphs = 5;
  std::vector<int> widths{2, 3, 4, 5};
  std::vector<std::string> runs;
};

Json options_json(const Options& o, const std::string& metric) {
  Json j{{"backend", o.backend}, {"device", o.device}, {"seed", o.seed}, {"shots", o.shots}};
  if (o.backend == "remote") j["url"] = o.url;
  if (!o.qubits.empty()) j["qubits"] = o.qubits;
  if (metric == "coherence") j["kind"] = o.coherence_kind;
  if (metric == "qv") j.update({{"max_width", o.max_width}, {"circuits", o.circuits}});
  if (metric == "clops") j.update({{"qv", o.measured_qv}, {"templates", o.templates}, {"updates", o.updates}});
  if (metric == "stability") j.update({{"repeats", o.repeats}, {"interval_s", o.interval_s}});
  if (metric == "qscore") j.update({{"sizes", o.sizes}, {"graphs", o.graphs}, {"time_limit_s", o.time_limit_s}});
  if (metric == "appsuite") j["widths"] = o.widths;
  return j;
}

std::unique_ptr<Backend> make_backend(const Options& o) {
  if (o.backend == "remote") {
    if (o.url.empty()) throw PreconditionError("--backend remote needs --url");
    return std::make_unique<RemoteBackend>(o.url);
  }
  const DeviceModel dev = o.device.empty() ? starmon5_reference_model() : load_device(o.device);
  return std::make_unique<LocalBackend>(dev, o.seed);
}

std::vector<int> target_qubits(const Options& o, const Backend& b) {
  const int n = b.capabilities().n_qubits;
  if (o.qubits.empty()) {
    std::vector<int> all(static_cast<size_t>(n));
    for (int q = 0; q < n; ++q) all[static_cast<size_t>(q)] = q;
    return all;
  }
  for (int q : o.qubits)
    if (q < 0 || q >= n) throw PreconditionError("--qubit " + std::to_string(q) + " out of range");
  return o.qubits;
}

std::string qkey(int q, const std::string& name) { return "q" + std::to_string(q) + "." + name; }

Json series_json(const DataSeries& d) { return {{"x", d.x}, {"y", d.y}, {"shots", d.shots}}; }

Json fit_json(const FitResult& f) {
  Json params = Json::object();
  const auto names = parameter_names(f.model);
  for (size_t i = 0; i < names.size(); ++i) {
    const double v = f.params[static_cast<Eigen::Index>(i)], e = f.std_errors[static_cast<Eigen::Index>(i)];
    params[std::string(names[i])] = {{"value", std::isfinite(v) ? Json(v) : Json(nullptr)},
                                     {"std_error", std::isfinite(e) ? Json(e) : Json(nullptr)}};
  }
  return {{"model", std::string(to_string(f.model))}, {"params", params}, {"rss", f.rss},
          {"converged", f.converged}, {"identifiable", f.identifiable}, {"flag", f.flag}};
}

void note(MetricReport& r, bool ok, const std::string& what, const std::string& flag) {
  if (ok) return;
  r.valid = false;
  r.flags.push_back(what + (flag.empty() ? "" : ": " + flag));
}

void add_coherence(MetricReport& r, Json& raw, const std::string& name, const CoherenceResult& c) {
  r.scalars[qkey(c.qubit, name + "_us")] = scalar(c.value_us, "us");
  r.scalars[qkey(c.qubit, name + "_se_us")] = scalar(c.std_error_us, "us");
  raw[qkey(c.qubit, name)] = {{"data", series_json(c.data)}, {"fit", fit_json(c.fit)}};
  note(r, c.valid, qkey(c.qubit, name), c.flag);
}

void add_rb(MetricReport& r, Json& raw, const RBResult& rb) {
  r.scalars[qkey(rb.qubit, "alpha")] = scalar(rb.alpha, "dimensionless");
  r.scalars[qkey(rb.qubit, "epc")] = scalar(rb.epc, "dimensionless");
  r.scalars[qkey(rb.qubit, "f1q")] = scalar(rb.f1q, "dimensionless");
  raw[qkey(rb.qubit, "rb")] = {{"data", series_json(rb.data)}, {"fit", fit_json(rb.fit)}};
  note(r, rb.valid, qkey(rb.qubit, "rb"), rb.flag);
}

void add_readout(MetricReport& r, const ReadoutResult& ro, const std::vector<int>& qubits) {
  for (int q : qubits) {
    const Eigen::Matrix2d& m = ro.assignment[static_cast<size_t>(q)];
    r.scalars[qkey(q, "f_ro")] = scalar(ro.fidelity[static_cast<size_t>(q)], "dimensionless");
    r.scalars[qkey(q, "p1_given_0")] = scalar(m(0, 1), "probability");
    r.scalars[qkey(q, "p0_given_1")] = scalar(m(1, 0), "probability");
  }
}

using Runner = std::function<void(Backend&, const Options&, MetricReport&, Json& raw)>;

void run_calibrate(Backend& b, const Options& o, MetricReport& r, Json& raw) {
  CalibrationConfig cfg;
  cfg.seed = o.seed;
  if (o.shots > 0) cfg.rb.shots = cfg.t1.shots = cfg.t2star.shots = cfg.t2hahn.shots = cfg.readout_shots = o.shots;
  const CalibrationResult c = run_calibration(b, cfg);
  std::vector<int> all;
  for (const QubitCalibration& q : c.qubits) {
    all.push_back(q.rb.qubit);
    add_rb(r, raw, q.rb);
    add_coherence(r, raw, "t1", q.t1);
    add_coherence(r, raw, "t2star", q.t2star);
    add_coherence(r, raw, "t2hahn", q.t2hahn);
  }
  add_readout(r, c.readout, all);
  r.scalars["q_factor"] = scalar(c.q_factor, "dimensionless");
}

void run_rb_cmd(Backend& b, const Options& o, MetricReport& r, Json& raw) {
  RBConfig cfg;
  cfg.seed = o.seed;
  if (o.shots > 0) cfg.shots = o.shots;
  for (int q : target_qubits(o, b)) add_rb(r, raw, run_rb(b, cfg, q));
}

void run_readout_cmd(Backend& b, const Options& o, MetricReport& r, Json& raw) {
  const ReadoutResult ro = measure_readout(b, o.shots > 0 ? o.shots : 4096, o.seed);
  add_readout(r, ro, target_qubits(o, b));
  raw["shots"] = ro.shots;
}

void run_crosstalk_cmd(Backend& b, const Options& o, MetricReport& r, Json& raw) {
  const CrosstalkResult x = measure_crosstalk(b, o.shots > 0 ? o.shots : 16384, o.seed);
  r.scalars["crosstalk_max_row_l1"] = scalar(x.summary, "probability");
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < x.matrix.rows(); ++i) {
    std::vector<double> row(x.matrix.row(i).begin(), x.matrix.row(i).end());
    rows.push_back(row);
  }
  raw["assignment"] = rows;
}

void run_coherence_cmd(Backend& b, const Options& o, MetricReport& r, Json& raw) {
  const std::string& kind = o.coherence_kind;
  CoherenceConfig cfg = kind == "t1" ? CoherenceConfig::t1()
                        : kind == "t2star" ? CoherenceConfig::t2star()
                                           : CoherenceConfig::t2hahn();
  cfg.seed = o.seed;
  if (o.shots > 0) cfg.shots = o.shots;
  for (int q : target_qubits(o, b)) {
    const CoherenceResult c = kind == "t1" ? t1_experiment(b, q, cfg)
                              : kind == "t2star" ? t2star_experiment(b, q, cfg)
                                                 : t2hahn_experiment(b, q, cfg);
    add_coherence(r, raw, kind, c);
  }
}

QVResult qv_with(Backend& b, const Options& o) {
  QVConfig cfg;
  cfg.seed = o.seed;
  cfg.max_width = o.max_width;
  cfg.n_circuits = o.circuits;
  if (o.shots > 0) cfg.shots = o.shots;
  return run_quantum_volume(b, cfg);
}

void run_qv_cmd(Backend& b, const Options& o, MetricReport& r, Json& raw) {
  const QVResult q = qv_with(b, o);
  r.scalars["qv"] = {q.qv, "dimensionless"};
  r.scalars["log2_qv"] = {q.log2_qv(), "layers"};
  Json depths = Json::array();
  for (const QVDepthResult& d : q.depths) {
    const std::string w = "d" + std::to_string(d.width) + ".";
    r.scalars[w + "heavy_fraction"] = scalar(d.mean_heavy, "probability");
    r.scalars[w + "std_error"] = scalar(d.std_error, "probability");
    r.scalars[w + "ideal_heavy_mass"] = scalar(d.ideal_heavy, "probability");
    depths.push_back({{"width", d.width}, {"mean_heavy", d.mean_heavy}, {"std_error", d.std_error},
                      {"ideal_heavy", d.ideal_heavy}, {"pass", d.pass}});
  }
  raw["depths"] = depths;
  note(r, q.flag.empty(), "qv", q.flag);
}

void run_clops_cmd(Backend& b, const Options& o, MetricReport& r, Json&) {
  int qv = o.measured_qv;
  if (qv == 0) {
    qv = qv_with(b, o).qv;
    r.scalars["qv"] = {qv, "dimensionless"};
  }
  if (qv < 2) {
    note(r, false, "clops", "measured QV is 1, no layers to time");
    return;
  }
  CLOPSConfig cfg;
  cfg.seed = o.seed;
  cfg.templates = o.templates;
  cfg.updates = o.updates;
  cfg.shots = o.shots > 0 ? o.shots : 100;
  const CLOPSResult c = run_clops(b, cfg, qv);
  r.scalars["templates"] = {c.templates, "circuits"};
  r.scalars["updates"] = {c.updates, "rounds"};
  r.scalars["shots"] = {c.shots, "shots"};
  r.scalars["layers"] = {c.layers, "layers"};
  r.scalars["quantum_time_s"] = scalar(c.timing.quantum_s, "s");
  r.scalars["outcome_digest"] = {c.outcome_digest, "hash"};
  r.timing = {{"clops", c.clops},
              {"t_total_s", c.timing.total_s()},
              {"quantum_s", c.timing.quantum_s},
              {"classical_s", c.timing.classical_s},
              {"backend_reported_quantum_time", c.timing.backend_reported}};
}

void run_stability_cmd(Backend& b, const Options& o, MetricReport& r, Json& raw) {
  StabilityConfig cfg;
  cfg.seed = o.seed;
  cfg.repeats = o.repeats;
  cfg.interval_s = o.interval_s;
  cfg.qubits = o.qubits;
  if (o.shots > 0) cfg.t2star.shots = o.shots;
  const StabilityRecord rec = run_stability(b, cfg);
  for (const QubitStability& q : rec.qubits) {
    r.scalars[qkey(q.qubit, "t2star_mean_us")] = scalar(q.mean_us, "us");
    r.scalars[qkey(q.qubit, "t2star_relative_std")] = scalar(q.relative_std, "dimensionless");
    r.scalars[qkey(q.qubit, "excluded_points")] = {q.excluded, "points"};
    Json pts = Json::array();
    for (const StabilityPoint& p : q.points)
      pts.push_back({{"time_s", p.time_s}, {"t2star_us", p.t2star_us}, {"std_error_us", p.std_error_us},
                     {"valid", p.valid}, {"flag", p.flag}});
    raw[qkey(q.qubit, "points")] = pts;
    note(r, std::isfinite(q.relative_std), qkey(q.qubit, "stability"), "fewer than two valid points");
  }
}

void run_qscore_cmd(Backend& b, const Options& o, MetricReport& r, Json&) {
  QScoreConfig cfg;
  cfg.seed = o.seed;
  cfg.sizes = o.sizes;
  cfg.graphs_per_size = o.graphs;
  cfg.time_limit_s = o.time_limit_s;
  if (o.shots > 0) cfg.shots = o.shots;
  const QScoreResult q = run_qscore(b, cfg);
  r.scalars["qscore"] = {q.qscore, "nodes"};
  r.scalars["beta_threshold"] = scalar(cfg.beta_threshold, "dimensionless");
  for (const QScoreSize& s : q.sizes) {
    const std::string n = "n" + std::to_string(s.n) + ".";
    r.scalars[n + "beta"] = scalar(s.beta, "dimensionless");
    r.scalars[n + "mean_cut"] = scalar(s.mean_cut, "edges");
    r.scalars[n + "mean_random_cut"] = scalar(s.mean_random, "edges");
    r.scalars[n + "mean_optimum"] = scalar(s.mean_optimum, "edges");
    r.timing[n + "wall_time_s"] = s.wall_time_s;
    r.timing[n + "within_time"] = s.within_time;
  }
  note(r, q.flag.empty(), "qscore", q.flag);
}

void run_appsuite_cmd(Backend& b, const Options& o, MetricReport& r, Json& raw) {
  AppSuiteConfig cfg;
  cfg.seed = o.seed;
  cfg.widths = o.widths;
  if (o.shots > 0) cfg.shots = o.shots;
  const auto cells = run_app_suite(b, cfg);
  for (const VolumetricCell& c : cells) {
    const std::string k = c.algorithm + ".w" + std::to_string(c.width) + ".";
    if (!c.skipped.empty()) {
      r.flags.push_back(k + "skipped: " + c.skipped);
      continue;
    }
    r.scalars[k + "fidelity"] = scalar(c.fidelity, "dimensionless");
    r.scalars[k + "depth"] = {c.depth, "layers"};
  }
  raw["cells"] = cells_to_json(cells);
}

int run_metric(const std::string& metric, const Runner& fn, const Options& o, std::ostream& out) {
  auto backend = make_backend(o);
  MetricReport r;
  r.metric = metric;
  r.seed = o.seed;
  r.config = options_json(o, metric);
  r.backend = backend->metadata();
  r.started_at = utc_timestamp();
  Json raw = Json::object();
  fn(*backend, o, r, raw);
  r.finished_at = utc_timestamp();

  RunStore store = RunStore::create(o.out, o.run_id);
  r.run_id = store.id();
  if (!raw.empty()) r.raw.push_back(store.write_raw(metric, raw));
  store.append(r);
  if (metric == "appsuite") {
    std::ofstream csv(store.dir() / "volumetric.csv");
    write_volumetric_csv(csv, cells_from_json(raw["cells"]));
  }
  out << r.to_json().dump(2) << '\n';
  return r.valid ? kExitOk : kExitInvalid;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum computer benchmarking toolkit", "qbench"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--backend", o.backend, "Execution backend")->check(CLI::IsMember({"sim", "remote"}))->capture_default_str();
  app.add_option("--device", o.device, "Device model JSON (sim backend); default is the built-in Starmon-5 model");
  app.add_option("--url", o.url, "Job server URL (remote backend)");
  app.add_option("--seed", o.seed, "Master seed")->capture_default_str();
  app.add_option("--shots", o.shots, "Shots per circuit; 0 keeps each metric's default")->check(CLI::NonNegativeNumber);
  app.add_option("--out", o.out, "Run store root directory")->capture_default_str();
  app.add_option("--run-id", o.run_id, "Name of the run directory; generated when empty");
  app.add_option("--time-limit", o.time_limit_s, "Q-score wall-clock budget per size in seconds")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  std::map<std::string, Runner> runners;
  auto metric = [&](const std::string& name, const std::string& help, Runner fn) {
    runners[name] = std::move(fn);
    return app.add_subcommand(name, help);
  };
  metric("calibrate", "All component metrics on every qubit", run_calibrate);
  metric("rb", "Single-qubit randomized benchmarking", run_rb_cmd)->add_option("--qubit", o.qubits, "Qubits (default all)");
  metric("readout", "Readout assignment fidelity", run_readout_cmd)->add_option("--qubit", o.qubits, "Qubits (default all)");
  metric("crosstalk", "Joint readout assignment matrix", run_crosstalk_cmd);
  auto* coh = metric("coherence", "T1, T2* or T2 Hahn-echo", run_coherence_cmd);
  coh->add_option("kind", o.coherence_kind, "Experiment")->required()->check(CLI::IsMember({"t1", "t2star", "t2hahn"}));
  coh->add_option("--qubit", o.qubits, "Qubits (default all)");
  auto* qv = metric("qv", "Quantum volume", run_qv_cmd);
  qv->add_option("--max-width", o.max_width, "Largest width (default backend width)")->check(CLI::NonNegativeNumber);
  qv->add_option("--circuits", o.circuits, "Circuits per depth")->check(CLI::PositiveNumber)->capture_default_str();
  auto* cl = metric("clops", "Circuit layer operations per second", run_clops_cmd);
  cl->add_option("--qv", o.measured_qv, "Measured QV; measured first when omitted")->check(CLI::NonNegativeNumber);
  cl->add_option("--templates", o.templates, "Parallel templates M")->check(CLI::PositiveNumber)->capture_default_str();
  cl->add_option("--updates", o.updates, "Parameter updates K")->check(CLI::PositiveNumber)->capture_default_str();
  cl->add_option("--max-width", o.max_width, "Largest QV width when measuring QV first");
  cl->add_option("--circuits", o.circuits, "QV circuits per depth when measuring QV first")->check(CLI::PositiveNumber);
  auto* st = metric("stability", "T2* over time", run_stability_cmd);
  st->add_option("--repeats", o.repeats, "Repeats")->check(CLI::PositiveNumber)->capture_default_str();
  st->add_option("--interval", o.interval_s, "Seconds between repeats")->check(CLI::NonNegativeNumber)->capture_default_str();
  st->add_option("--qubit", o.qubits, "Qubits (default all)");
  auto* qs = metric("qscore", "Q-score with QAOA max-cut", run_qscore_cmd);
  qs->add_option("--sizes", o.sizes, "Graph sizes, ascending")->capture_default_str();
  qs->add_option("--graphs", o.graphs, "Graphs per size")->check(CLI::PositiveNumber)->capture_default_str();
  metric("appsuite", "BV, DJ and QFT volumetric suite", run_appsuite_cmd)
      ->add_option("--widths", o.widths, "Circuit widths")->capture_default_str();
  auto* rep = app.add_subcommand("report", "Aggregate runs into summary.json and volumetric.csv");
  rep->add_option("--run", o.runs, "Run ids under --out (default all)");

  std::vector<std::string> argv_store{"qbench"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (rep->parsed()) {
      const Json summary = emit_report(o.out, o.runs, o.out);
      out << summary.dump(2) << '\n';
      return kExitOk;
    }
    for (const auto& [name, fn] : runners)
      if (app.got_subcommand(name)) return run_metric(name, fn, o, out);
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CapabilityError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NotFoundError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitUsage;
}

}  // namespace qbench
