// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "qbench/backend.hpp"
#include "qbench/cli.hpp"
#include "qbench/clops.hpp"
#include "qbench/component.hpp"
#include "qbench/error.hpp"
#include "qbench/fit.hpp"
#include "qbench/graph.hpp"
#include "qbench/json_io.hpp"
#include "qbench/quantum_volume.hpp"
#include "qbench/qscore.hpp"
#include "qbench/remote.hpp"
#include "qbench/report.hpp"
#include "qbench/simulator.hpp"
#include "qbench/stability.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace qbench;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

bool run_criterion(int id, const std::string& name, double limit_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " [exception: " << e.what() << "]";
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(dt < limit_s, "runtime over " + std::to_string(limit_s) + " s");
  std::printf("%s criterion %d: %s (%.2f s)%s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), dt,
              o.detail.str().c_str());
  std::fflush(stdout);
  return o.pass;
}

bool rel_close(double got, double want, double tol) { return std::abs(got - want) <= tol * std::abs(want); }

constexpr std::array<double, 5> kT1{15.45, 15.95, 19.42, 22.74, 12.21};
constexpr std::array<double, 5> kT2{13.29, 24.68, 21.40, 21.40, 16.20};
constexpr std::array<double, 5> kF1Q{0.99798, 0.99827, 0.99812, 0.99828, 0.99868};
constexpr std::array<double, 5> kFRO{0.967, 0.968, 0.975, 0.984, 0.964};

void formulas(Outcome& o) {
  Eigen::Matrix2d m;
  m << 0.95, 0.05, 0.02, 0.98;
  o.require(rel_close(readout_fidelity(m), 0.965, 1e-12), "F_RO");
  const double alpha = 0.99;
  o.require(rel_close(epc_from_alpha(alpha), 0.005, 1e-12), "EPC");
  o.require(rel_close(f1q_from_epc(0.005), std::pow(0.995, 1.0 / 1.875), 1e-12), "F_1Q");
  const double clops = clops_formula(100, 10, 100, 2, 537.63);
  o.require(rel_close(clops, 200000.0 / 537.63, 1e-12) && std::abs(clops - 372.0) < 0.05, "CLOPS");
  const std::vector<double> t2{20.0, 40.0};
  o.require(rel_close(q_factor(t2, 20.0), 1500.0, 1e-12), "Q-factor");
  o.detail << " F_RO=" << readout_fidelity(m) << " CLOPS=" << clops;
}

void calibration(Outcome& o) {
  LocalBackend backend(starmon5_reference_model());
  CalibrationConfig cfg;
  cfg.seed = 1;
  const CalibrationResult r = run_calibration(backend, cfg);
  o.require(r.qubits.size() == 5, "five qubits");
  double worst_t1 = 0, worst_t2 = 0, worst_ro = 0, worst_f1q = 0;
  for (size_t q = 0; q < r.qubits.size(); ++q) {
    const QubitCalibration& c = r.qubits[q];
    worst_t1 = std::max(worst_t1, std::abs(c.t1.value_us / kT1[q] - 1));
    worst_t2 = std::max(worst_t2, std::abs(c.t2star.value_us / kT2[q] - 1));
    worst_ro = std::max(worst_ro, std::abs(c.f_ro - kFRO[q]));
    worst_f1q = std::max(worst_f1q, std::abs(c.rb.f1q - kF1Q[q]));
    o.require(c.t1.valid && c.t2star.valid && c.rb.valid, "valid fits on q" + std::to_string(q));
  }
  o.require(worst_t1 <= 0.10, "T1 within 10%");
  o.require(worst_t2 <= 0.15, "T2* within 15%");
  o.require(worst_ro <= 0.005, "F_RO within 0.5 pp");
  o.require(worst_f1q <= 0.0005, "F_1Q within 0.05 pp");
  o.detail << " worst: T1 " << 100 * worst_t1 << "%, T2* " << 100 * worst_t2 << "%, F_RO " << 100 * worst_ro
           << " pp, F_1Q " << 100 * worst_f1q << " pp";
}

void qfactor(Outcome& o) {
  const std::vector<double> t2(kT2.begin(), kT2.end());
  const double q = q_factor(t2, 20.0);
  o.require(std::abs(q - 969.7) <= 0.1, "969.7 +- 0.1");
  o.detail << " Q=" << q;
}

void quantum_volume(Outcome& o) {
  QVConfig cfg;
  cfg.seed = 1;
  cfg.max_width = 4;
  LocalBackend ideal(ideal_model(4));
  const QVResult ri = run_quantum_volume(ideal, cfg);
  o.require(ri.qv == 16, "ideal QV = 16");
  o.detail << " ideal QV=" << ri.qv << " h=";
  for (const QVDepthResult& d : ri.depths) {
    o.detail << d.mean_heavy << " ";
    o.require(d.mean_heavy >= 0.78 && d.mean_heavy <= 0.92, "ideal heavy fraction at d=" + std::to_string(d.width));
  }

  UniformRandomBackend uniform(4);
  const QVResult ru = run_quantum_volume(uniform, cfg);
  o.require(ru.qv == 1 && !ru.flag.empty(), "uniform QV flag");
  for (const QVDepthResult& d : ru.depths)
    o.require(std::abs(d.mean_heavy - 0.5) <= 0.03, "uniform heavy fraction at d=" + std::to_string(d.width));
  o.detail << "uniform QV=" << ru.qv;

  LocalBackend starmon(starmon5_reference_model());
  QVConfig sc = cfg;
  sc.max_width = 0;
  const QVResult rs = run_quantum_volume(starmon, sc);
  o.require(rs.qv == 2 || rs.qv == 4, "Starmon-5 QV in {2, 4}");
  o.detail << " starmon QV=" << rs.qv << " h=";
  for (const QVDepthResult& d : rs.depths) o.detail << d.mean_heavy << "+-" << d.std_error << " ";
}

void heavy_output(Outcome& o) {
  double total = 0, worst = 1;
  for (int i = 0; i < 100; ++i) {
    const QVCircuit c = gen_qv_circuit(3, circuit_seed(7, static_cast<size_t>(i)));
    const double h = heavy_mass(run_ideal(c.circuit));
    total += h;
    worst = std::min(worst, h);
  }
  const double mean = total / 100;
  o.require(mean >= 0.80 && mean <= 0.90, "mean heavy mass in [0.80, 0.90]");
  o.require(worst >= 0.5, "every heavy mass >= 0.5");
  o.detail << " mean=" << mean << " min=" << worst;
}

void qscore(Outcome& o) {
  LocalBackend ideal(ideal_model(5));
  QScoreConfig cfg;
  cfg.time_limit_s = 600;
  cfg.seed = 1;
  const QScoreResult ri = run_qscore(ideal, cfg);
  o.require(ri.qscore == 5, "ideal Q-score 5");
  o.detail << " ideal Q=" << ri.qscore;

  UniformRandomBackend uniform(5);
  double worst = 0;
  bool any_pass = false;
  for (std::uint64_t s = 0; s < 20; ++s) {
    QScoreConfig uc = cfg;
    uc.seed = s;
    for (const QScoreSize& z : run_qscore(uniform, uc).sizes) {
      if (std::isfinite(z.beta)) worst = std::max(worst, std::abs(z.beta));
      any_pass = any_pass || z.pass;
    }
  }
  o.require(!any_pass, "uniform never passes");
  o.require(worst < 0.1, "uniform |beta| < 0.1");
  o.detail << " uniform max|beta|=" << worst;

  int good = 0;
  LocalBackend ideal4(ideal_model(4));
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Graph g = gen_erdos_renyi(4, 0.5, 100 + s);
    QAOAConfig qc;
    qc.seed = s;
    qc.time_budget_s = 60;
    const QAOAResult r = qaoa_maxcut(g, ideal4, qc);
    good += r.best_cut >= 0.9 * maxcut_brute(g).value;
  }
  o.require(good >= 16, "QAOA N=4 within 0.9 of optimum on >= 80%");
  o.detail << " QAOA N=4 " << good << "/20";
}

DataSeries synth(FitModel m, const std::vector<double>& xs, const Eigen::VectorXd& p, std::int64_t shots,
                 std::mt19937_64* rng) {
  DataSeries d;
  d.x = xs;
  const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
  const Eigen::VectorXd y = model_values(m, x, p);
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (!rng) {
      d.y.push_back(y(i));
      continue;
    }
    d.y.push_back(static_cast<double>(std::binomial_distribution<std::int64_t>(shots, y(i))(*rng)) / shots);
    d.shots.push_back(shots);
  }
  return d;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(a + (b - a) * i / (n - 1));
  return v;
}

void fitting(Outcome& o) {
  const double omega = 2 * std::numbers::pi * 0.125;
  struct Case {
    FitModel model;
    std::vector<double> xs;
    Eigen::VectorXd truth;
    int key;
  };
  Eigen::VectorXd g(3), e(3), s(5);
  g << 0.45, 0.996, 0.05;
  e << 0.02, 0.95, 15.45;
  s << 0.5, 0.45, 21.4, omega, 0.3;
  const std::vector<Case> cases{{FitModel::Geometric, linspace(1, 151, 16), g, 1},
                                {FitModel::ExpDecay, linspace(0, 60, 32), e, 2},
                                {FitModel::DampedSinusoid, linspace(0, 24, 32), s, 2}};
  auto fit = [&](const Case& c, const DataSeries& d) {
    switch (c.model) {
      case FitModel::Geometric: return fit_geometric(d);
      case FitModel::ExpDecay: return fit_exp_decay(d);
      default: return fit_damped_sinusoid(d, omega);
    }
  };
  std::mt19937_64 rng(2024);
  for (const Case& c : cases) {
    const FitResult exact = fit(c, synth(c.model, c.xs, c.truth, 0, nullptr));
    double err = 0;
    for (Eigen::Index i = 0; i < c.truth.size(); ++i)
      err = std::max(err, std::abs(exact.params(i) - c.truth(i)) / std::max(std::abs(c.truth(i)), 1e-3));
    o.require(err < 1e-5, std::string(to_string(c.model)) + " exact recovery");
    int covered = 0;
    for (int t = 0; t < 100; ++t) {
      const FitResult f = fit(c, synth(c.model, c.xs, c.truth, 4096, &rng));
      covered += std::abs(f.params(c.key) - c.truth(c.key)) <= 3 * f.std_errors(c.key);
    }
    o.require(covered >= 93, std::string(to_string(c.model)) + " coverage >= 93");
    o.detail << " " << to_string(c.model) << ": err=" << err << " cover=" << covered;
  }
}

void crosstalk(Outcome& o) {
  const std::int64_t shots = 16384;
  LocalBackend ideal(ideal_model(5));
  const CrosstalkResult ri = measure_crosstalk(ideal, shots, 1);
  double worst_off = 0;
  for (Eigen::Index r = 0; r < ri.matrix.rows(); ++r) worst_off = std::max(worst_off, 1.0 - ri.matrix(r, r));
  o.require(worst_off < 3.0 / static_cast<double>(shots), "ideal off-diagonal mass < 3/shots");

  LocalBackend starmon(starmon5_reference_model());
  const CrosstalkResult rs = measure_crosstalk(starmon, shots, 1);
  o.require(rs.summary < 0.02, "independent readout L1 < 0.02");
  o.detail << " ideal off-diag=" << worst_off << " starmon L1=" << rs.summary;
}

int cli(std::vector<std::string> args, std::string& out) {
  std::ostringstream so, se;
  const int code = cli_main(args, so, se);
  out = so.str();
  return code;
}

void determinism(Outcome& o) {
  const fs::path root = fs::temp_directory_path() / ("qbench_accept_" + random_uuid().substr(0, 8));
  const std::string device = (fs::path(QBENCH_DATA_DIR) / "starmon5.json").string();
  const std::vector<std::vector<std::string>> commands{
      {"rb", "--qubit", "3"},
      {"readout"},
      {"coherence", "t2star", "--qubit", "1"},
      {"qv", "--max-width", "3", "--circuits", "20"},
      {"stability", "--repeats", "3", "--qubit", "0"},
      {"qscore", "--sizes", "2", "3"},
      {"appsuite", "--widths", "2", "3"}};
  for (std::vector<std::string> args : commands) {
    const std::string name = args[0];
    args.insert(args.end(), {"--device", device, "--seed", "11", "--out", root.string()});
    std::string a, b;
    const int ca = cli(args, a), cb = cli(args, b);
    const bool same = ca == cb && MetricReport::from_json(Json::parse(a)).scalars_dump() ==
                                       MetricReport::from_json(Json::parse(b)).scalars_dump();
    o.require(ca != kExitUsage && same, name + " reproducible");
  }

  LocalBackend local(starmon5_reference_model());
  MockServerOptions opts;
  opts.lose_submit_responses = 1;
  MockJobServer server(local, opts);
  server.start();
  RemoteBackend remote(server.url());
  Circuit c(5);
  c.append(Gate::x90(0)).append(Gate::cz(0, 2)).append(Gate::measure_all());
  const std::vector<Circuit> batch{c};
  const auto got = submit_and_wait(remote, batch, 500, 5, 30);
  LocalBackend reference(starmon5_reference_model());
  const auto want = submit_and_wait(reference, batch, 500, 5);
  o.require(got[0].counts == want[0].counts, "remote matches local");
  o.require(server.jobs_created() == 1 && server.submit_requests() == 2, "idempotent resubmission");
  const JobHandle h1 = remote.submit_with_key(batch, 10, 1, "acceptance-key");
  const JobHandle h2 = remote.submit_with_key(batch, 10, 1, "acceptance-key");
  o.require(h1.id == h2.id, "duplicate key returns the same job");
  bool not_found = false;
  try {
    remote.result({"no-such-job"});
  } catch (const NotFoundError&) {
    not_found = true;
  }
  o.require(not_found, "unknown job is NotFound");
  server.stop();
  fs::remove_all(root);
  o.detail << " " << commands.size() << " CLI metrics, mock server jobs=" << server.jobs_created()
           << " requests=" << server.submit_requests();
}

void stability(Outcome& o) {
  StabilityConfig cfg;
  cfg.repeats = 5;
  cfg.seed = 1;
  LocalBackend stable(starmon5_reference_model());
  const StabilityRecord rs = run_stability(stable, cfg);
  DeviceModel jittery = starmon5_reference_model();
  jittery.drift.jitter_sigma = 0.1;
  LocalBackend drifting(jittery, 1);
  const StabilityRecord rj = run_stability(drifting, cfg);
  o.detail << " sigma=0:";
  for (const QubitStability& q : rs.qubits) {
    o.require(q.relative_std < 0.05, "drift-free q" + std::to_string(q.qubit));
    o.detail << " " << q.relative_std;
  }
  o.detail << " sigma=0.1:";
  for (const QubitStability& q : rj.qubits) {
    o.require(q.relative_std >= 0.05 && q.relative_std <= 0.2, "jitter q" + std::to_string(q.qubit));
    o.detail << " " << q.relative_std;
  }
}

}  // namespace

int main() {
  std::cout.precision(6);
  bool ok = true;
  ok &= run_criterion(1, "formula exactness", 1, formulas);
  ok &= run_criterion(2, "calibration round trip", 300, calibration);
  ok &= run_criterion(3, "Q-factor", 1, qfactor);
  ok &= run_criterion(4, "quantum volume sanity", 600, quantum_volume);
  ok &= run_criterion(5, "heavy-output oracle", 60, heavy_output);
  ok &= run_criterion(6, "Q-score", 900, qscore);
  ok &= run_criterion(7, "fitting suite", 120, fitting);
  ok &= run_criterion(8, "crosstalk", 120, crosstalk);
  ok &= run_criterion(9, "determinism and remote protocol", 60, determinism);
  ok &= run_criterion(10, "stability", 300, stability);
  return ok ? 0 : 1;
}
