#include "qbench/component.hpp"

#include "qbench/clifford.hpp"
#include "qbench/error.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace qbench {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Distinct seed streams for each experiment kind and qubit.
enum class Stream : std::uint64_t { RB = 1, Readout, Crosstalk, T1, T2Star, T2Hahn, Calibration };

std::uint64_t stream_seed(std::uint64_t seed, Stream s, int qubit = 0) {
  return circuit_seed(circuit_seed(seed, static_cast<std::size_t>(s)), static_cast<std::size_t>(qubit));
}

void check_qubit(int qubit, int n_qubits) {
  if (qubit < 0 || qubit >= n_qubits)
    throw PreconditionError("qubit " + std::to_string(qubit) + " out of range for " + std::to_string(n_qubits) +
                            " qubits");
}

std::string fit_flag(const FitResult& f) {
  if (!f.flag.empty()) return f.flag;
  if (!f.converged) return "fit did not converge";
  return {};
}

CoherenceResult finish_coherence(int qubit, DataSeries data, FitResult fit) {
  CoherenceResult r;
  r.qubit = qubit;
  r.data = std::move(data);
  r.fit = std::move(fit);
  r.value_us = r.fit.value("T");
  r.std_error_us = r.fit.error("T");
  r.flag = fit_flag(r.fit);
  r.valid = r.flag.empty();
  return r;
}

DataSeries collect(Backend& backend, const std::vector<Circuit>& circuits, const std::vector<double>& xs,
                   std::int64_t shots, std::uint64_t seed, int qubit) {
  const auto tables = submit_and_wait(backend, circuits, shots, seed);
  DataSeries d;
  d.x = xs;
  for (const ShotTable& t : tables) {
    d.y.push_back(t.fraction_one(qubit));
    d.shots.push_back(t.shots);
  }
  return d;
}

}  // namespace

double epc_from_alpha(double alpha) { return (1.0 - alpha) / 2.0; }

double f1q_from_epc(double epc, double pulses_per_clifford) {
  return std::pow(1.0 - epc, 1.0 / pulses_per_clifford);
}

double readout_fidelity(const Eigen::Matrix2d& m) { return 1.0 - (m(0, 1) + m(1, 0)) / 2.0; }

double q_factor(std::span<const double> t2star_us, double gate_ns) {
  if (t2star_us.empty()) throw PreconditionError("q_factor needs at least one T2* value");
  if (!(gate_ns > 0)) throw PreconditionError("gate duration must be positive");
  const double mean = std::accumulate(t2star_us.begin(), t2star_us.end(), 0.0) / static_cast<double>(t2star_us.size());
  return mean * 1000.0 / gate_ns;
}

std::vector<Circuit> gen_rb_sequences(const RBConfig& cfg, int qubit, int n_qubits) {
  check_qubit(qubit, n_qubits);
  if (cfg.sequences_per_length <= 0) throw PreconditionError("sequences_per_length must be positive");
  std::mt19937_64 rng(stream_seed(cfg.seed, Stream::RB, qubit));
  std::uniform_int_distribution<int> pick(0, kCliffordGroupSize - 1);
  std::vector<Circuit> out;
  for (int len : cfg.lengths) {
    if (len < 0) throw PreconditionError("RB lengths must be >= 0");
    for (int s = 0; s < cfg.sequences_per_length; ++s) {
      Circuit c(n_qubits, "rb_q" + std::to_string(qubit) + "_n" + std::to_string(len) + "_s" + std::to_string(s));
      CliffordElement net = kCliffordIdentity;
      for (int k = 0; k < len; ++k) {
        const CliffordElement e{pick(rng)};
        net = compose_cliffords(net, e);
        c.append(clifford_gates(e, qubit));
      }
      c.append(clifford_gates(inverse_clifford(net), qubit));
      c.append(Gate::measure_all());
      out.push_back(std::move(c));
    }
  }
  return out;
}

RBResult run_rb(Backend& backend, const RBConfig& cfg, int qubit) {
  const int n = backend.capabilities().n_qubits;
  const auto circuits = gen_rb_sequences(cfg, qubit, n);
  const auto tables = submit_and_wait(backend, circuits, cfg.shots, stream_seed(cfg.seed, Stream::RB, qubit));

  RBResult r;
  r.qubit = qubit;
  const auto per = static_cast<size_t>(cfg.sequences_per_length);
  for (size_t li = 0; li < cfg.lengths.size(); ++li) {
    double sum = 0.0;
    std::int64_t shots = 0;
    for (size_t s = 0; s < per; ++s) {
      const ShotTable& t = tables[li * per + s];
      sum += t.fraction_one(qubit);
      shots += t.shots;
    }
    r.data.x.push_back(cfg.lengths[li]);
    r.data.y.push_back(sum / static_cast<double>(per));
    r.data.shots.push_back(shots);
  }
  r.fit = fit_geometric(r.data);
  r.alpha = r.fit.value("alpha");
  r.epc = epc_from_alpha(r.alpha);
  r.f1q = f1q_from_epc(r.epc, mean_clifford_pulse_count());
  r.flag = fit_flag(r.fit);
  r.valid = r.flag.empty();
  return r;
}

ReadoutResult measure_readout(Backend& backend, std::int64_t shots, std::uint64_t seed) {
  const int n = backend.capabilities().n_qubits;
  Circuit zeros(n, "readout_all0"), ones(n, "readout_all1");
  zeros.append(Gate::measure_all());
  for (int q = 0; q < n; ++q) {
    Gate x = Gate::x(q);
    x.parallel = q > 0;
    ones.append(x);
  }
  ones.append(Gate::measure_all());
  const std::vector<Circuit> circuits{zeros, ones};
  const auto tables = submit_and_wait(backend, circuits, shots, stream_seed(seed, Stream::Readout));

  ReadoutResult r;
  r.shots = shots;
  for (int q = 0; q < n; ++q) {
    const double p1_given0 = tables[0].fraction_one(q), p1_given1 = tables[1].fraction_one(q);
    Eigen::Matrix2d m;
    m << 1.0 - p1_given0, p1_given0, 1.0 - p1_given1, p1_given1;
    r.assignment.push_back(m);
    r.fidelity.push_back(readout_fidelity(m));
  }
  return r;
}

Eigen::MatrixXd tensor_assignment(std::span<const Eigen::Matrix2d> per_qubit) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Ones(1, 1);
  for (const Eigen::Matrix2d& m : per_qubit) {
    Eigen::MatrixXd next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index i = 0; i < out.rows(); ++i)
      for (Eigen::Index j = 0; j < out.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = out(i, j) * m;
    out = std::move(next);
  }
  return out;
}

double max_row_l1(const Eigen::MatrixXd& measured, const Eigen::MatrixXd& predicted) {
  if (measured.rows() != predicted.rows() || measured.cols() != predicted.cols())
    throw PreconditionError("assignment matrices differ in shape");
  return (measured - predicted).cwiseAbs().rowwise().sum().maxCoeff();
}

CrosstalkResult measure_crosstalk(Backend& backend, std::int64_t shots, std::uint64_t seed) {
  const int n = backend.capabilities().n_qubits;
  if (n > kCrosstalkMaxQubits)
    throw PreconditionError("crosstalk needs 2^n preparations; at most " + std::to_string(kCrosstalkMaxQubits) +
                            " qubits");
  const std::uint64_t dim = std::uint64_t(1) << n;
  std::vector<Circuit> circuits;
  for (std::uint64_t b = 0; b < dim; ++b) {
    Circuit c(n, "crosstalk_" + to_bitstring(b, n));
    bool first = true;
    for (int q = 0; q < n; ++q) {
      if (!((b >> (n - 1 - q)) & 1u)) continue;
      Gate x = Gate::x(q);
      x.parallel = !first;
      first = false;
      c.append(x);
    }
    c.append(Gate::measure_all());
    circuits.push_back(std::move(c));
  }
  const auto tables = submit_and_wait(backend, circuits, shots, stream_seed(seed, Stream::Crosstalk));

  CrosstalkResult r;
  r.shots = shots;
  const auto d = static_cast<Eigen::Index>(dim);
  r.matrix = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index b = 0; b < d; ++b)
    for (const auto& [bits, count] : tables[static_cast<size_t>(b)].counts)
      r.matrix(b, static_cast<Eigen::Index>(from_bitstring(bits))) =
          static_cast<double>(count) / static_cast<double>(tables[static_cast<size_t>(b)].shots);

  for (int q = 0; q < n; ++q) {
    Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
    const Eigen::Index mask = Eigen::Index(1) << (n - 1 - q);
    for (Eigen::Index b = 0; b < d; ++b)
      for (Eigen::Index o = 0; o < d; ++o) m((b & mask) ? 1 : 0, (o & mask) ? 1 : 0) += r.matrix(b, o);
    m.row(0) /= m.row(0).sum();
    m.row(1) /= m.row(1).sum();
    r.marginals.push_back(m);
  }
  r.summary = max_row_l1(r.matrix, tensor_assignment(r.marginals));
  return r;
}

std::vector<double> CoherenceConfig::waits_us() const {
  if (n_waits < 2) throw PreconditionError("need at least two wait durations");
  if (!(max_wait_us > 0)) throw PreconditionError("max wait must be positive");
  std::vector<double> w;
  for (int i = 0; i < n_waits; ++i) w.push_back(max_wait_us * i / (n_waits - 1));
  return w;
}

std::vector<Circuit> t1_circuits(const CoherenceConfig& cfg, int qubit, int n_qubits) {
  check_qubit(qubit, n_qubits);
  std::vector<Circuit> out;
  for (double t : cfg.waits_us()) {
    Circuit c(n_qubits, "t1_q" + std::to_string(qubit));
    c.append(Gate::x(qubit)).append(Gate::wait(qubit, t * 1000.0)).append(Gate::measure_all());
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<Circuit> t2star_circuits(const CoherenceConfig& cfg, int qubit, int n_qubits) {
  check_qubit(qubit, n_qubits);
  std::vector<Circuit> out;
  for (double t : cfg.waits_us()) {
    Circuit c(n_qubits, "t2star_q" + std::to_string(qubit));
    c.append(Gate::x90(qubit))
        .append(Gate::wait(qubit, t * 1000.0))
        .append(Gate::rz(qubit, kTwoPi * cfg.detuning_mhz * t))
        .append(Gate::x90(qubit))
        .append(Gate::measure_all());
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<Circuit> t2hahn_circuits(const CoherenceConfig& cfg, int qubit, int n_qubits) {
  check_qubit(qubit, n_qubits);
  std::vector<Circuit> out;
  for (double t : cfg.waits_us()) {
    Circuit c(n_qubits, "t2hahn_q" + std::to_string(qubit));
    c.append(Gate::x90(qubit))
        .append(Gate::wait(qubit, t * 500.0))
        .append(Gate::x(qubit))
        .append(Gate::wait(qubit, t * 500.0))
        .append(Gate::x90(qubit))
        .append(Gate::measure_all());
    out.push_back(std::move(c));
  }
  return out;
}

CoherenceResult t1_experiment(Backend& backend, int qubit, const CoherenceConfig& cfg) {
  const int n = backend.capabilities().n_qubits;
  DataSeries d = collect(backend, t1_circuits(cfg, qubit, n), cfg.waits_us(), cfg.shots,
                         stream_seed(cfg.seed, Stream::T1, qubit), qubit);
  FitResult f = fit_exp_decay(d);
  return finish_coherence(qubit, std::move(d), std::move(f));
}

CoherenceResult t2star_experiment(Backend& backend, int qubit, const CoherenceConfig& cfg) {
  const int n = backend.capabilities().n_qubits;
  DataSeries d = collect(backend, t2star_circuits(cfg, qubit, n), cfg.waits_us(), cfg.shots,
                         stream_seed(cfg.seed, Stream::T2Star, qubit), qubit);
  // Without detuning there is no oscillation to seed; search around 1.5
  // periods per window so the degenerate case is still fitted and flagged.
  const double omega = cfg.detuning_mhz > 0 ? kTwoPi * cfg.detuning_mhz : 1.5 * kTwoPi / cfg.max_wait_us;
  FitResult f = fit_damped_sinusoid(d, omega);
  return finish_coherence(qubit, std::move(d), std::move(f));
}

CoherenceResult t2hahn_experiment(Backend& backend, int qubit, const CoherenceConfig& cfg) {
  const int n = backend.capabilities().n_qubits;
  DataSeries d = collect(backend, t2hahn_circuits(cfg, qubit, n), cfg.waits_us(), cfg.shots,
                         stream_seed(cfg.seed, Stream::T2Hahn, qubit), qubit);
  FitResult f = fit_exp_decay(d);
  return finish_coherence(qubit, std::move(d), std::move(f));
}

CalibrationResult run_calibration(Backend& backend, const CalibrationConfig& cfg) {
  const int n = backend.capabilities().n_qubits;
  CalibrationResult out;
  out.readout = measure_readout(backend, cfg.readout_shots, cfg.seed);
  std::vector<double> t2s;
  for (int q = 0; q < n; ++q) {
    QubitCalibration qc;
    RBConfig rb = cfg.rb;
    rb.seed = cfg.seed;
    CoherenceConfig t1 = cfg.t1, t2 = cfg.t2star, hahn = cfg.t2hahn;
    t1.seed = t2.seed = hahn.seed = cfg.seed;
    qc.rb = run_rb(backend, rb, q);
    qc.t1 = t1_experiment(backend, q, t1);
    qc.t2star = t2star_experiment(backend, q, t2);
    qc.t2hahn = t2hahn_experiment(backend, q, hahn);
    qc.assignment = out.readout.assignment[static_cast<size_t>(q)];
    qc.f_ro = out.readout.fidelity[static_cast<size_t>(q)];
    if (qc.t2star.valid) t2s.push_back(qc.t2star.value_us);
    out.qubits.push_back(std::move(qc));
  }
  out.q_factor = t2s.empty() ? std::nan("") : q_factor(t2s, cfg.gate_ns);
  return out;
}

}  // namespace qbench
