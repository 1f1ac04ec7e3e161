#include "doctest.h"
#include "oracle.hpp"

#include "qbench/density.hpp"
#include "qbench/device.hpp"
#include "qbench/error.hpp"
#include "qbench/linalg.hpp"
#include "qbench/simulator.hpp"
#include "qbench/statevector.hpp"

#include <cmath>
#include <random>

using namespace qbench;

namespace {

DeviceModel single_qubit_device(QubitParams q) {
  DeviceModel d;
  d.name = "single";
  d.qubits = {q};
  return d;
}

Eigen::MatrixXcd random_density(int n, std::mt19937_64& rng) {
  const Eigen::Index dim = Eigen::Index(1) << n;
  Eigen::MatrixXcd g(dim, dim);
  std::normal_distribution<double> normal;
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) g(i, j) = {normal(rng), normal(rng)};
  Eigen::MatrixXcd rho = g * g.adjoint();
  return rho / rho.trace().real();
}

oracle::MX apply_kraus_oracle(const oracle::MX& rho, const std::vector<Eigen::Matrix2cd>& ks, int q, int n) {
  oracle::MX out = oracle::MX::Zero(rho.rows(), rho.cols());
  for (const auto& k : ks) {
    const oracle::MX e = oracle::embed(k, q, n);
    out += e * rho * e.adjoint();
  }
  return out;
}

double tvd(const ShotTable& t, const Eigen::VectorXd& p) {
  double d = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i)
    d += std::abs(t.probability(to_bitstring(static_cast<std::uint64_t>(i), t.n_qubits)) - p(i));
  return d / 2;
}

}  // namespace

TEST_CASE("run_ideal basics") {
  Circuit x(1);
  x.append(Gate::x(0)).append(Gate::measure_all());
  auto d = to_distribution(run_ideal(x), 1);
  CHECK(d.size() == 1);
  CHECK(d["1"] == doctest::Approx(1.0));

  Circuit h(1);
  h.append(Gate::x90(0)).append(Gate::wait(0, 50));
  d = to_distribution(run_ideal(h), 1);
  CHECK(d["0"] == doctest::Approx(0.5));
  CHECK(d["1"] == doctest::Approx(0.5));

  Circuit order(3);
  order.append(Gate::x(0));
  CHECK(to_distribution(run_ideal(order), 3).count("100") == 1);

  CHECK_THROWS_AS(run_ideal(Circuit(13)), PreconditionError);
  CHECK_NOTHROW(run_ideal(Circuit(13), 13));
}

TEST_CASE("pure states stay normalized") {
  std::mt19937_64 rng(1);
  StateVector psi(4);
  for (int k = 0; k < 500; ++k) {
    const int q = std::uniform_int_distribution<int>(0, 3)(rng);
    switch (k % 3) {
      case 0: psi.apply(Gate::x90(q)); break;
      case 1: psi.apply(Gate::rz(q, 0.1 * k)); break;
      default: psi.apply(Gate::cz(q, (q + 1) % 4));
    }
    CHECK(std::abs(psi.amplitudes().norm() - 1.0) < 1e-9);
  }
}

TEST_CASE("Kraus sets are complete and invalid sets are rejected") {
  for (double p : {0.0, 0.1, 0.5, 0.99}) {
    for (const KrausChannel& k :
         {KrausChannel::amplitude_damping(p), KrausChannel::phase_damping(p), KrausChannel::depolarizing(p)}) {
      Eigen::Matrix2cd s = Eigen::Matrix2cd::Zero();
      for (const auto& op : k.ops()) s += op.adjoint() * op;
      CHECK((s - Eigen::Matrix2cd::Identity()).norm() < 1e-9);
    }
  }
  CHECK_THROWS_AS(KrausChannel({Eigen::Matrix2cd::Identity() * 0.9}), PreconditionError);
}

TEST_CASE("density channel updates agree with Kraus oracles") {
  std::mt19937_64 rng(2);
  const int n = 3;
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::MatrixXcd rho0 = random_density(n, rng);
    const int q = trial % n;
    const double gamma = std::uniform_real_distribution<double>(0, 1)(rng);
    const double lambda = std::uniform_real_distribution<double>(0, 1)(rng);
    const double p = std::uniform_real_distribution<double>(0, 1)(rng);

    DensityMatrix rho(n);
    rho.set_matrix(rho0);

    // relax = amplitude damping then phase damping.
    const double sg = std::sqrt(gamma);
    const std::vector<Eigen::Matrix2cd> ad{oracle::mat2(1, 0, 0, std::sqrt(1 - gamma)), oracle::mat2(0, sg, 0, 0)};
    const std::vector<Eigen::Matrix2cd> pd{oracle::M2::Identity() * std::sqrt(1 - lambda / 2),
                                           oracle::pauli_z() * std::sqrt(lambda / 2)};
    const oracle::MX expect_relax = apply_kraus_oracle(apply_kraus_oracle(rho0, ad, q, n), pd, q, n);
    DensityMatrix r1 = rho;
    r1.relax(q, gamma, lambda);
    CHECK((r1.matrix() - expect_relax).norm() < 1e-12);
    DensityMatrix r2 = rho;
    r2.apply_channel(q, KrausChannel::amplitude_damping(gamma));
    r2.apply_channel(q, KrausChannel::phase_damping(lambda));
    CHECK((r2.matrix() - expect_relax).norm() < 1e-12);

    // Single-qubit depolarizing as the Pauli twirl mixture.
    const std::vector<Eigen::Matrix2cd> dep{oracle::M2::Identity() * std::sqrt(1 - 3 * p / 4),
                                            oracle::pauli_x() * std::sqrt(p / 4), oracle::pauli_y() * std::sqrt(p / 4),
                                            oracle::pauli_z() * std::sqrt(p / 4)};
    DensityMatrix r3 = rho;
    r3.depolarize_1q(q, p);
    CHECK((r3.matrix() - apply_kraus_oracle(rho0, dep, q, n)).norm() < 1e-12);
    DensityMatrix r4 = rho;
    r4.apply_channel(q, KrausChannel::depolarizing(p));
    CHECK((r4.matrix() - r3.matrix()).norm() < 1e-12);

    // Two-qubit depolarizing as the 16-Pauli twirl.
    const int a = q, b = (q + 1) % n;
    const oracle::M2 paulis[] = {oracle::M2::Identity(), oracle::pauli_x(), oracle::pauli_y(), oracle::pauli_z()};
    oracle::MX twirl = oracle::MX::Zero(rho0.rows(), rho0.cols());
    for (const auto& pa : paulis)
      for (const auto& pb : paulis) {
        const oracle::MX e = oracle::embed(pa, a, n) * oracle::embed(pb, b, n);
        twirl += e * rho0 * e.adjoint();
      }
    twirl /= 16.0;
    DensityMatrix r5 = rho;
    r5.depolarize_2q(a, b, p);
    CHECK((r5.matrix() - ((1 - p) * rho0 + p * twirl)).norm() < 1e-12);

    // Unitaries.
    const Eigen::Matrix2cd u = haar_unitary(2, rng);
    DensityMatrix r6 = rho;
    r6.apply_1q(q, u);
    const oracle::MX eu = oracle::embed(u, q, n);
    CHECK((r6.matrix() - eu * rho0 * eu.adjoint()).norm() < 1e-12);
    DensityMatrix r7 = rho;
    r7.apply_cz(a, b);
    const oracle::MX ecz = oracle::cz(a, b, n);
    CHECK((r7.matrix() - ecz * rho0 * ecz).norm() < 1e-12);
  }
}

TEST_CASE("density matrices stay physical under random channel sequences") {
  std::mt19937_64 rng(3);
  DensityMatrix rho(3);
  std::uniform_real_distribution<double> u01(0, 1);
  for (int k = 0; k < 300; ++k) {
    const int q = std::uniform_int_distribution<int>(0, 2)(rng);
    switch (k % 5) {
      case 0: rho.apply_1q(q, haar_unitary(2, rng)); break;
      case 1: rho.relax(q, u01(rng), u01(rng)); break;
      case 2: rho.depolarize_1q(q, u01(rng)); break;
      case 3: rho.depolarize_2q(q, (q + 1) % 3, u01(rng)); break;
      default: rho.apply_cz(q, (q + 2) % 3);
    }
    CHECK(std::abs(rho.trace() - 1.0) < 1e-9);
    CHECK(rho.is_physical());
  }
}

TEST_CASE("Ramsey coherence decays as exp(-t/T2) and population as exp(-t/T1)") {
  QubitParams q;
  q.t1_us = 15.0;
  q.t2_us = 11.0;
  const DeviceModel d = single_qubit_device(q);
  for (double wait_ns : {0.0, 500.0, 4000.0, 20000.0}) {
    // Off-diagonal magnitude after X90 and an idle of wait_ns: 0.5 e^{-t/T2}
    // (the X90 pulse itself adds 20 ns).
    const double t_us = (wait_ns + 20.0) * 1e-3;
    const double gamma = 1 - std::exp(-t_us / q.t1_us);
    const double rate = 1 / q.t2_us - 1 / (2 * q.t1_us);
    const double lambda = 1 - std::exp(-t_us * rate);
    DensityMatrix rho(1);
    rho.apply_1q(0, oracle::rx(oracle::pi / 2));
    rho.relax(0, gamma, lambda);
    CHECK(std::abs(rho.matrix()(0, 1)) == doctest::Approx(0.5 * std::exp(-t_us / q.t2_us)).epsilon(1e-12));
  }
  (void)d;
}

TEST_CASE("noiseless device reproduces run_ideal") {
  std::mt19937_64 rng(4);
  Circuit c(3);
  for (int k = 0; k < 20; ++k) {
    const int q = std::uniform_int_distribution<int>(0, 2)(rng);
    c.append(Gate::x90(q)).append(Gate::rz(q, 0.7 * k)).append(Gate::cz(q, (q + 1) % 3));
  }
  c.append(Gate::measure_all());
  const ShotTable t = run_noisy(c, ideal_model(3), 16384, 5);
  CHECK(t.shots == 16384);
  CHECK(tvd(t, run_ideal(c)) < 0.02);
}

TEST_CASE("amplitude damping at one T1") {
  QubitParams q;
  q.t1_us = 10.0;
  q.t2_us = 20.0;
  Circuit c(1);
  // The X pulse contributes 20 ns; wait the remainder of T1.
  c.append(Gate::x(0)).append(Gate::wait(0, 10000.0 - 20.0)).append(Gate::measure_all());
  const ShotTable t = run_noisy(c, single_qubit_device(q), 4096, 7);
  CHECK(t.fraction_one(0) == doctest::Approx(std::exp(-1.0)).epsilon(0.02 / 0.3679));
}

TEST_CASE("amplitude damping chi-square at several waits") {
  QubitParams q;
  q.t1_us = 8.0;
  q.t2_us = 16.0;
  const DeviceModel d = single_qubit_device(q);
  double chi2 = 0;
  const double waits_ns[] = {0.0, 2000.0, 5000.0, 9000.0, 14000.0, 20000.0};
  for (double w : waits_ns) {
    Circuit c(1);
    c.append(Gate::x(0)).append(Gate::wait(0, w)).append(Gate::measure_all());
    const ShotTable t = run_noisy(c, d, 4096, static_cast<std::uint64_t>(w) + 1);
    const double p = std::exp(-(w + 20.0) * 1e-3 / q.t1_us);
    const double n1 = t.fraction_one(0) * 4096;
    chi2 += std::pow(n1 - 4096 * p, 2) / (4096 * p * (1 - p));
  }
  // 99.9% quantile of chi-square with 6 degrees of freedom.
  CHECK(chi2 < 22.46);
}

TEST_CASE("readout confusion") {
  QubitParams q;
  q.readout << 1.0, 0.0, 0.1, 0.9;
  Circuit c(1);
  c.append(Gate::x(0)).append(Gate::measure_all());
  const ShotTable t = run_noisy(c, single_qubit_device(q), 20000, 3);
  CHECK(t.probability("0") == doctest::Approx(0.1).epsilon(0.1));
}

TEST_CASE("correlated readout flips coupled pairs together") {
  DeviceModel d = ideal_model(2);
  d.readout_correlation = 0.05;
  Circuit c(2);
  c.append(Gate::measure_all());
  const ShotTable t = run_noisy(c, d, 20000, 1);
  CHECK(t.probability("11") == doctest::Approx(0.05).epsilon(0.15));
  CHECK(t.probability("01") == 0.0);
  CHECK(t.probability("10") == 0.0);
}

TEST_CASE("run_noisy is deterministic per seed and respects its preconditions") {
  const DeviceModel d = starmon5_reference_model();
  Circuit c(5);
  c.append(Gate::x90(0)).append(Gate::cz(0, 2)).append(Gate::x90(4)).append(Gate::measure_all());
  const ShotTable a = run_noisy(c, d, 2000, 42);
  const ShotTable b = run_noisy(c, d, 2000, 42);
  CHECK(a == b);
  CHECK(a.counts != run_noisy(c, d, 2000, 43).counts);
  a.validate();
  std::int64_t total = 0;
  for (const auto& [bits, n] : a.counts) {
    CHECK(bits.size() == 5);
    total += n;
  }
  CHECK(total == 2000);

  Circuit bad(5);
  bad.append(Gate::cz(0, 1));
  CHECK_THROWS_AS(run_noisy(bad, d, 10, 1), CapabilityError);
  CHECK_THROWS_AS(run_noisy(Circuit(6), d, 10, 1), CapabilityError);
  Circuit sym(1);
  sym.append(Gate::rz_param(0, 0));
  CHECK_THROWS_AS(run_noisy(sym, d, 10, 1), CapabilityError);

  DeviceModel broken = d;
  broken.qubits[0].t2_us = 2.5 * broken.qubits[0].t1_us;
  CHECK_THROWS_AS(run_noisy(c, broken, 10, 1), PreconditionError);
  broken = d;
  broken.qubits[1].readout(0, 0) = 0.5;
  CHECK_THROWS_AS(run_noisy(c, broken, 10, 1), PreconditionError);
  broken = d;
  broken.p2 = 1.0;
  CHECK_THROWS_AS(run_noisy(c, broken, 10, 1), PreconditionError);
}

TEST_CASE("reference model parameters") {
  const DeviceModel d = starmon5_reference_model();
  REQUIRE(d.n_qubits() == 5);
  CHECK(d.qubits[2].t1_us == 19.42);
  CHECK(1 - d.qubits[3].readout(1, 0) == doctest::Approx(0.984));
  CHECK(1 - (d.qubits[3].readout(0, 1) + d.qubits[3].readout(1, 0)) / 2 == doctest::Approx(0.984));
  for (const QubitParams& q : d.qubits) CHECK(q.t2_us <= 2 * q.t1_us);
  CHECK(d.connected(0, 2));
  CHECK(d.connected(4, 2));
  CHECK_FALSE(d.connected(0, 1));
  CHECK_NOTHROW(d.validate());
}

TEST_CASE("one reference pulse has the tabulated average gate fidelity") {
  // Average gate fidelity from the six Pauli eigenstates (a 2-design).
  const DeviceModel d = starmon5_reference_model();
  const double f1q[] = {0.99798, 0.99827, 0.99812, 0.99828, 0.99868};
  using oracle::cd;
  const std::vector<Eigen::Vector2cd> states = {
      Eigen::Vector2cd(1, 0), Eigen::Vector2cd(0, 1),
      Eigen::Vector2cd(1, 1) / std::sqrt(2.0), Eigen::Vector2cd(1, -1) / std::sqrt(2.0),
      Eigen::Vector2cd(1, cd(0, 1)) / std::sqrt(2.0), Eigen::Vector2cd(1, cd(0, -1)) / std::sqrt(2.0)};
  for (int q = 0; q < 5; ++q) {
    const QubitParams& p = d.qubits[static_cast<size_t>(q)];
    const double t = 20e-3;
    const double gamma = 1 - std::exp(-t / p.t1_us);
    const double lambda = 1 - std::exp(-t * (1 / p.t2_us - 1 / (2 * p.t1_us)));
    double f = 0;
    for (const auto& psi : states) {
      Eigen::Matrix2cd rho = psi * psi.adjoint();
      rho = (1 - p.p1) * rho + p.p1 * Eigen::Matrix2cd::Identity() / 2;
      DensityMatrix dm(1);
      dm.set_matrix(rho);
      dm.relax(0, gamma, lambda);
      f += (psi.adjoint() * dm.matrix() * psi)(0, 0).real();
    }
    CHECK(f / 6 == doctest::Approx(f1q[q]).epsilon(1e-7));
  }
}

TEST_CASE("drift snapshot scales T2 and clips at 2 T1") {
  DeviceModel d = starmon5_reference_model();
  d.drift.epochs = {{0.0, 1.0}, {100.0, 0.5}};
  const std::vector<double> jitter{0.1, 0.0, 0.0, 0.0, 10.0};
  const DeviceModel early = d.at(10.0, jitter);
  CHECK(early.qubits[0].t2_us == doctest::Approx(13.29 * 1.1));
  CHECK(early.qubits[4].t2_us == doctest::Approx(2 * 12.21));
  const DeviceModel late = d.at(150.0, {});
  CHECK(late.qubits[1].t2_us == doctest::Approx(24.68 * 0.5));
  CHECK(late.drift.empty());
}
