#include "doctest.h"

#include "qbench/error.hpp"
#include "qbench/fit.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace qbench;

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

DataSeries sample(FitModel m, const std::vector<double>& xs, const Eigen::VectorXd& p) {
  DataSeries d;
  d.x = xs;
  for (double x : xs) {
    double y = 0;
    // Written out directly rather than through the library's model helpers.
    switch (m) {
      case FitModel::Geometric: y = p(0) * std::pow(p(1), x) + p(2); break;
      case FitModel::ExpDecay: y = p(0) + p(1) * std::exp(-x / p(2)); break;
      case FitModel::DampedSinusoid: y = p(0) + p(1) * std::exp(-x / p(2)) * std::sin(p(3) * x + p(4)); break;
    }
    d.y.push_back(y);
  }
  return d;
}

DataSeries binomial(const DataSeries& exact, std::int64_t shots, std::mt19937_64& rng) {
  DataSeries d = exact;
  d.shots.assign(d.x.size(), shots);
  for (double& y : d.y) y = static_cast<double>(std::binomial_distribution<std::int64_t>(shots, y)(rng)) / shots;
  return d;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(a + (b - a) * i / (n - 1));
  return v;
}

void check_converged_gradient(const FitResult& f, const FitOptions& o = {}) {
  if (f.converged) CHECK((f.gradient_norm < o.gradient_tolerance || f.stationarity < kStationarityTolerance));
}

double max_rel_err(const Eigen::VectorXd& got, const Eigen::VectorXd& want) {
  double e = 0;
  for (Eigen::Index i = 0; i < got.size(); ++i)
    e = std::max(e, std::abs(got(i) - want(i)) / std::max(std::abs(want(i)), 1e-3));
  return e;
}

}  // namespace

TEST_CASE("exact geometric recovery") {
  const Eigen::Vector3d truth(0.45, 0.98, 0.05);
  const FitResult f = fit_geometric(sample(FitModel::Geometric, {1, 20, 40, 80, 120}, truth));
  CHECK(f.ok());
  CHECK((f.params - truth).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("exact exponential recovery") {
  const Eigen::Vector3d truth(0.0, 1.0, 15.45);
  const FitResult f = fit_exp_decay(sample(FitModel::ExpDecay, linspace(0, 60, 32), truth));
  CHECK(f.ok());
  CHECK((f.params - truth).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("exact damped sinusoid recovery") {
  Eigen::VectorXd truth(5);
  truth << 0.5, 0.45, 21.4, kTwoPi * 0.125, 0.3;
  const FitResult f = fit_damped_sinusoid(sample(FitModel::DampedSinusoid, linspace(0, 24, 32), truth), kTwoPi * 0.125);
  CHECK(f.ok());
  CHECK((f.params - truth).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("wrong frequency seed is corrected by the grid") {
  Eigen::VectorXd truth(5);
  truth << 0.5, 0.45, 21.4, kTwoPi * 0.125, -1.2;
  const DataSeries d = sample(FitModel::DampedSinusoid, linspace(0, 24, 32), truth);
  for (double factor : {0.6, 1.4}) {
    const FitResult f = fit_damped_sinusoid(d, factor * truth(3));
    CHECK(f.ok());
    CHECK(f.value("omega") == doctest::Approx(truth(3)).epsilon(1e-8));
  }
}

TEST_CASE("round trip from random interior parameters") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 100; ++trial) {
    const double alpha = 0.9 + 0.099 * u(rng);
    const double a = 0.2 + 0.3 * u(rng);
    const Eigen::Vector3d g(a, alpha, (1 - a) * u(rng));
    const FitResult fg = fit_geometric(sample(FitModel::Geometric, {1, 10, 20, 40, 80, 120, 160}, g));
    CHECK(max_rel_err(fg.params, g) < 1e-5);
    check_converged_gradient(fg);

    const double t = 5 + 30 * u(rng);
    const Eigen::Vector3d e(0.1 * u(rng), 0.5 + 0.4 * u(rng), t);
    const FitResult fe = fit_exp_decay(sample(FitModel::ExpDecay, linspace(0, 3 * t, 32), e));
    CHECK(max_rel_err(fe.params, e) < 1e-5);
    check_converged_gradient(fe);

    Eigen::VectorXd s(5);
    const double om = kTwoPi * (0.1 + 0.1 * u(rng));
    s << 0.4 + 0.2 * u(rng), 0.2 + 0.2 * u(rng), 10 + 30 * u(rng), om, -3 + 6 * u(rng);
    const FitResult fs = fit_damped_sinusoid(sample(FitModel::DampedSinusoid, linspace(0, 24, 32), s), om);
    CHECK(max_rel_err(fs.params, s) < 1e-5);
    check_converged_gradient(fs);
  }
}

TEST_CASE("analytic Jacobians match central differences") {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::VectorXd xs = Eigen::VectorXd::LinSpaced(12, 0.5, 30);
    Eigen::VectorXd p5(5);
    p5 << u(rng), 0.2 + u(rng), 5 + 20 * u(rng), 0.2 + u(rng), -2 + 4 * u(rng);
    const std::pair<FitModel, Eigen::VectorXd> cases[] = {
        {FitModel::Geometric, Eigen::Vector3d(0.2 + u(rng), 0.8 + 0.19 * u(rng), u(rng))},
        {FitModel::ExpDecay, Eigen::Vector3d(u(rng), 0.2 + u(rng), 3 + 20 * u(rng))},
        {FitModel::DampedSinusoid, p5},
    };
    for (const auto& [m, p] : cases) {
      const Eigen::MatrixXd j = model_jacobian(m, xs, p);
      for (Eigen::Index k = 0; k < p.size(); ++k) {
        const double h = 1e-6 * std::max(std::abs(p(k)), 1.0);
        Eigen::VectorXd hi = p, lo = p;
        hi(k) += h;
        lo(k) -= h;
        const Eigen::VectorXd fd = (model_values(m, xs, hi) - model_values(m, xs, lo)) / (2 * h);
        for (Eigen::Index i = 0; i < xs.size(); ++i)
          CHECK(std::abs(fd(i) - j(i, k)) <= 1e-6 * std::max(std::abs(j(i, k)), 1e-3));
      }
    }
  }
}

TEST_CASE("fits are invariant under rescaling x") {
  Eigen::VectorXd s(5);
  s << 0.5, 0.45, 21.4, kTwoPi * 0.125, 0.7;
  std::mt19937_64 rng(23);
  const DataSeries us = binomial(sample(FitModel::DampedSinusoid, linspace(0, 24, 32), s), 4096, rng);
  DataSeries ns = us;
  for (double& x : ns.x) x *= 1000;
  const FitResult a = fit_damped_sinusoid(us, s(3)), b = fit_damped_sinusoid(ns, s(3) / 1000);
  CHECK(b.value("T") / 1000 == doctest::Approx(a.value("T")).epsilon(1e-6));
  CHECK(b.value("omega") * 1000 == doctest::Approx(a.value("omega")).epsilon(1e-6));
  CHECK(b.value("B") == doctest::Approx(a.value("B")).epsilon(1e-6));
  CHECK(b.error("T") / 1000 == doctest::Approx(a.error("T")).epsilon(1e-4));

  const DataSeries e_us = binomial(sample(FitModel::ExpDecay, linspace(0, 60, 32), Eigen::Vector3d(0.03, 0.93, 19.42)), 4096, rng);
  DataSeries e_ns = e_us;
  for (double& x : e_ns.x) x *= 1000;
  CHECK(fit_exp_decay(e_ns).value("T") / 1000 == doctest::Approx(fit_exp_decay(e_us).value("T")).epsilon(1e-6));
}

TEST_CASE("degenerate and invalid inputs") {
  DataSeries flat;
  flat.x = {1, 20, 40, 80, 120};
  flat.y.assign(5, 0.5);
  const FitResult f = fit_geometric(flat);
  CHECK_FALSE(f.converged);
  CHECK_FALSE(f.identifiable);
  CHECK_FALSE(f.flag.empty());
  CHECK_FALSE(fit_exp_decay(flat).identifiable);

  DataSeries two;
  two.x = {0, 1};
  two.y = {1, 0.5};
  CHECK_THROWS_AS(fit_exp_decay(two), PreconditionError);
  CHECK_THROWS_AS(fit_geometric(two), PreconditionError);

  DataSeries unordered;
  unordered.x = {0, 2, 1, 3};
  unordered.y = {1, 0.5, 0.4, 0.3};
  CHECK_THROWS_AS(fit_exp_decay(unordered), PreconditionError);
  DataSeries out_of_range;
  out_of_range.x = {0, 1, 2, 3};
  out_of_range.y = {1.2, 0.5, 0.4, 0.3};
  CHECK_THROWS_AS(fit_exp_decay(out_of_range), PreconditionError);

  DataSeries short_sine;
  short_sine.x = linspace(0, 24, 32);
  short_sine.y.assign(32, 0.5);
  CHECK_THROWS_AS(fit_damped_sinusoid(short_sine, kTwoPi * 0.05), PreconditionError);
}

TEST_CASE("flat noisy data is flagged") {
  std::mt19937_64 rng(24);
  int flagged = 0;
  for (int trial = 0; trial < 50; ++trial) {
    DataSeries d = sample(FitModel::ExpDecay, linspace(0, 60, 32), Eigen::Vector3d(0.97, 0.0, 10.0));
    d = binomial(d, 4096, rng);
    flagged += !fit_exp_decay(d).identifiable;
  }
  CHECK(flagged >= 45);
}

TEST_CASE("pure noise has no identifiable oscillation") {
  std::mt19937_64 rng(25);
  std::uniform_real_distribution<double> u(0, 1);
  int flagged = 0;
  const int trials = 200;
  for (int trial = 0; trial < trials; ++trial) {
    DataSeries d;
    d.x = linspace(0, 24, 32);
    for (int i = 0; i < 32; ++i) d.y.push_back(u(rng));
    flagged += !fit_damped_sinusoid(d, kTwoPi * 0.125).identifiable;
  }
  MESSAGE("noise flag rate " << flagged << "/" << trials);
  CHECK(flagged > 0.9 * trials);
}

TEST_CASE("geometric coverage at 4096 shots") {
  std::mt19937_64 rng(26);
  const Eigen::Vector3d truth(0.45, 0.996, 0.05);
  const std::vector<double> lengths = linspace(1, 151, 16);
  int covered = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const FitResult f = fit_geometric(binomial(sample(FitModel::Geometric, lengths, truth), 4096, rng));
    covered += std::abs(f.value("alpha") - truth(1)) <= 3 * f.error("alpha");
    check_converged_gradient(f);
  }
  MESSAGE("alpha coverage " << covered << "/100");
  CHECK(covered >= 95);
}

TEST_CASE("weighted fits recover parameters too") {
  std::mt19937_64 rng(27);
  const Eigen::Vector3d truth(0.02, 0.95, 15.45);
  FitOptions o;
  o.inverse_variance_weights = true;
  int covered = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const FitResult f = fit_exp_decay(binomial(sample(FitModel::ExpDecay, linspace(0, 60, 32), truth), 4096, rng), o);
    covered += std::abs(f.value("T") - truth(2)) <= 3 * f.error("T");
  }
  CHECK(covered >= 95);
  DataSeries no_shots = sample(FitModel::ExpDecay, linspace(0, 60, 32), truth);
  CHECK_THROWS_AS(fit_exp_decay(no_shots, o), PreconditionError);
}
