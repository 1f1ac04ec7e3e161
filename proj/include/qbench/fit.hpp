#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qbench {

/// Measured curve: y is the fraction of |1> outcomes at each x.
struct DataSeries {
  std::vector<double> x;
  std::vector<double> y;
  /// Shots behind each y; empty when unknown.
  std::vector<std::int64_t> shots;

  /// Equal lengths >= min_points, x strictly increasing, y in [0, 1].
  void validate(std::size_t min_points = 4) const;
};

enum class FitModel {
  Geometric,       // A alpha^x + B
  ExpDecay,        // A + B exp(-x / T)
  DampedSinusoid,  // A + B exp(-x / T) sin(omega x + phi)
};

std::string_view to_string(FitModel m);
/// Parameter names in storage order.
std::span<const std::string_view> parameter_names(FitModel m);

template <typename Scalar>
Scalar geometric_model(Scalar x, Scalar a, Scalar alpha, Scalar b) {
  using std::pow;
  return a * pow(alpha, x) + b;
}

template <typename Scalar>
Scalar exp_decay_model(Scalar x, Scalar a, Scalar b, Scalar t) {
  using std::exp;
  return a + b * exp(-x / t);
}

template <typename Scalar>
Scalar damped_sinusoid_model(Scalar x, Scalar a, Scalar b, Scalar t, Scalar omega, Scalar phi) {
  using std::exp;
  using std::sin;
  return a + b * exp(-x / t) * sin(omega * x + phi);
}

/// Model curve and analytic Jacobian (rows: points, columns: parameters).
Eigen::VectorXd model_values(FitModel m, const Eigen::VectorXd& x, const Eigen::VectorXd& params);
Eigen::MatrixXd model_jacobian(FitModel m, const Eigen::VectorXd& x, const Eigen::VectorXd& params);

struct FitOptions {
  /// Weight each point by its binomial variance y(1-y)/shots.
  bool inverse_variance_weights = false;
  int max_iterations = 200;
  double step_tolerance = 1e-8;
  double gradient_tolerance = 1e-10;
};

struct FitResult {
  FitModel model = FitModel::Geometric;
  Eigen::VectorXd params;
  Eigen::VectorXd std_errors;
  double rss = 0.0;
  bool converged = false;
  int iterations = 0;
  /// Infinity norm of the projected gradient of rss / 2 at the solution.
  double gradient_norm = 0.0;
  double stationarity = 0.0;
  bool identifiable = false;
  /// Empty when identifiable; otherwise why the fit cannot be trusted.
  std::string flag;

  bool ok() const { return converged && identifiable; }
  double value(std::string_view name) const;
  double error(std::string_view name) const;
};

/// Box-constrained nonlinear least squares: minimize |r(p)|^2 / 2 with
/// lower <= p <= upper.
struct LeastSquaresProblem {
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> residuals;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> jacobian;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

/// Cosine bound below which a step-size stop is accepted as converged.
inline constexpr double kStationarityTolerance = 1e-4;

struct SolverReport {
  Eigen::VectorXd params;
  double rss = 0.0;
  int iterations = 0;
  /// Projected gradient below tolerance, or a vanishing step at a point
  /// whose stationarity is below kStationarityTolerance.
  bool converged = false;
  double gradient_norm = 0.0;
  /// Largest cosine between the residual vector and a free Jacobian column.
  double stationarity = 0.0;
};

/// Damped Gauss-Newton with Marquardt diagonal scaling; bounds are enforced
/// by projecting every trial point.
SolverReport levenberg_marquardt(const LeastSquaresProblem& problem, Eigen::VectorXd start,
                                 const FitOptions& opts = {});

FitResult fit_geometric(const DataSeries& d, const FitOptions& opts = {});
FitResult fit_exp_decay(const DataSeries& d, const FitOptions& opts = {});
/// `omega_seed` is the expected angular frequency in radians per x unit; the
/// start point comes from a grid over [0.25, 4] times the seed.
FitResult fit_damped_sinusoid(const DataSeries& d, double omega_seed, const FitOptions& opts = {});

}  // namespace qbench
