#include "qbench/error.hpp"
#include "qbench/fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace qbench {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr std::array<std::string_view, 3> kGeometricNames{"A", "alpha", "B"};
constexpr std::array<std::string_view, 3> kExpNames{"A", "B", "T"};
constexpr std::array<std::string_view, 5> kSinusoidNames{"A", "B", "T", "omega", "phi"};

// Significance required of a fitted amplitude, in standard errors.
constexpr double kDecayAmplitudeSigmas = 3.0;
constexpr double kOscillationAmplitudeSigmas = 4.0;

Eigen::VectorXd as_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// Per-point residual scale: 1, or the binomial standard deviation.
Eigen::VectorXd point_weights(const DataSeries& d, const FitOptions& opts) {
  const auto n = static_cast<Eigen::Index>(d.x.size());
  Eigen::VectorXd w = Eigen::VectorXd::Ones(n);
  if (!opts.inverse_variance_weights) return w;
  if (d.shots.size() != d.x.size()) throw PreconditionError("weighted fit needs shots for every point");
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = static_cast<double>(d.shots[static_cast<size_t>(i)]);
    if (!(s > 0)) throw PreconditionError("shots must be positive");
    const double p = (d.y[static_cast<size_t>(i)] * s + 0.5) / (s + 1.0);
    w(i) = 1.0 / std::sqrt(p * (1.0 - p) / s);
  }
  return w;
}

// Linear least squares of y on the columns of `basis`; returns the
// coefficients and writes the residual sum of squares.
Eigen::VectorXd linear_fit(const Eigen::MatrixXd& basis, const Eigen::VectorXd& y, const Eigen::VectorXd& w,
                           double& rss) {
  const Eigen::MatrixXd a = w.asDiagonal() * basis;
  const Eigen::VectorXd b = w.asDiagonal() * y;
  const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
  rss = (a * c - b).squaredNorm();
  if (!std::isfinite(rss)) rss = kInf;
  return c;
}

Eigen::VectorXd log_grid(double lo, double hi, int n) {
  Eigen::VectorXd g(n);
  for (int i = 0; i < n; ++i) g(i) = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return g;
}

struct Candidate {
  double rss;
  Eigen::VectorXd params;
};

// Keep the `keep` best candidates.
void keep_best(std::vector<Candidate>& c, size_t keep) {
  std::sort(c.begin(), c.end(), [](const Candidate& a, const Candidate& b) { return a.rss < b.rss; });
  if (c.size() > keep) c.resize(keep);
}

// Log-linear estimate of a decay rate from |y - y_last|.
double log_linear_rate(const DataSeries& d) {
  const double tail = d.y.back();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (size_t i = 0; i + 1 < d.x.size(); ++i) {
    const double v = std::abs(d.y[i] - tail);
    if (v <= 1e-9) continue;
    const double ly = std::log(v);
    sx += d.x[i];
    sy += ly;
    sxx += d.x[i] * d.x[i];
    sxy += d.x[i] * ly;
    ++n;
  }
  if (n < 2) return std::nan("");
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return -slope;
}

struct Solved {
  SolverReport report;
  Eigen::VectorXd std_errors;
  bool singular = false;
};

Solved solve(FitModel m, const DataSeries& d, const std::vector<Candidate>& starts, const Eigen::VectorXd& lower,
             const Eigen::VectorXd& upper, const FitOptions& opts) {
  const Eigen::VectorXd x = as_vector(d.x), y = as_vector(d.y);
  const Eigen::VectorXd w = point_weights(d, opts);
  LeastSquaresProblem prob;
  prob.residuals = [&](const Eigen::VectorXd& p) -> Eigen::VectorXd {
    return w.cwiseProduct(model_values(m, x, p) - y);
  };
  prob.jacobian = [&](const Eigen::VectorXd& p) -> Eigen::MatrixXd {
    return w.asDiagonal() * model_jacobian(m, x, p);
  };
  prob.lower = lower;
  prob.upper = upper;

  Solved best;
  best.report.rss = kInf;
  for (const Candidate& c : starts) {
    if (!c.params.allFinite()) continue;
    SolverReport r = levenberg_marquardt(prob, c.params, opts);
    if (r.rss < best.report.rss || (!best.report.converged && r.converged && r.rss <= best.report.rss * (1 + 1e-9)))
      best.report = r;
  }
  if (!std::isfinite(best.report.rss)) throw Error("no usable start point for the fit");

  // Covariance (J^T J)^-1 scaled by the residual variance.
  const Eigen::MatrixXd j = prob.jacobian(best.report.params);
  const auto n = j.rows(), k = j.cols();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(j, Eigen::ComputeThinV);
  const Eigen::VectorXd s = svd.singularValues();
  best.std_errors = Eigen::VectorXd::Constant(k, kInf);
  if (s.size() == k && s(k - 1) > 1e-12 * s(0) && n > k) {
    const double sigma2 = best.report.rss / static_cast<double>(n - k);
    const Eigen::MatrixXd v = svd.matrixV();
    const Eigen::MatrixXd cov = v * s.cwiseInverse().cwiseAbs2().asDiagonal() * v.transpose() * sigma2;
    best.std_errors = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
  } else {
    best.singular = true;
  }
  return best;
}

FitResult finish(FitModel m, const Solved& s) {
  FitResult f;
  f.model = m;
  f.params = s.report.params;
  f.std_errors = s.std_errors;
  f.rss = s.report.rss;
  f.converged = s.report.converged;
  f.iterations = s.report.iterations;
  f.gradient_norm = s.report.gradient_norm;
  f.stationarity = s.report.stationarity;
  f.identifiable = true;
  if (s.singular || !f.std_errors.allFinite()) f.flag = "parameters are not individually determined";
  return f;
}

void flag_if(FitResult& f, bool cond, const char* why) {
  if (cond && f.flag.empty()) f.flag = why;
}

FitResult degenerate(FitModel m, const DataSeries& d) {
  FitResult f;
  f.model = m;
  const auto k = static_cast<Eigen::Index>(parameter_names(m).size());
  f.params = Eigen::VectorXd::Constant(k, std::nan(""));
  f.std_errors = Eigen::VectorXd::Constant(k, kInf);
  f.rss = 0.0;
  f.converged = false;
  f.identifiable = false;
  f.flag = "constant data: decay parameters unidentifiable";
  (void)d;
  return f;
}

bool is_constant(const DataSeries& d) {
  const auto [lo, hi] = std::minmax_element(d.y.begin(), d.y.end());
  return *hi - *lo < 1e-12;
}

}  // namespace

void DataSeries::validate(std::size_t min_points) const {
  if (x.size() != y.size()) throw PreconditionError("x and y lengths differ");
  if (!shots.empty() && shots.size() != x.size()) throw PreconditionError("shots length differs from x");
  if (x.size() < min_points)
    throw PreconditionError("need at least " + std::to_string(min_points) + " points, got " +
                            std::to_string(x.size()));
  for (size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) throw PreconditionError("x must be finite");
    if (i > 0 && !(x[i] > x[i - 1])) throw PreconditionError("x must be strictly increasing");
    if (!(y[i] >= 0.0 && y[i] <= 1.0)) throw PreconditionError("y must lie in [0, 1]");
  }
}

std::string_view to_string(FitModel m) {
  switch (m) {
    case FitModel::Geometric: return "geometric";
    case FitModel::ExpDecay: return "exp_decay";
    case FitModel::DampedSinusoid: return "damped_sinusoid";
  }
  return "?";
}

std::span<const std::string_view> parameter_names(FitModel m) {
  switch (m) {
    case FitModel::Geometric: return kGeometricNames;
    case FitModel::ExpDecay: return kExpNames;
    case FitModel::DampedSinusoid: return kSinusoidNames;
  }
  return {};
}

double FitResult::value(std::string_view name) const {
  const auto names = parameter_names(model);
  for (size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return params(static_cast<Eigen::Index>(i));
  throw PreconditionError("no parameter '" + std::string(name) + "' in " + std::string(to_string(model)));
}

double FitResult::error(std::string_view name) const {
  const auto names = parameter_names(model);
  for (size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return std_errors(static_cast<Eigen::Index>(i));
  throw PreconditionError("no parameter '" + std::string(name) + "' in " + std::string(to_string(model)));
}

Eigen::VectorXd model_values(FitModel m, const Eigen::VectorXd& x, const Eigen::VectorXd& p) {
  Eigen::VectorXd out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    switch (m) {
      case FitModel::Geometric: out(i) = geometric_model(x(i), p(0), p(1), p(2)); break;
      case FitModel::ExpDecay: out(i) = exp_decay_model(x(i), p(0), p(1), p(2)); break;
      case FitModel::DampedSinusoid: out(i) = damped_sinusoid_model(x(i), p(0), p(1), p(2), p(3), p(4)); break;
    }
  }
  return out;
}

Eigen::MatrixXd model_jacobian(FitModel m, const Eigen::VectorXd& x, const Eigen::VectorXd& p) {
  Eigen::MatrixXd j(x.size(), static_cast<Eigen::Index>(parameter_names(m).size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double t = x(i);
    switch (m) {
      case FitModel::Geometric: {
        const double pw = std::pow(p(1), t);
        j.row(i) << pw, t == 0.0 ? 0.0 : p(0) * t * std::pow(p(1), t - 1.0), 1.0;
        break;
      }
      case FitModel::ExpDecay: {
        const double e = std::exp(-t / p(2));
        j.row(i) << 1.0, e, p(1) * e * t / (p(2) * p(2));
        break;
      }
      case FitModel::DampedSinusoid: {
        const double e = std::exp(-t / p(2));
        const double s = std::sin(p(3) * t + p(4)), c = std::cos(p(3) * t + p(4));
        j.row(i) << 1.0, e * s, p(1) * e * s * t / (p(2) * p(2)), p(1) * e * c * t, p(1) * e * c;
        break;
      }
    }
  }
  return j;
}

FitResult fit_geometric(const DataSeries& d, const FitOptions& opts) {
  d.validate();
  if (is_constant(d)) return degenerate(FitModel::Geometric, d);
  const Eigen::VectorXd x = as_vector(d.x), y = as_vector(d.y), w = point_weights(d, opts);
  const double xmax = std::max(std::abs(d.x.back()), 1e-12);

  std::vector<Candidate> starts;
  for (double rate : log_grid(1e-3 / xmax, 20.0 / xmax, 80)) {
    const double alpha = std::exp(-rate);
    Eigen::MatrixXd basis(x.size(), 2);
    basis.col(0) = x.unaryExpr([&](double t) { return std::pow(alpha, t); });
    basis.col(1).setOnes();
    double rss = 0;
    const Eigen::VectorXd c = linear_fit(basis, y, w, rss);
    starts.push_back({rss, Eigen::Vector3d(c(0), alpha, c(1))});
  }
  keep_best(starts, 3);
  const double rate = log_linear_rate(d);
  if (std::isfinite(rate) && rate > 0)
    starts.push_back({kInf, Eigen::Vector3d(d.y.front() - d.y.back(), std::exp(-rate), d.y.back())});

  const Eigen::Vector3d lower(-kInf, 1e-12, -kInf), upper(kInf, 1.0, kInf);
  FitResult f = finish(FitModel::Geometric, solve(FitModel::Geometric, d, starts, lower, upper, opts));
  const double a = f.value("A"), alpha = f.value("alpha");
  flag_if(f, std::abs(a) <= kDecayAmplitudeSigmas * f.error("A"), "decay amplitude is not significant");
  flag_if(f, f.error("alpha") >= 1.0 - alpha, "decay rate is not resolved");
  f.identifiable = f.flag.empty();
  return f;
}

FitResult fit_exp_decay(const DataSeries& d, const FitOptions& opts) {
  d.validate();
  if (is_constant(d)) return degenerate(FitModel::ExpDecay, d);
  const Eigen::VectorXd x = as_vector(d.x), y = as_vector(d.y), w = point_weights(d, opts);
  const double span = d.x.back() - d.x.front();
  if (!(span > 0)) throw PreconditionError("x span must be positive");

  std::vector<Candidate> starts;
  for (double t : log_grid(span / 200.0, 200.0 * span, 80)) {
    Eigen::MatrixXd basis(x.size(), 2);
    basis.col(0).setOnes();
    basis.col(1) = x.unaryExpr([&](double v) { return std::exp(-v / t); });
    double rss = 0;
    const Eigen::VectorXd c = linear_fit(basis, y, w, rss);
    starts.push_back({rss, Eigen::Vector3d(c(0), c(1), t)});
  }
  keep_best(starts, 3);
  const double rate = log_linear_rate(d);
  if (std::isfinite(rate) && rate > 0)
    starts.push_back({kInf, Eigen::Vector3d(d.y.back(), d.y.front() - d.y.back(), 1.0 / rate)});

  const Eigen::Vector3d lower(-kInf, -kInf, 1e-9 * span), upper(kInf, kInf, kInf);
  FitResult f = finish(FitModel::ExpDecay, solve(FitModel::ExpDecay, d, starts, lower, upper, opts));
  const double b = f.value("B"), t = f.value("T");
  flag_if(f, std::abs(b) <= kDecayAmplitudeSigmas * f.error("B"), "decay amplitude is not significant");
  flag_if(f, f.error("T") >= t, "decay time is not resolved");
  flag_if(f, t > 10.0 * span, "decay is too slow for the sampled window");
  f.identifiable = f.flag.empty();
  return f;
}

FitResult fit_damped_sinusoid(const DataSeries& d, double omega_seed, const FitOptions& opts) {
  d.validate(8);
  const double span = d.x.back() - d.x.front();
  if (!(omega_seed > 0) || !std::isfinite(omega_seed)) throw PreconditionError("omega seed must be positive");
  if (omega_seed * span < 1.5 * kTwoPi)
    throw PreconditionError("data must span at least 1.5 periods of the seeded frequency");
  if (is_constant(d)) return degenerate(FitModel::DampedSinusoid, d);
  const Eigen::VectorXd x = as_vector(d.x), y = as_vector(d.y), w = point_weights(d, opts);

  std::vector<Candidate> starts;
  const Eigen::VectorXd omegas = log_grid(0.25 * omega_seed, 4.0 * omega_seed, 160);
  const Eigen::VectorXd times = log_grid(span / 10.0, 30.0 * span, 12);
  for (double om : omegas) {
    Candidate best{kInf, {}};
    for (double t : times) {
      Eigen::MatrixXd basis(x.size(), 3);
      basis.col(0).setOnes();
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double e = std::exp(-x(i) / t);
        basis(i, 1) = e * std::sin(om * x(i));
        basis(i, 2) = e * std::cos(om * x(i));
      }
      double rss = 0;
      const Eigen::VectorXd c = linear_fit(basis, y, w, rss);
      if (rss < best.rss) {
        Eigen::VectorXd p(5);
        p << c(0), std::hypot(c(1), c(2)), t, om, std::atan2(c(2), c(1));
        best = {rss, p};
      }
    }
    starts.push_back(best);
  }
  keep_best(starts, 5);

  Eigen::VectorXd lower(5), upper(5);
  lower << -kInf, 0.0, 1e-9 * span, 1e-9 * omega_seed, -kInf;
  upper << kInf, kInf, kInf, kInf, kInf;
  FitResult f = finish(FitModel::DampedSinusoid, solve(FitModel::DampedSinusoid, d, starts, lower, upper, opts));
  f.params(4) = std::remainder(f.params(4), kTwoPi);
  const double b = f.value("B"), t = f.value("T"), om = f.value("omega");
  flag_if(f, b <= kOscillationAmplitudeSigmas * f.error("B"), "no significant oscillation");
  flag_if(f, om * span < kTwoPi, "less than one oscillation period in the window");
  flag_if(f, f.error("omega") >= 0.5 * om, "oscillation frequency is not resolved");
  flag_if(f, f.error("T") >= t, "decay time is not resolved");
  flag_if(f, t > 10.0 * span, "decay is too slow for the sampled window");
  f.identifiable = f.flag.empty();
  return f;
}

}  // namespace qbench
