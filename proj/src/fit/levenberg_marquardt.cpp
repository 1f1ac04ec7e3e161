#include "qbench/error.hpp"
#include "qbench/fit.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace qbench {
namespace {

Eigen::VectorXd project(const Eigen::VectorXd& p, const LeastSquaresProblem& prob) {
  return p.cwiseMax(prob.lower).cwiseMin(prob.upper);
}

// Gradient components that point out of an active bound cannot be reduced
// and are dropped.
double projected_gradient_norm(const Eigen::VectorXd& g, const Eigen::VectorXd& p,
                               const LeastSquaresProblem& prob) {
  double norm = 0.0;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (p(i) <= prob.lower(i) && g(i) > 0) continue;
    if (p(i) >= prob.upper(i) && g(i) < 0) continue;
    norm = std::max(norm, std::abs(g(i)));
  }
  return norm;
}

// Largest cosine between the residual and a free Jacobian column; zero at a
// stationary point regardless of parameter units.
double stationarity(const Eigen::MatrixXd& j, const Eigen::VectorXd& r, const Eigen::VectorXd& g,
                    const Eigen::VectorXd& p, const LeastSquaresProblem& prob) {
  const double rn = r.norm();
  if (rn == 0.0) return 0.0;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (p(i) <= prob.lower(i) && g(i) > 0) continue;
    if (p(i) >= prob.upper(i) && g(i) < 0) continue;
    const double cn = j.col(i).norm();
    if (cn > 0.0) worst = std::max(worst, std::abs(g(i)) / (cn * rn));
  }
  return worst;
}

}  // namespace

SolverReport levenberg_marquardt(const LeastSquaresProblem& prob, Eigen::VectorXd start,
                                 const FitOptions& opts) {
  const Eigen::Index n = start.size();
  if (prob.lower.size() != n || prob.upper.size() != n)
    throw PreconditionError("bounds do not match the parameter count");

  SolverReport rep;
  Eigen::VectorXd p = project(start, prob);
  Eigen::VectorXd r = prob.residuals(p);
  Eigen::MatrixXd j = prob.jacobian(p);
  double cost = r.squaredNorm();
  if (!std::isfinite(cost)) throw PreconditionError("residuals are not finite at the start point");

  Eigen::MatrixXd jtj = j.transpose() * j;
  Eigen::VectorXd g = j.transpose() * r;
  double lambda = 1e-3;

  for (rep.iterations = 0; rep.iterations < opts.max_iterations; ++rep.iterations) {
    rep.gradient_norm = projected_gradient_norm(g, p, prob);
    if (rep.gradient_norm < opts.gradient_tolerance) {
      rep.converged = true;
      break;
    }

    // Variables held at a bound by the gradient stay fixed for this step.
    std::vector<Eigen::Index> free;
    for (Eigen::Index i = 0; i < n; ++i) {
      const bool held = (p(i) <= prob.lower(i) && g(i) > 0) || (p(i) >= prob.upper(i) && g(i) < 0);
      if (!held) free.push_back(i);
    }
    const auto m = static_cast<Eigen::Index>(free.size());
    Eigen::MatrixXd a(m, m);
    Eigen::VectorXd rhs(m);
    for (Eigen::Index r = 0; r < m; ++r) {
      rhs(r) = g(free[static_cast<size_t>(r)]);
      for (Eigen::Index c = 0; c < m; ++c) a(r, c) = jtj(free[static_cast<size_t>(r)], free[static_cast<size_t>(c)]);
    }
    const double floor = 1e-12 * a.diagonal().maxCoeff() + 1e-300;
    a.diagonal() += lambda * a.diagonal().cwiseMax(floor);
    const Eigen::VectorXd delta = a.ldlt().solve(rhs);
    Eigen::VectorXd full = Eigen::VectorXd::Zero(n);
    for (Eigen::Index r = 0; r < m; ++r) full(free[static_cast<size_t>(r)]) = -delta(r);
    const Eigen::VectorXd trial = project(p + full, prob);
    const Eigen::VectorXd step = trial - p;

    if ((step.array().abs() <= opts.step_tolerance * (p.array().abs() + opts.step_tolerance)).all()) {
      // A vanishing step only counts as convergence at a stationary point;
      // otherwise the damping has stalled in a flat valley.
      rep.stationarity = stationarity(j, r, g, p, prob);
      if (rep.stationarity < kStationarityTolerance) {
        rep.converged = true;
        break;
      }
      lambda /= 10.0;
      if (lambda < 1e-15) break;
      continue;
    }

    const Eigen::VectorXd r_new = prob.residuals(trial);
    const double cost_new = r_new.squaredNorm();
    if (std::isfinite(cost_new) && cost_new < cost) {
      p = trial;
      r = r_new;
      cost = cost_new;
      j = prob.jacobian(p);
      jtj = j.transpose() * j;
      g = j.transpose() * r;
      lambda = std::max(lambda / 5.0, 1e-15);
    } else {
      lambda *= 4.0;
      if (lambda > 1e20) break;
    }
  }
  rep.gradient_norm = projected_gradient_norm(g, p, prob);
  rep.stationarity = stationarity(j, r, g, p, prob);
  rep.params = p;
  rep.rss = cost;
  return rep;
}

}  // namespace qbench
