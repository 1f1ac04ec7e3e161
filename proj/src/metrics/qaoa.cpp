#include "qbench/qscore.hpp"

#include "qbench/routing.hpp"
#include "qbench/synthesis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>

namespace qbench {
namespace {

using Point = std::vector<double>;

double diameter(const std::vector<Point>& simplex) {
  double d = 0.0;
  for (size_t i = 1; i < simplex.size(); ++i)
    for (size_t k = 0; k < simplex[0].size(); ++k) d = std::max(d, std::abs(simplex[i][k] - simplex[0][k]));
  return d;
}

Point affine(const Point& a, const Point& b, double t) {
  Point out(a.size());
  for (size_t k = 0; k < a.size(); ++k) out[k] = a[k] + t * (b[k] - a[k]);
  return out;
}

// Stop signal from inside the objective.
struct OutOfBudget {};

}  // namespace

Circuit qaoa_circuit(const Graph& g, std::span<const double> gammas, std::span<const double> betas) {
  g.validate();
  if (gammas.size() != betas.size() || gammas.empty())
    throw PreconditionError("QAOA needs p >= 1 matching gamma and beta values");
  Circuit c(g.n, "qaoa_n" + std::to_string(g.n));
  for (int q = 0; q < g.n; ++q) c.append(hadamard(q));
  for (size_t layer = 0; layer < gammas.size(); ++layer) {
    // exp(-i gamma C) with C = sum (1 - Z_a Z_b) / 2, up to global phase.
    for (auto [a, b] : g.edges) c.append(rzz(a, b, -gammas[layer]));
    for (int q = 0; q < g.n; ++q) c.append(rx(q, 2.0 * betas[layer]));
  }
  c.append(Gate::measure_all());
  return c;
}

double expected_cut(const Graph& g, const ShotTable& t) {
  if (t.shots <= 0) throw PreconditionError("empty shot table");
  double sum = 0.0;
  for (const auto& [bits, count] : t.counts) sum += static_cast<double>(cut_value(g, bits) * count);
  return sum / static_cast<double>(t.shots);
}

std::vector<double> nelder_mead_maximize(const std::function<double(std::span<const double>)>& f, Point start,
                                         const NelderMeadOptions& opts, const std::function<bool()>& keep_going) {
  const size_t n = start.size();
  if (n == 0) throw PreconditionError("nothing to optimize");
  int evals = 0;
  Point best = start;
  double best_f = -INFINITY;
  auto eval = [&](const Point& x) {
    if (evals >= opts.max_evaluations || !keep_going()) throw OutOfBudget{};
    ++evals;
    const double v = f(x);
    if (v > best_f) {
      best_f = v;
      best = x;
    }
    return v;
  };

  try {
    for (int restart = 0; restart <= opts.max_restarts; ++restart) {
      std::vector<Point> simplex{best};
      for (size_t k = 0; k < n; ++k) {
        Point v = best;
        v[k] += opts.initial_step;
        simplex.push_back(v);
      }
      std::vector<double> fv;
      for (const Point& v : simplex) fv.push_back(eval(v));

      while (diameter(simplex) >= opts.x_tolerance) {
        std::vector<size_t> order(simplex.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return fv[a] > fv[b]; });
        std::vector<Point> s2;
        std::vector<double> f2;
        for (size_t i : order) {
          s2.push_back(simplex[i]);
          f2.push_back(fv[i]);
        }
        simplex = std::move(s2);
        fv = std::move(f2);

        Point centroid(n, 0.0);
        for (size_t i = 0; i < n; ++i)
          for (size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k] / static_cast<double>(n);
        const Point& worst = simplex[n];
        const Point xr = affine(centroid, worst, -1.0);
        const double fr = eval(xr);
        if (fr > fv[0]) {
          const Point xe = affine(centroid, worst, -2.0);
          const double fe = eval(xe);
          simplex[n] = fe > fr ? xe : xr;
          fv[n] = std::max(fe, fr);
        } else if (fr > fv[n - 1]) {
          simplex[n] = xr;
          fv[n] = fr;
        } else {
          const Point xc = fr > fv[n] ? affine(centroid, xr, 0.5) : affine(centroid, worst, 0.5);
          const double fc = eval(xc);
          if (fc > std::max(fr, fv[n])) {
            simplex[n] = xc;
            fv[n] = fc;
          } else {
            for (size_t i = 1; i <= n; ++i) {
              simplex[i] = affine(simplex[0], simplex[i], 0.5);
              fv[i] = eval(simplex[i]);
            }
          }
        }
      }
    }
  } catch (const OutOfBudget&) {
  }
  return best;
}

QAOAResult qaoa_maxcut(const Graph& g, Backend& backend, const QAOAConfig& cfg) {
  g.validate();
  const Capabilities caps = backend.capabilities();
  if (g.n > caps.n_qubits) throw CapabilityError("graph larger than the backend");
  if (cfg.p < 1 || cfg.shots < 1) throw PreconditionError("QAOA needs p >= 1 and shots >= 1");
  const Topology topo = caps.topology();
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };

  QAOAResult out;
  out.best_expected_cut = -INFINITY;
  std::uint64_t job = 0;
  auto sample = [&](std::span<const double> x) {
    const auto p = static_cast<size_t>(cfg.p);
    const Circuit logical = qaoa_circuit(g, x.subspan(0, p), x.subspan(p, p));
    const MappedCircuit mc = map_to_device(logical, topo);
    const std::vector<Circuit> batch{pack_layers(merge_single_qubit_gates(mc.circuit))};
    const ShotTable physical = submit_and_wait(backend, batch, cfg.shots, circuit_seed(cfg.seed, job++))[0];
    return remap_to_logical(physical, mc.final_layout);
  };
  auto objective = [&](std::span<const double> x) {
    const ShotTable t = sample(x);
    for (const auto& [bits, count] : t.counts) {
      const int c = cut_value(g, bits);
      if (c > out.best_cut || out.best_bitstring.empty()) {
        out.best_cut = c;
        out.best_bitstring = bits;
      }
    }
    ++out.evaluations;
    out.best_cut_history.push_back(out.best_cut);
    const double e = expected_cut(g, t);
    if (e > out.best_expected_cut) {
      out.best_expected_cut = e;
      out.best_params.assign(x.begin(), x.end());
    }
    return e;
  };

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Point start;
  for (int i = 0; i < cfg.p; ++i) start.push_back(0.2 + u(rng) * std::numbers::pi / 2);
  for (int i = 0; i < cfg.p; ++i) start.push_back(0.1 + u(rng) * std::numbers::pi / 4);
  nelder_mead_maximize(objective, start, cfg.optimizer, [&] { return elapsed() < cfg.time_budget_s; });
  if (out.evaluations == 0)
    throw BudgetExhaustedError("time budget exhausted before the first QAOA evaluation", elapsed());
  out.final_expected_cut = expected_cut(g, sample(out.best_params));
  out.wall_time_s = elapsed();
  return out;
}

}  // namespace qbench
