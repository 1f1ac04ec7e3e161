#include "qbench/qscore.hpp"

#include <chrono>
#include <cmath>

namespace qbench {

QScoreResult run_qscore(Backend& backend, const QScoreConfig& cfg) {
  if (cfg.sizes.empty()) throw PreconditionError("Q-score needs at least one size");
  for (size_t i = 1; i < cfg.sizes.size(); ++i)
    if (cfg.sizes[i] <= cfg.sizes[i - 1]) throw PreconditionError("Q-score sizes must be ascending");
  if (cfg.graphs_per_size < 1) throw PreconditionError("Q-score needs at least one graph per size");
  if (!(cfg.time_limit_s > 0)) throw PreconditionError("time limit must be positive");

  QScoreResult out;
  bool consecutive = true;
  for (int n : cfg.sizes) {
    QScoreSize s;
    s.n = n;
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };
    const double share = cfg.time_limit_s / cfg.graphs_per_size;
    int done = 0;
    for (int k = 0; k < cfg.graphs_per_size; ++k) {
      const std::uint64_t gseed = circuit_seed(circuit_seed(cfg.seed, static_cast<size_t>(n)), static_cast<size_t>(k));
      const Graph g = gen_erdos_renyi(n, 0.5, gseed);
      QAOAConfig qc;
      qc.p = cfg.p;
      qc.shots = cfg.shots;
      qc.seed = circuit_seed(gseed, 1);
      // Equal shares, capped by what is left of the whole batch.
      qc.time_budget_s = std::min(share, cfg.time_limit_s - elapsed());
      double cut = 0.0;
      try {
        cut = qaoa_maxcut(g, backend, qc).final_expected_cut;
        ++done;
      } catch (const BudgetExhaustedError&) {
        cut = g.edges.size() / 2.0;
        s.flag = "budget exhausted on some graphs";
      }
      s.mean_cut += cut;
      s.mean_random += g.edges.size() / 2.0;
      s.mean_optimum += maxcut_brute(g).value;
    }
    s.mean_cut /= cfg.graphs_per_size;
    s.mean_random /= cfg.graphs_per_size;
    s.mean_optimum /= cfg.graphs_per_size;
    s.wall_time_s = elapsed();
    s.within_time = s.wall_time_s <= cfg.time_limit_s && done == cfg.graphs_per_size;
    const double span = s.mean_optimum - s.mean_random;
    if (span > 0) {
      s.beta = (s.mean_cut - s.mean_random) / span;
    } else {
      s.beta = std::nan("");
      s.flag = "optimum equals the random baseline";
    }
    s.pass = s.within_time && s.beta > cfg.beta_threshold;
    consecutive = consecutive && s.pass;
    if (consecutive) out.qscore = n;
    out.sizes.push_back(s);
  }
  if (!out.sizes.front().pass) {
    out.qscore = 1;
    out.flag = "no size passed";
  }
  return out;
}

}  // namespace qbench
