#pragma once

#include "qbench/backend.hpp"
#include "qbench/error.hpp"
#include "qbench/graph.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace qbench {

/// Depth-p QAOA state for max-cut, measured. `gammas` drive the cost layers,
/// `betas` the RX(2 beta) mixers.
Circuit qaoa_circuit(const Graph& g, std::span<const double> gammas, std::span<const double> betas);

/// Mean cut over the sampled bitstrings.
double expected_cut(const Graph& g, const ShotTable& t);

struct NelderMeadOptions {
  int max_evaluations = 120;
  double initial_step = 0.4;
  /// Stop once the simplex diameter falls below this.
  double x_tolerance = 1e-3;
  int max_restarts = 2;
};

/// Maximize `f` from `start`. `keep_going` is checked before every
/// evaluation. Returns the best point.
std::vector<double> nelder_mead_maximize(const std::function<double(std::span<const double>)>& f,
                                         std::vector<double> start, const NelderMeadOptions& opts,
                                         const std::function<bool()>& keep_going);

struct QAOAConfig {
  int p = 1;
  std::int64_t shots = 1024;
  double time_budget_s = 60.0;
  NelderMeadOptions optimizer;
  std::uint64_t seed = 0;
};

struct QAOAResult {
  int best_cut = 0;
  std::string best_bitstring;
  /// Best cut seen after each evaluation.
  std::vector<int> best_cut_history;
  std::vector<double> best_params;
  double best_expected_cut = 0.0;
  /// Mean cut from a fresh run at best_params.
  double final_expected_cut = 0.0;
  int evaluations = 0;
  double wall_time_s = 0.0;
};

/// The budget ran out before any evaluation finished.
class BudgetExhaustedError : public Error {
 public:
  BudgetExhaustedError(const std::string& what, double elapsed_s) : Error(what), elapsed_s_(elapsed_s) {}
  double elapsed_s() const noexcept { return elapsed_s_; }

 private:
  double elapsed_s_;
};

QAOAResult qaoa_maxcut(const Graph& g, Backend& backend, const QAOAConfig& cfg);

struct QScoreConfig {
  std::vector<int> sizes{2, 3, 4, 5};
  int graphs_per_size = 5;
  double time_limit_s = 60.0;
  int p = 1;
  std::int64_t shots = 1024;
  double beta_threshold = 0.2;
  std::uint64_t seed = 0;
};

struct QScoreSize {
  int n = 0;
  double mean_cut = 0.0;
  double mean_random = 0.0;
  double mean_optimum = 0.0;
  /// NaN when every graph has optimum equal to the random baseline.
  double beta = 0.0;
  double wall_time_s = 0.0;
  bool within_time = true;
  bool pass = false;
  std::string flag;
};

struct QScoreResult {
  int qscore = 1;
  std::vector<QScoreSize> sizes;
  std::string flag;
};

QScoreResult run_qscore(Backend& backend, const QScoreConfig& cfg);

}  // namespace qbench
