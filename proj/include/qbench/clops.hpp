#pragma once

#include "qbench/backend.hpp"
#include "qbench/circuit.hpp"
#include "qbench/error.hpp"

#include <cstdint>
#include <vector>

namespace qbench {

struct CLOPSConfig {
  int templates = 100;
  int updates = 10;
  std::int64_t shots = 100;
  /// 0 means log2 of the measured QV.
  int layers = 0;
  std::uint64_t seed = 0;
};

struct CLOPSTiming {
  /// Execution time reported by the backend, or client wall time when the
  /// backend reports none.
  double quantum_s = 0.0;
  /// Binding and parameter-update wall time.
  double classical_s = 0.0;
  bool backend_reported = true;

  double total_s() const { return quantum_s + classical_s; }
};

struct CLOPSResult {
  double clops = 0.0;
  int templates = 0, updates = 0, layers = 0;
  std::int64_t shots = 0;
  CLOPSTiming timing;
  /// Hash of every round's outcomes; fixes the run for a given seed.
  std::uint64_t outcome_digest = 0;
};

/// The run stopped after `completed_rounds` full rounds.
class CLOPSPartialError : public Error {
 public:
  CLOPSPartialError(const std::string& what, int completed_rounds, CLOPSTiming timing)
      : Error(what), completed_rounds_(completed_rounds), timing_(timing) {}
  int completed_rounds() const noexcept { return completed_rounds_; }
  const CLOPSTiming& timing() const noexcept { return timing_; }

 private:
  int completed_rounds_;
  CLOPSTiming timing_;
};

double clops_formula(double templates, double updates, double shots, double layers, double t_total_s);

/// 64-bit FNV-1a over the table's outcomes in bitstring order.
std::uint64_t outcome_hash(const ShotTable& t);

/// Angles for the next round, drawn uniformly in [0, 2 pi).
std::vector<double> next_round_angles(const ShotTable& previous, int n_params);

/// Parameterized QV template mapped onto the backend: every RZ is symbolic.
ParamCircuit clops_template(const Capabilities& caps, int layers, std::uint64_t seed);

CLOPSResult run_clops(Backend& backend, const CLOPSConfig& cfg, int measured_qv);

}  // namespace qbench
