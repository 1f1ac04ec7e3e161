#pragma once

#include "qbench/backend.hpp"
#include "qbench/component.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qbench {

struct StabilityConfig {
  int repeats = 5;
  double interval_s = 3600.0;
  CoherenceConfig t2star = CoherenceConfig::t2star();
  /// Empty means every qubit.
  std::vector<int> qubits;
  std::uint64_t seed = 0;
};

struct StabilityPoint {
  double time_s = 0.0;
  double t2star_us = 0.0;
  double std_error_us = 0.0;
  bool valid = false;
  std::string flag;
};

struct QubitStability {
  int qubit = 0;
  std::vector<StabilityPoint> points;
  double mean_us = 0.0;
  double std_us = 0.0;
  /// Sample std over mean of the valid points; NaN with fewer than two.
  double relative_std = 0.0;
  int excluded = 0;
};

struct StabilityRecord {
  std::vector<QubitStability> qubits;
};

StabilityRecord run_stability(Backend& backend, const StabilityConfig& cfg);

}  // namespace qbench
