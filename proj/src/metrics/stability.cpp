#include "qbench/stability.hpp"

#include "qbench/error.hpp"

#include <cmath>
#include <numeric>

namespace qbench {

StabilityRecord run_stability(Backend& backend, const StabilityConfig& cfg) {
  if (cfg.repeats < 3) throw PreconditionError("stability needs at least 3 repeats");
  if (!(cfg.interval_s >= 0)) throw PreconditionError("interval must be >= 0");
  std::vector<int> qubits = cfg.qubits;
  if (qubits.empty()) {
    qubits.resize(static_cast<size_t>(backend.capabilities().n_qubits));
    std::iota(qubits.begin(), qubits.end(), 0);
  }

  StabilityRecord rec;
  for (int q : qubits) {
    QubitStability qs;
    qs.qubit = q;
    rec.qubits.push_back(qs);
  }
  for (int r = 0; r < cfg.repeats; ++r) {
    if (r > 0) backend.idle_for(cfg.interval_s);
    CoherenceConfig cc = cfg.t2star;
    cc.seed = circuit_seed(cfg.seed, static_cast<size_t>(r));
    for (QubitStability& qs : rec.qubits) {
      StabilityPoint p;
      p.time_s = backend.now_s();
      const CoherenceResult res = t2star_experiment(backend, qs.qubit, cc);
      p.t2star_us = res.value_us;
      p.std_error_us = res.std_error_us;
      p.valid = res.valid;
      p.flag = res.flag;
      qs.points.push_back(p);
    }
  }

  for (QubitStability& qs : rec.qubits) {
    std::vector<double> v;
    for (const StabilityPoint& p : qs.points)
      if (p.valid) v.push_back(p.t2star_us);
    qs.excluded = static_cast<int>(qs.points.size() - v.size());
    if (v.size() < 2) {
      qs.mean_us = v.empty() ? std::nan("") : v[0];
      qs.std_us = qs.relative_std = std::nan("");
      continue;
    }
    qs.mean_us = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - qs.mean_us) * (x - qs.mean_us);
    qs.std_us = std::sqrt(ss / static_cast<double>(v.size() - 1));
    qs.relative_std = qs.std_us / qs.mean_us;
  }
  return rec;
}

}  // namespace qbench
