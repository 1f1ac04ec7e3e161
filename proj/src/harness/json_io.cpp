#include "qbench/json_io.hpp"

#include "qbench/error.hpp"

#include <cmath>
#include <fstream>

namespace qbench {
namespace {

Json time_to_json(double us) { return std::isinf(us) ? Json(nullptr) : Json(us); }
double time_from_json(const Json& j) { return j.is_null() ? kNoDecay : j.get<double>(); }

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
  const auto it = j.find(key);
  return it == j.end() || it->is_null() ? fallback : it->template get<T>();
}

}  // namespace

Json circuit_to_json(const Circuit& c) {
  Json ops = Json::array();
  for (const Gate& g : c.ops()) {
    Json op{{"kind", std::string(to_string(g.kind))}};
    op["qubits"] = std::vector<int>(g.targets().begin(), g.targets().end());
    if (g.kind == GateKind::RZ) {
      if (g.is_symbolic()) op["param"] = g.param;
      else op["angle_rad"] = g.angle_rad;
    }
    if (g.kind == GateKind::Wait) op["duration_ns"] = g.duration_ns;
    if (g.parallel) op["parallel"] = true;
    ops.push_back(std::move(op));
  }
  return {{"n_qubits", c.n_qubits()}, {"label", c.label()}, {"ops", std::move(ops)}};
}

Circuit circuit_from_json(const Json& j) {
  try {
    Circuit c(j.at("n_qubits").get<int>(), get_or<std::string>(j, "label", ""));
    for (const Json& op : j.at("ops")) {
      Gate g;
      g.kind = gate_kind_from_string(op.at("kind").get<std::string>());
      const auto qubits = get_or<std::vector<int>>(op, "qubits", {});
      if (static_cast<int>(qubits.size()) != g.arity())
        throw PreconditionError("op " + op.at("kind").get<std::string>() + " has the wrong number of qubits");
      for (size_t i = 0; i < qubits.size(); ++i) g.qubits[i] = qubits[i];
      g.angle_rad = get_or<double>(op, "angle_rad", 0.0);
      g.duration_ns = get_or<double>(op, "duration_ns", 0.0);
      g.param = get_or<int>(op, "param", -1);
      g.parallel = get_or<bool>(op, "parallel", false);
      c.append(g);
    }
    return c;
  } catch (const Json::exception& e) {
    throw PreconditionError(std::string("malformed circuit JSON: ") + e.what());
  }
}

Json shot_table_to_json(const ShotTable& t) {
  Json counts = Json::object();
  for (const auto& [bits, n] : t.counts) counts[bits] = n;
  return {{"counts", std::move(counts)}, {"shots", t.shots}, {"seed", t.seed}};
}

ShotTable shot_table_from_json(const Json& j, int n_qubits) {
  try {
    ShotTable t;
    t.n_qubits = n_qubits;
    for (const auto& [bits, n] : j.at("counts").items()) {
      t.counts[bits] = n.get<std::int64_t>();
      t.shots += n.get<std::int64_t>();
      t.n_qubits = static_cast<int>(bits.size());
    }
    if (j.contains("shots") && j["shots"].get<std::int64_t>() != t.shots)
      throw PreconditionError("counts do not sum to the reported shot total");
    t.seed = get_or<std::uint64_t>(j, "seed", 0);
    t.validate();
    return t;
  } catch (const Json::exception& e) {
    throw PreconditionError(std::string("malformed result JSON: ") + e.what());
  }
}

Json timing_to_json(const TimingModel& t) {
  return {{"single_qubit_gate_ns", t.single_qubit_gate_ns},
          {"two_qubit_gate_ns", t.two_qubit_gate_ns},
          {"rz_ns", t.rz_ns},
          {"measure_ns", t.measure_ns}};
}

TimingModel timing_from_json(const Json& j) {
  TimingModel t;
  t.single_qubit_gate_ns = get_or(j, "single_qubit_gate_ns", t.single_qubit_gate_ns);
  t.two_qubit_gate_ns = get_or(j, "two_qubit_gate_ns", t.two_qubit_gate_ns);
  t.rz_ns = get_or(j, "rz_ns", t.rz_ns);
  t.measure_ns = get_or(j, "measure_ns", t.measure_ns);
  t.validate();
  return t;
}

Json device_to_json(const DeviceModel& d) {
  Json qubits = Json::array();
  for (const QubitParams& q : d.qubits) {
    qubits.push_back({{"t1_us", time_to_json(q.t1_us)},
                      {"t2_us", time_to_json(q.t2_us)},
                      {"readout", {{q.readout(0, 0), q.readout(0, 1)}, {q.readout(1, 0), q.readout(1, 1)}}},
                      {"p1", q.p1}});
  }
  Json edges = Json::array();
  for (auto [a, b] : d.edges) edges.push_back({a, b});
  Json epochs = Json::array();
  for (const DriftEpoch& e : d.drift.epochs) epochs.push_back({{"start_s", e.start_s}, {"t2_multiplier", e.t2_multiplier}});
  return {{"name", d.name},
          {"qubits", std::move(qubits)},
          {"p2", d.p2},
          {"edges", std::move(edges)},
          {"timing", timing_to_json(d.timing)},
          {"readout_correlation", d.readout_correlation},
          {"drift", {{"jitter_sigma", d.drift.jitter_sigma}, {"epochs", std::move(epochs)}}}};
}

DeviceModel device_from_json(const Json& j) {
  try {
    DeviceModel d;
    d.name = get_or<std::string>(j, "name", "device");
    if (j.contains("timing")) d.timing = timing_from_json(j["timing"]);
    const double default_p1 = get_or(j, "p1", 0.0);
    for (const Json& jq : j.at("qubits")) {
      QubitParams q;
      q.t1_us = jq.contains("t1_us") ? time_from_json(jq["t1_us"]) : kNoDecay;
      q.t2_us = jq.contains("t2_us") ? time_from_json(jq["t2_us"]) : kNoDecay;
      if (jq.contains("readout")) {
        const Json& m = jq["readout"];
        q.readout << m.at(0).at(0).get<double>(), m.at(0).at(1).get<double>(), m.at(1).at(0).get<double>(),
            m.at(1).at(1).get<double>();
      }
      if (jq.contains("p1") && jq.contains("f1q")) throw PreconditionError("give either p1 or f1q for a qubit");
      if (jq.contains("f1q"))
        q.p1 = depolarizing_for_fidelity(jq["f1q"].get<double>(), q.t1_us, q.t2_us, d.timing.single_qubit_gate_ns);
      else
        q.p1 = get_or(jq, "p1", default_p1);
      d.qubits.push_back(q);
    }
    d.p2 = get_or(j, "p2", 0.0);
    if (j.contains("edges")) {
      for (const Json& e : j["edges"]) d.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    } else {
      d.edges = Topology::all_to_all(d.n_qubits()).edges();
    }
    d.readout_correlation = get_or(j, "readout_correlation", 0.0);
    if (j.contains("drift")) {
      const Json& dr = j["drift"];
      d.drift.jitter_sigma = get_or(dr, "jitter_sigma", 0.0);
      if (dr.contains("epochs"))
        for (const Json& e : dr["epochs"]) d.drift.epochs.push_back({e.at("start_s").get<double>(), e.at("t2_multiplier").get<double>()});
    }
    d.validate();
    return d;
  } catch (const Json::exception& e) {
    throw PreconditionError(std::string("malformed device JSON: ") + e.what());
  }
}

DeviceModel load_device(const std::filesystem::path& path) { return device_from_json(read_json_file(path)); }

Json capabilities_to_json(const Capabilities& c) {
  Json edges = Json::array();
  for (auto [a, b] : c.edges) edges.push_back({a, b});
  Json gates = Json::array();
  for (GateKind k : c.native_gates) gates.push_back(std::string(to_string(k)));
  return {{"n_qubits", c.n_qubits}, {"edges", std::move(edges)}, {"native_gates", std::move(gates)},
          {"timing", timing_to_json(c.timing)}};
}

Capabilities capabilities_from_json(const Json& j) {
  try {
    Capabilities c;
    c.n_qubits = j.at("n_qubits").get<int>();
    for (const Json& e : j.at("edges")) c.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    if (j.contains("native_gates")) {
      c.native_gates.clear();
      for (const Json& g : j["native_gates"]) c.native_gates.push_back(gate_kind_from_string(g.get<std::string>()));
    }
    if (j.contains("timing")) c.timing = timing_from_json(j["timing"]);
    return c;
  } catch (const Json::exception& e) {
    throw PreconditionError(std::string("malformed capabilities JSON: ") + e.what());
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NotFoundError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw PreconditionError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw BackendError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace qbench
