#include "qbench/report.hpp"

#include "qbench/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <regex>

namespace qbench {

Scalar scalar(double value, std::string unit) {
  return {std::isfinite(value) ? Json(value) : Json(nullptr), std::move(unit)};
}

Json MetricReport::to_json() const {
  Json sc = Json::object();
  for (const auto& [name, s] : scalars) sc[name] = {{"value", s.value}, {"unit", s.unit}};
  return {{"metric", metric},   {"run_id", run_id},     {"config", config},   {"backend", backend},
          {"scalars", sc},      {"timing", timing},     {"raw", raw},         {"started_at", started_at},
          {"finished_at", finished_at}, {"version", version}, {"seed", seed}, {"valid", valid},
          {"flags", flags}};
}

MetricReport MetricReport::from_json(const Json& j) {
  try {
    MetricReport r;
    r.metric = j.at("metric").get<std::string>();
    r.run_id = j.at("run_id").get<std::string>();
    r.config = j.at("config");
    r.backend = j.at("backend").get<std::map<std::string, std::string>>();
    for (const auto& [name, s] : j.at("scalars").items())
      r.scalars[name] = {s.at("value"), s.at("unit").get<std::string>()};
    r.timing = j.at("timing");
    r.raw = j.at("raw").get<std::vector<std::string>>();
    r.started_at = j.at("started_at").get<std::string>();
    r.finished_at = j.at("finished_at").get<std::string>();
    r.version = j.at("version").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.valid = j.at("valid").get<bool>();
    r.flags = j.at("flags").get<std::vector<std::string>>();
    return r;
  } catch (const Json::exception& e) {
    throw PreconditionError(std::string("malformed metric report: ") + e.what());
  }
}

std::string MetricReport::scalars_dump() const { return to_json().at("scalars").dump(); }

namespace {

constexpr const char* kPerQubit[] = {"t1_us", "t2star_us", "t2hahn_us", "f1q", "f_ro"};

std::vector<std::string> list_runs(const std::filesystem::path& root) {
  std::vector<std::string> ids;
  if (!std::filesystem::is_directory(root)) throw NotFoundError("no run store at " + root.string());
  for (const auto& e : std::filesystem::directory_iterator(root))
    if (e.is_directory() && std::filesystem::exists(e.path() / "records.jsonl"))
      ids.push_back(e.path().filename().string());
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace

Json cells_to_json(const std::vector<VolumetricCell>& cells) {
  Json out = Json::array();
  for (const VolumetricCell& c : cells) {
    Json j{{"algorithm", c.algorithm}, {"width", c.width}, {"depth", c.depth},
           {"fidelity", std::isfinite(c.fidelity) ? Json(c.fidelity) : Json(nullptr)}};
    if (!c.skipped.empty()) j["skipped"] = c.skipped;
    out.push_back(std::move(j));
  }
  return out;
}

std::vector<VolumetricCell> cells_from_json(const Json& j) {
  std::vector<VolumetricCell> out;
  for (const Json& c : j) {
    VolumetricCell cell;
    cell.algorithm = c.at("algorithm").get<std::string>();
    cell.width = c.at("width").get<int>();
    cell.depth = c.at("depth").get<int>();
    cell.fidelity = c.at("fidelity").is_null() ? std::nan("") : c.at("fidelity").get<double>();
    if (c.contains("skipped")) cell.skipped = c["skipped"].get<std::string>();
    out.push_back(std::move(cell));
  }
  return out;
}

Json emit_report(const std::filesystem::path& root, const std::vector<std::string>& run_ids,
                 const std::filesystem::path& out_dir) {
  const std::vector<std::string> ids = run_ids.empty() ? list_runs(root) : run_ids;
  std::map<std::string, Json> latest;
  std::vector<VolumetricCell> cells;
  int n_qubits = 0;
  const std::regex per_qubit(R"(q(\d+)\.(.+))");
  for (const std::string& id : ids) {
    if (!std::filesystem::exists(root / id / "records.jsonl")) throw NotFoundError("unknown run id " + id);
    const RunStore store = RunStore::open(root / id);
    for (const MetricReport& r : store.records()) {
      for (const auto& [name, s] : r.scalars) {
        latest[name] = s.value;
        std::smatch m;
        if (std::regex_match(name, m, per_qubit)) n_qubits = std::max(n_qubits, std::stoi(m[1]) + 1);
      }
      if (r.timing.contains("clops")) latest["clops"] = r.timing["clops"];
      if (r.metric == "appsuite")
        for (const std::string& path : r.raw) cells = cells_from_json(store.read_raw(path).at("cells"));
    }
  }
  auto get = [&](const std::string& name) { return latest.count(name) ? latest[name] : Json(nullptr); };

  Json summary{{"runs", ids}, {"version", std::string(kToolkitVersion)}};
  Json qubits = Json::array();
  for (int q = 0; q < n_qubits; ++q) {
    Json row{{"qubit", q}};
    for (const char* key : kPerQubit) row[key] = get("q" + std::to_string(q) + "." + key);
    row["t2star_relative_std"] = get("q" + std::to_string(q) + ".t2star_relative_std");
    qubits.push_back(std::move(row));
  }
  summary["qubits"] = std::move(qubits);
  for (const char* key : {"q_factor", "qv", "clops", "qscore", "crosstalk_max_row_l1"}) summary[key] = get(key);

  std::filesystem::create_directories(out_dir);
  write_json_file(out_dir / "summary.json", summary);
  std::ofstream csv(out_dir / "volumetric.csv");
  write_volumetric_csv(csv, cells);
  return summary;
}

}  // namespace qbench
