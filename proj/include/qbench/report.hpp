#pragma once

#include "qbench/app_suite.hpp"
#include "qbench/json_io.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace qbench {

inline constexpr std::string_view kToolkitVersion = "0.1.0";

/// A result value with its unit. Non-finite numbers are stored as null.
struct Scalar {
  Json value;
  std::string unit;

  friend bool operator==(const Scalar&, const Scalar&) = default;
};

Scalar scalar(double value, std::string unit);

/// One metric run.
///
/// `scalars` holds everything that is reproducible for a fixed seed, config
/// and device; wall-clock quantities go to `timing`.
struct MetricReport {
  std::string metric;
  std::string run_id;
  Json config = Json::object();
  std::map<std::string, std::string> backend;
  std::map<std::string, Scalar> scalars;
  Json timing = Json::object();
  std::vector<std::string> raw;
  std::string started_at, finished_at;
  std::string version{kToolkitVersion};
  std::uint64_t seed = 0;
  bool valid = true;
  std::vector<std::string> flags;

  Json to_json() const;
  static MetricReport from_json(const Json& j);
  /// The scalar section alone, serialized deterministically.
  std::string scalars_dump() const;

  friend bool operator==(const MetricReport&, const MetricReport&) = default;
};

std::string utc_timestamp();
/// Random RFC 4122 version-4 UUID.
std::string random_uuid();

/// Append-only store for one invocation: `<dir>/records.jsonl` plus
/// `<dir>/raw/<metric>/<uuid>.json`.
class RunStore {
 public:
  /// New run directory `<root>/<run_id>`; a fresh id is made when empty.
  static RunStore create(const std::filesystem::path& root, std::string run_id = {});
  static RunStore open(const std::filesystem::path& dir);

  const std::filesystem::path& dir() const { return dir_; }
  const std::string& id() const { return id_; }

  void append(const MetricReport& r);
  /// Returns the path relative to the run directory.
  std::string write_raw(const std::string& metric, const Json& data);
  Json read_raw(const std::string& relative) const;
  std::vector<MetricReport> records() const;

 private:
  RunStore(std::filesystem::path dir, std::string id) : dir_(std::move(dir)), id_(std::move(id)) {}

  std::filesystem::path dir_;
  std::string id_;
};

/// Aggregate the latest value of each metric across the given runs (all runs
/// under `root` when empty) into `<out_dir>/summary.json` and
/// `<out_dir>/volumetric.csv`. Missing metrics are null.
Json emit_report(const std::filesystem::path& root, const std::vector<std::string>& run_ids,
                 const std::filesystem::path& out_dir);

Json cells_to_json(const std::vector<VolumetricCell>& cells);
std::vector<VolumetricCell> cells_from_json(const Json& j);

}  // namespace qbench
