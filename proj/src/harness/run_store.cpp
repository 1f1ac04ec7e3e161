#include "qbench/report.hpp"

#include "qbench/error.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <random>
#include <sstream>

namespace qbench {

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::string random_uuid() {
  static std::mutex mu;
  static std::mt19937_64 rng{std::random_device{}()};
  std::uint64_t hi, lo;
  {
    std::lock_guard lock(mu);
    hi = rng();
    lo = rng();
  }
  hi = (hi & ~0xf000ULL) | 0x4000ULL;
  lo = (lo & ~(0xc000ULL << 48)) | (0x8000ULL << 48);
  std::ostringstream os;
  os << std::hex << std::setfill('0') << std::setw(8) << (hi >> 32) << '-' << std::setw(4) << ((hi >> 16) & 0xffff)
     << '-' << std::setw(4) << (hi & 0xffff) << '-' << std::setw(4) << (lo >> 48) << '-' << std::setw(12)
     << (lo & 0xffffffffffffULL);
  return os.str();
}

RunStore RunStore::create(const std::filesystem::path& root, std::string run_id) {
  if (run_id.empty()) {
    std::string ts = utc_timestamp();
    std::erase(ts, ':');
    std::erase(ts, '-');
    run_id = "run-" + ts + "-" + random_uuid().substr(0, 8);
  }
  const auto dir = root / run_id;
  if (std::filesystem::exists(dir / "records.jsonl")) throw PreconditionError("run " + run_id + " already exists");
  std::filesystem::create_directories(dir / "raw");
  std::ofstream(dir / "records.jsonl", std::ios::app);
  return RunStore(dir, run_id);
}

RunStore RunStore::open(const std::filesystem::path& dir) {
  if (!std::filesystem::exists(dir / "records.jsonl")) throw NotFoundError("no run at " + dir.string());
  return RunStore(dir, dir.filename().string());
}

void RunStore::append(const MetricReport& r) {
  std::ofstream out(dir_ / "records.jsonl", std::ios::app);
  if (!out) throw BackendError("cannot append to " + (dir_ / "records.jsonl").string());
  out << r.to_json().dump() << '\n';
}

std::string RunStore::write_raw(const std::string& metric, const Json& data) {
  const std::string rel = "raw/" + metric + "/" + random_uuid() + ".json";
  write_json_file(dir_ / rel, data);
  return rel;
}

Json RunStore::read_raw(const std::string& relative) const { return read_json_file(dir_ / relative); }

std::vector<MetricReport> RunStore::records() const {
  std::ifstream in(dir_ / "records.jsonl");
  std::vector<MetricReport> out;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(MetricReport::from_json(Json::parse(line)));
  return out;
}

}  // namespace qbench
