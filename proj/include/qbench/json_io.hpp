#pragma once

#include "qbench/backend.hpp"
#include "qbench/circuit.hpp"
#include "qbench/device.hpp"
#include "qbench/shots.hpp"

#include <json.hpp>

#include <filesystem>

namespace qbench {

using Json = nlohmann::json;

// Circuit: {n_qubits, label, ops: [{kind, qubits, angle_rad?, duration_ns?,
// param?, parallel?}]}. Doubles are written in shortest round-trip form.
Json circuit_to_json(const Circuit& c);
Circuit circuit_from_json(const Json& j);

// Shot table: {counts: {bitstring: int}, shots?, seed?}.
Json shot_table_to_json(const ShotTable& t);
/// `n_qubits` is taken from the bitstrings, or from the argument when the
/// table is empty.
ShotTable shot_table_from_json(const Json& j, int n_qubits = 0);

// Device: {name, qubits: [{t1_us, t2_us, readout, p1 | f1q}], p1, p2, edges,
// timing, readout_correlation, drift}. Infinite times are written as null.
// A per-qubit f1q is converted to p1 under the qubit's own decay.
Json device_to_json(const DeviceModel& d);
DeviceModel device_from_json(const Json& j);
DeviceModel load_device(const std::filesystem::path& path);

Json timing_to_json(const TimingModel& t);
TimingModel timing_from_json(const Json& j);

Json capabilities_to_json(const Capabilities& c);
Capabilities capabilities_from_json(const Json& j);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace qbench
