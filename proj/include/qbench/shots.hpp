#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>

namespace qbench {

/// Bitstring of `index` over n qubits; qubit 0 is the leftmost character and
/// the most significant bit.
std::string to_bitstring(std::uint64_t index, int n_qubits);
std::uint64_t from_bitstring(std::string_view bits);

/// Histogram of measured bitstrings for one executed circuit.
struct ShotTable {
  std::map<std::string, std::int64_t> counts;
  std::int64_t shots = 0;
  std::uint64_t seed = 0;
  int n_qubits = 0;

  double probability(std::string_view bits) const;
  /// Fraction of shots in which `qubit` read 1.
  double fraction_one(int qubit) const;
  void validate() const;

  friend bool operator==(const ShotTable&, const ShotTable&) = default;
};

/// Rewrite physical bitstrings into logical order: logical bit i is read
/// from physical qubit layout[i].
ShotTable remap_to_logical(const ShotTable& physical, std::span<const int> layout);

}  // namespace qbench
