#include "qbench/shots.hpp"

#include "qbench/error.hpp"

namespace qbench {

std::string to_bitstring(std::uint64_t index, int n_qubits) {
  std::string s(static_cast<size_t>(n_qubits), '0');
  for (int q = 0; q < n_qubits; ++q)
    if ((index >> (n_qubits - 1 - q)) & 1u) s[static_cast<size_t>(q)] = '1';
  return s;
}

std::uint64_t from_bitstring(std::string_view bits) {
  std::uint64_t v = 0;
  for (char ch : bits) {
    if (ch != '0' && ch != '1') throw PreconditionError("bitstring may only hold '0' and '1'");
    v = (v << 1) | static_cast<std::uint64_t>(ch == '1');
  }
  return v;
}

double ShotTable::probability(std::string_view bits) const {
  if (shots == 0) return 0.0;
  const auto it = counts.find(std::string(bits));
  return it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(shots);
}

double ShotTable::fraction_one(int qubit) const {
  if (qubit < 0 || qubit >= n_qubits) throw PreconditionError("qubit out of range");
  if (shots == 0) return 0.0;
  std::int64_t ones = 0;
  for (const auto& [bits, n] : counts)
    if (bits[static_cast<size_t>(qubit)] == '1') ones += n;
  return static_cast<double>(ones) / static_cast<double>(shots);
}

void ShotTable::validate() const {
  std::int64_t total = 0;
  for (const auto& [bits, n] : counts) {
    if (static_cast<int>(bits.size()) != n_qubits)
      throw PreconditionError("bitstring length does not match qubit count");
    if (n < 0) throw PreconditionError("negative count");
    total += n;
  }
  if (total != shots) throw PreconditionError("counts do not sum to the shot total");
}

ShotTable remap_to_logical(const ShotTable& physical, std::span<const int> layout) {
  ShotTable out;
  out.shots = physical.shots;
  out.seed = physical.seed;
  out.n_qubits = static_cast<int>(layout.size());
  for (const auto& [bits, n] : physical.counts) {
    std::string logical(layout.size(), '0');
    for (size_t i = 0; i < layout.size(); ++i) {
      const int p = layout[i];
      if (p < 0 || p >= static_cast<int>(bits.size())) throw PreconditionError("layout out of range");
      logical[i] = bits[static_cast<size_t>(p)];
    }
    out.counts[logical] += n;
  }
  return out;
}

}  // namespace qbench
