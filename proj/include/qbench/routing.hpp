#pragma once

#include "qbench/circuit.hpp"

#include <span>
#include <utility>
#include <vector>

namespace qbench {

using Edge = std::pair<int, int>;

/// Undirected coupling graph over physical qubits.
class Topology {
 public:
  Topology() = default;
  Topology(int n_qubits, std::vector<Edge> edges);
  static Topology all_to_all(int n_qubits);

  int n_qubits() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  bool connected(int a, int b) const;
  /// Shortest path from a to b (inclusive); empty when unreachable.
  std::vector<int> shortest_path(int a, int b) const;
  /// `width` qubits forming a connected region, grown breadth-first from the
  /// best-connected qubit.
  std::vector<int> choose_region(int width) const;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
};

/// A logical circuit placed on physical qubits.
/// layout[logical] = physical qubit holding that logical qubit.
struct MappedCircuit {
  Circuit circuit;
  std::vector<int> initial_layout;
  std::vector<int> final_layout;
};

/// Place `logical` on a connected region of `topo` and insert SWAPs in front
/// of every CZ whose operands are not adjacent. The result is measured over
/// all physical qubits when the logical circuit is measured.
MappedCircuit map_to_device(const Circuit& logical, const Topology& topo);

}  // namespace qbench
