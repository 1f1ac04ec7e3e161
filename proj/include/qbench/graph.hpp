#pragma once

#include "qbench/routing.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace qbench {

/// Simple undirected graph on nodes 0..n-1.
struct Graph {
  int n = 0;
  std::vector<Edge> edges;

  /// Throws PreconditionError on self-loops, duplicates or bad indices.
  void validate() const;
};

/// G(n, p): each of the n(n-1)/2 edges present independently.
Graph gen_erdos_renyi(int n, double p, std::uint64_t seed);

/// Cut size of a partition; node i sits on side bits[i] (qubit order).
int cut_value(const Graph& g, std::string_view bits);
int cut_value(const Graph& g, std::uint64_t partition);

struct MaxCut {
  int value = 0;
  /// Bit (n - 1 - i) is node i's side, matching bitstring order.
  std::uint64_t partition = 0;
};

MaxCut maxcut_brute(const Graph& g);

}  // namespace qbench
