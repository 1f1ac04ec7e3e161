#include "qbench/graph.hpp"

#include "qbench/error.hpp"

#include <random>
#include <set>

namespace qbench {

void Graph::validate() const {
  if (n < 0) throw PreconditionError("graph size must be >= 0");
  std::set<Edge> seen;
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n || b >= n) throw PreconditionError("edge endpoint out of range");
    if (a == b) throw PreconditionError("self-loops are not allowed");
    if (!seen.insert({std::min(a, b), std::max(a, b)}).second) throw PreconditionError("duplicate edge");
  }
}

Graph gen_erdos_renyi(int n, double p, std::uint64_t seed) {
  if (n < 0) throw PreconditionError("graph size must be >= 0");
  if (!(p >= 0 && p <= 1)) throw PreconditionError("edge probability must lie in [0, 1]");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  Graph g{n, {}};
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (coin(rng)) g.edges.emplace_back(a, b);
  return g;
}

int cut_value(const Graph& g, std::string_view bits) {
  if (static_cast<int>(bits.size()) != g.n) throw PreconditionError("bitstring length differs from graph size");
  int cut = 0;
  for (auto [a, b] : g.edges) cut += bits[static_cast<size_t>(a)] != bits[static_cast<size_t>(b)];
  return cut;
}

int cut_value(const Graph& g, std::uint64_t partition) {
  int cut = 0;
  for (auto [a, b] : g.edges) cut += ((partition >> (g.n - 1 - a)) ^ (partition >> (g.n - 1 - b))) & 1u;
  return cut;
}

MaxCut maxcut_brute(const Graph& g) {
  g.validate();
  if (g.n > 24) throw PreconditionError("brute-force max-cut is limited to 24 nodes");
  MaxCut best;
  if (g.n == 0) return best;
  // Fix node 0 on side 0; the other 2^(n-1) assignments cover every cut.
  const std::uint64_t count = std::uint64_t(1) << (g.n - 1);
  for (std::uint64_t s = 0; s < count; ++s) {
    const int v = cut_value(g, s);
    if (v > best.value) best = {v, s};
  }
  return best;
}

}  // namespace qbench
