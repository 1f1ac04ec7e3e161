#include "qbench/routing.hpp"

#include "qbench/error.hpp"
#include "qbench/synthesis.hpp"

#include <algorithm>
#include <deque>

namespace qbench {

Topology::Topology(int n_qubits, std::vector<Edge> edges)
    : n_(n_qubits), edges_(std::move(edges)), adj_(static_cast<size_t>(n_qubits)) {
  for (auto [a, b] : edges_) {
    if (a < 0 || b < 0 || a >= n_ || b >= n_ || a == b)
      throw PreconditionError("invalid coupling edge");
    adj_[static_cast<size_t>(a)].push_back(b);
    adj_[static_cast<size_t>(b)].push_back(a);
  }
  for (auto& nb : adj_) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
}

Topology Topology::all_to_all(int n_qubits) {
  std::vector<Edge> e;
  for (int a = 0; a < n_qubits; ++a)
    for (int b = a + 1; b < n_qubits; ++b) e.emplace_back(a, b);
  return Topology(n_qubits, std::move(e));
}

bool Topology::connected(int a, int b) const {
  if (a < 0 || a >= n_) return false;
  const auto& nb = adj_[static_cast<size_t>(a)];
  return std::binary_search(nb.begin(), nb.end(), b);
}

std::vector<int> Topology::shortest_path(int a, int b) const {
  std::vector<int> prev(static_cast<size_t>(n_), -1);
  std::deque<int> queue{a};
  prev[static_cast<size_t>(a)] = a;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    if (v == b) break;
    for (int w : adj_[static_cast<size_t>(v)]) {
      if (prev[static_cast<size_t>(w)] >= 0) continue;
      prev[static_cast<size_t>(w)] = v;
      queue.push_back(w);
    }
  }
  if (prev[static_cast<size_t>(b)] < 0) return {};
  std::vector<int> path{b};
  while (path.back() != a) path.push_back(prev[static_cast<size_t>(path.back())]);
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<int> Topology::choose_region(int width) const {
  if (width > n_) throw CapabilityError("region wider than the device");
  int start = 0;
  for (int q = 1; q < n_; ++q)
    if (adj_[static_cast<size_t>(q)].size() > adj_[static_cast<size_t>(start)].size()) start = q;
  std::vector<int> region;
  std::vector<bool> seen(static_cast<size_t>(n_), false);
  std::deque<int> queue;
  if (n_ > 0) {
    queue.push_back(start);
    seen[static_cast<size_t>(start)] = true;
  }
  while (!queue.empty() && static_cast<int>(region.size()) < width) {
    const int v = queue.front();
    queue.pop_front();
    region.push_back(v);
    for (int w : adj_[static_cast<size_t>(v)])
      if (!seen[static_cast<size_t>(w)]) seen[static_cast<size_t>(w)] = true, queue.push_back(w);
  }
  // Disconnected leftovers only matter for circuits without two-qubit gates.
  for (int q = 0; q < n_ && static_cast<int>(region.size()) < width; ++q)
    if (std::find(region.begin(), region.end(), q) == region.end()) region.push_back(q);
  std::sort(region.begin(), region.end());
  return region;
}

MappedCircuit map_to_device(const Circuit& logical, const Topology& topo) {
  const int n_log = logical.n_qubits();
  MappedCircuit out;
  out.initial_layout = topo.choose_region(n_log);
  std::vector<int> l2p = out.initial_layout;
  std::vector<int> p2l(static_cast<size_t>(topo.n_qubits()), -1);
  for (int l = 0; l < n_log; ++l) p2l[static_cast<size_t>(l2p[static_cast<size_t>(l)])] = l;

  Circuit phys(topo.n_qubits(), logical.label());
  for (Gate g : logical.ops()) {
    g.parallel = false;
    if (g.kind == GateKind::CZ) {
      int pa = l2p[static_cast<size_t>(g.qubits[0])];
      const int pb = l2p[static_cast<size_t>(g.qubits[1])];
      if (!topo.connected(pa, pb)) {
        const std::vector<int> path = topo.shortest_path(pa, pb);
        if (path.empty()) throw CapabilityError("qubits " + std::to_string(pa) + " and " +
                                                std::to_string(pb) + " are not connected");
        for (size_t i = 1; i + 1 < path.size(); ++i) {
          const int next = path[i];
          for (const Gate& s : swap_gates(pa, next)) phys.append(s);
          const int la = p2l[static_cast<size_t>(pa)], ln = p2l[static_cast<size_t>(next)];
          p2l[static_cast<size_t>(pa)] = ln;
          p2l[static_cast<size_t>(next)] = la;
          if (la >= 0) l2p[static_cast<size_t>(la)] = next;
          if (ln >= 0) l2p[static_cast<size_t>(ln)] = pa;
          pa = next;
        }
      }
      phys.append(Gate::cz(pa, pb));
      continue;
    }
    if (g.kind != GateKind::MeasureAll) g.qubits[0] = l2p[static_cast<size_t>(g.qubits[0])];
    phys.append(g);
  }
  out.circuit = std::move(phys);
  out.final_layout = std::move(l2p);
  return out;
}

}  // namespace qbench
