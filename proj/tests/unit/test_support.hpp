#pragma once

// Test-only helpers: random graphs and an exhaustive placement oracle that
// goes through the brute-force path enumerator rather than the engine.

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "qnetfid/fidelity.hpp"
#include "qnetfid/network.hpp"

namespace qnetfid::testing {

/// Random spanning tree plus each remaining pair with probability `extra`.
inline Network random_connected(std::mt19937_64& gen, std::size_t n, double extra) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::shuffle(order.begin(), order.end(), gen);
  std::vector<Edge> edges;
  std::set<std::pair<NodeId, NodeId>> used;
  for (std::size_t i = 1; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    const NodeId a = order[i];
    const NodeId b = order[pick(gen)];
    edges.push_back({a, b, u(gen)});
    used.emplace(std::min(a, b), std::max(a, b));
  }
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = a + 1; b < n; ++b) {
      if (!used.count({a, b}) && u(gen) < extra) edges.push_back({a, b, u(gen)});
    }
  }
  return Network(n, std::move(edges));
}

/// F^max_avg from brute-force path enumeration for every pair.
inline double brute_force_average(const Network& net) {
  double total = 0.0;
  std::size_t pairs = 0;
  for (NodeId s = 0; s < net.node_count(); ++s) {
    for (NodeId t = s + 1; t < net.node_count(); ++t) {
      total += brute_force_pair_fidelity(net, s, t, 12).fidelity;
      ++pairs;
    }
  }
  return total / static_cast<double>(pairs);
}

/// Mean of brute_force_average over every placement of `m` ME links.
inline double placement_oracle(const Network& net, double p, std::size_t m) {
  const std::size_t links = net.edge_count();
  std::vector<bool> mask(links, false);
  std::fill(mask.end() - static_cast<long>(m), mask.end(), true);
  double total = 0.0;
  std::size_t count = 0;
  do {
    std::vector<double> w(links);
    for (std::size_t i = 0; i < links; ++i) w[i] = mask[i] ? 1.0 : p;
    total += brute_force_average(net.with_weights(w));
    ++count;
  } while (std::next_permutation(mask.begin(), mask.end()));
  return total / static_cast<double>(count);
}

/// Graph isomorphism by trying every relabelling (small N only).
inline bool isomorphic(const Network& a, const Network& b) {
  if (a.node_count() != b.node_count() || a.edge_count() != b.edge_count()) return false;
  const std::size_t n = a.node_count();
  std::set<std::pair<NodeId, NodeId>> target;
  for (const Edge& e : b.edges()) target.emplace(std::min(e.u, e.v), std::max(e.u, e.v));
  std::vector<NodeId> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  do {
    bool ok = true;
    for (const Edge& e : a.edges()) {
      const NodeId x = perm[e.u];
      const NodeId y = perm[e.v];
      if (!target.count({std::min(x, y), std::max(x, y)})) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

}  // namespace qnetfid::testing
