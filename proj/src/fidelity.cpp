#include "qnetfid/fidelity.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <queue>
#include <string>

#include "qnetfid/error.hpp"
#include "qnetfid/summation.hpp"

namespace qnetfid {
namespace {

constexpr double kUnreached = -1.0;

void check_node(const Network& net, NodeId v) {
  if (v >= net.node_count()) throw InvalidArgument("node out of range: " + std::to_string(v));
}

struct QueueEntry {
  double product;
  std::size_t hops;
  NodeId node;
};

// Larger product first, then fewer hops, then smaller node id.
struct Worse {
  bool operator()(const QueueEntry& a, const QueueEntry& b) const {
    if (a.product != b.product) return a.product < b.product;
    if (a.hops != b.hops) return a.hops > b.hops;
    return a.node > b.node;
  }
};

using Frontier = std::priority_queue<QueueEntry, std::vector<QueueEntry>, Worse>;

std::vector<NodeId> trace(const std::vector<NodeId>& pred, NodeId source, NodeId v) {
  std::vector<NodeId> path{v};
  while (v != source) {
    v = pred[v];
    path.push_back(v);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

struct SearchState {
  std::vector<double> product;
  std::vector<std::size_t> hops;
  std::vector<NodeId> pred;
};

// Label-setting search on (product desc, hops asc, path lex asc). Every
// relaxation multiplies by a weight <= 1, so settled labels are final.
SearchState search(const Network& net, NodeId source) {
  const std::size_t n = net.node_count();
  SearchState st{std::vector<double>(n, kUnreached), std::vector<std::size_t>(n, 0),
                 std::vector<NodeId>(n, source)};
  std::vector<bool> settled(n, false);
  st.product[source] = 1.0;
  Frontier frontier;
  frontier.push({1.0, 0, source});
  while (!frontier.empty()) {
    const QueueEntry top = frontier.top();
    frontier.pop();
    const NodeId v = top.node;
    if (settled[v] || top.product != st.product[v] || top.hops != st.hops[v]) continue;
    settled[v] = true;
    for (const Neighbor& nb : net.neighbors(v)) {
      const NodeId w = nb.node;
      if (settled[w]) continue;
      const double cand = st.product[v] * net.edge(nb.edge).p;
      const std::size_t cand_hops = st.hops[v] + 1;
      bool better = cand > st.product[w] ||
                    (cand == st.product[w] && cand_hops < st.hops[w]);
      if (!better && cand == st.product[w] && cand_hops == st.hops[w] && st.pred[w] != v) {
        better = trace(st.pred, source, v) < trace(st.pred, source, st.pred[w]);
      }
      if (better) {
        st.product[w] = cand;
        st.hops[w] = cand_hops;
        st.pred[w] = v;
        frontier.push({cand, cand_hops, w});
      }
    }
  }
  return st;
}

PairFidelity make_record(const SearchState& st, NodeId s, NodeId t) {
  PairFidelity rec;
  rec.source = s;
  rec.target = t;
  rec.product = st.product[t];
  rec.fidelity = fidelity_from_product(rec.product);
  rec.best_path = trace(st.pred, s, t);
  return rec;
}

}  // namespace

PairFidelity pair_max_fidelity(const Network& net, NodeId s, NodeId t) {
  check_node(net, s);
  check_node(net, t);
  if (s == t) throw InvalidArgument("source and target must differ");
  return make_record(search(net, s), s, t);
}

std::vector<PairFidelity> single_source_max_fidelity(const Network& net, NodeId source) {
  check_node(net, source);
  const SearchState st = search(net, source);
  std::vector<PairFidelity> out;
  out.reserve(net.node_count());
  for (NodeId t = 0; t < net.node_count(); ++t) out.push_back(make_record(st, source, t));
  return out;
}

std::vector<double> best_products_from(const Network& net, NodeId source) {
  const auto w = net.weights();
  return best_products_from(net, source, w);
}

std::vector<double> best_products_from(const Network& net, NodeId source,
                                       std::span<const double> weights) {
  check_node(net, source);
  if (weights.size() != net.edge_count()) throw InvalidArgument("weight count mismatch");
  const std::size_t n = net.node_count();
  std::vector<double> product(n, kUnreached);
  std::vector<bool> settled(n, false);
  product[source] = 1.0;
  // Only the product matters here; the hop component keeps pops ordered
  // identically to search() so ties resolve to the same value.
  std::vector<std::size_t> hops(n, 0);
  Frontier frontier;
  frontier.push({1.0, 0, source});
  while (!frontier.empty()) {
    const QueueEntry top = frontier.top();
    frontier.pop();
    const NodeId v = top.node;
    if (settled[v] || top.product != product[v]) continue;
    settled[v] = true;
    for (const Neighbor& nb : net.neighbors(v)) {
      const NodeId w = nb.node;
      if (settled[w]) continue;
      const double cand = product[v] * weights[nb.edge];
      if (cand > product[w] || (cand == product[w] && hops[v] + 1 < hops[w])) {
        product[w] = cand;
        hops[w] = hops[v] + 1;
        frontier.push({cand, hops[w], w});
      }
    }
  }
  return product;
}

FidelitySummary summarize_max_fidelity(const Network& net) {
  const auto w = net.weights();
  return summarize_max_fidelity(net, w);
}

FidelitySummary summarize_max_fidelity(const Network& net, std::span<const double> weights) {
  const std::size_t n = net.node_count();
  if (n < 2) throw InvalidArgument("average fidelity needs at least two nodes");
  CompensatedSum sum;
  FidelitySummary out{0.0, 1.0, 0.5};
  for (NodeId s = 0; s + 1 < n; ++s) {
    const auto products = best_products_from(net, s, weights);
    for (NodeId t = s + 1; t < n; ++t) {
      const double f = fidelity_from_product(products[t]);
      sum.add(f);
      out.min = std::min(out.min, f);
      out.max = std::max(out.max, f);
    }
  }
  out.mean = sum.value() / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
  return out;
}

NetworkFidelity average_max_fidelity(const Network& net, const FidelityOptions& options) {
  const std::size_t n = net.node_count();
  if (n < 2) throw InvalidArgument("average fidelity needs at least two nodes");
  NetworkFidelity out;
  out.min_pair_fidelity = 1.0;
  out.max_pair_fidelity = 0.5;
  CompensatedSum weighted;
  double total_weight = 0.0;
  for (NodeId s = 0; s + 1 < n; ++s) {
    SearchState st = search(net, s);
    for (NodeId t = s + 1; t < n; ++t) {
      const double f = fidelity_from_product(st.product[t]);
      std::size_t count = 1;
      if (options.averaging == Averaging::kPerMaxPath) {
        count = count_max_product_paths(net, s, t, options.max_path_search_cap);
      }
      weighted.add(f * static_cast<double>(count));
      total_weight += static_cast<double>(count);
      out.min_pair_fidelity = std::min(out.min_pair_fidelity, f);
      out.max_pair_fidelity = std::max(out.max_pair_fidelity, f);
      if (options.pair_records) {
        PairFidelity rec = make_record(st, s, t);
        rec.max_path_count = count;
        out.pair_records.push_back(std::move(rec));
      }
    }
  }
  out.avg_max_fidelity = weighted.value() / total_weight;
  if (options.effective_path_length) out.effective_path_length = effective_path_length(net);
  return out;
}

namespace {

struct Enumerator {
  const Network& net;
  NodeId target;
  std::vector<bool> on_path;
  std::vector<NodeId> path;
  PairFidelity best;
  bool found = false;

  void visit(NodeId v, double product) {
    if (v == target) {
      const std::size_t hops = path.size() - 1;
      // DFS visits neighbours in increasing id order, so among equal
      // (product, hops) candidates the first one found is lexicographically
      // smallest.
      if (!found || product > best.product ||
          (product == best.product && hops < best.best_path.size() - 1)) {
        best.product = product;
        best.best_path = path;
        found = true;
      }
      return;
    }
    for (const Neighbor& nb : net.neighbors(v)) {
      if (on_path[nb.node]) continue;
      on_path[nb.node] = true;
      path.push_back(nb.node);
      visit(nb.node, product * net.edge(nb.edge).p);
      path.pop_back();
      on_path[nb.node] = false;
    }
  }
};

}  // namespace

PairFidelity brute_force_pair_fidelity(const Network& net, NodeId s, NodeId t, std::size_t node_cap) {
  check_node(net, s);
  check_node(net, t);
  if (s == t) throw InvalidArgument("source and target must differ");
  if (net.node_count() > node_cap) {
    throw CapExceeded("brute force limited to " + std::to_string(node_cap) + " nodes, network has " +
                      std::to_string(net.node_count()));
  }
  Enumerator e{net, t, std::vector<bool>(net.node_count(), false), {s}, {}, false};
  e.on_path[s] = true;
  e.visit(s, 1.0);
  e.best.source = s;
  e.best.target = t;
  e.best.fidelity = fidelity_from_product(e.best.product);
  return e.best;
}

std::size_t count_max_product_paths(const Network& net, NodeId s, NodeId t, std::size_t step_cap) {
  check_node(net, s);
  check_node(net, t);
  if (s == t) throw InvalidArgument("source and target must differ");
  const double best = best_products_from(net, s)[t];
  std::vector<bool> on_path(net.node_count(), false);
  std::size_t steps = 0;
  std::size_t count = 0;
  // Prefix products never increase, so any prefix already below the best
  // value cannot finish on it.
  auto dfs = [&](auto&& self, NodeId v, double product) -> void {
    if (++steps > step_cap) {
      throw CapExceeded("maximal path count search exceeded " + std::to_string(step_cap) + " steps");
    }
    if (v == t) {
      if (product == best) ++count;
      return;
    }
    for (const Neighbor& nb : net.neighbors(v)) {
      if (on_path[nb.node]) continue;
      const double next = product * net.edge(nb.edge).p;
      if (next < best) continue;
      on_path[nb.node] = true;
      self(self, nb.node, next);
      on_path[nb.node] = false;
    }
  };
  on_path[s] = true;
  dfs(dfs, s, 1.0);
  return count;
}

double effective_path_length(const Network& net) {
  const std::size_t n = net.node_count();
  if (n < 2) return 0.0;
  constexpr auto kInf = std::numeric_limits<std::size_t>::max();
  std::size_t total = 0;
  for (NodeId s = 0; s + 1 < n; ++s) {
    std::vector<std::size_t> dist(n, kInf);
    std::deque<NodeId> dq{s};
    dist[s] = 0;
    while (!dq.empty()) {
      const NodeId v = dq.front();
      dq.pop_front();
      for (const Neighbor& nb : net.neighbors(v)) {
        const std::size_t cost = net.edge(nb.edge).p == 1.0 ? 0 : 1;
        if (dist[v] + cost < dist[nb.node]) {
          dist[nb.node] = dist[v] + cost;
          if (cost == 0) {
            dq.push_front(nb.node);
          } else {
            dq.push_back(nb.node);
          }
        }
      }
    }
    for (NodeId t = s + 1; t < n; ++t) total += dist[t];
  }
  return static_cast<double>(total) / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
}

}  // namespace qnetfid
