#include "qnetfid/network.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "qnetfid/error.hpp"

namespace qnetfid {
namespace {

void check_weight(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw GraphError("weight out of range: " + std::to_string(p));
  }
}

std::vector<std::size_t> bfs_hops(const Network& net, NodeId source) {
  constexpr auto kUnseen = static_cast<std::size_t>(-1);
  std::vector<std::size_t> hops(net.node_count(), kUnseen);
  std::deque<NodeId> queue{source};
  hops[source] = 0;
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    for (const Neighbor& nb : net.neighbors(v)) {
      if (hops[nb.node] == kUnseen) {
        hops[nb.node] = hops[v] + 1;
        queue.push_back(nb.node);
      }
    }
  }
  return hops;
}

}  // namespace

Network::Network(std::size_t node_count, std::vector<Edge> edges)
    : node_count_(node_count), edges_(std::move(edges)) {
  if (node_count_ == 0) throw GraphError("network needs at least one node");
  std::set<std::pair<NodeId, NodeId>> seen;
  for (const Edge& e : edges_) {
    if (e.u >= node_count_ || e.v >= node_count_) {
      throw GraphError("node id out of range in link " + std::to_string(e.u) + "-" +
                       std::to_string(e.v));
    }
    if (e.u == e.v) throw GraphError("self-loop at node " + std::to_string(e.u));
    check_weight(e.p);
    if (!seen.emplace(std::min(e.u, e.v), std::max(e.u, e.v)).second) {
      throw GraphError("duplicate link " + std::to_string(e.u) + "-" + std::to_string(e.v));
    }
  }

  // CSR adjacency, neighbours in increasing node order.
  std::vector<std::vector<Neighbor>> lists(node_count_);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    lists[edges_[i].u].push_back({edges_[i].v, i});
    lists[edges_[i].v].push_back({edges_[i].u, i});
  }
  offsets_.reserve(node_count_ + 1);
  offsets_.push_back(0);
  for (auto& l : lists) {
    std::sort(l.begin(), l.end(), [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
    adjacency_.insert(adjacency_.end(), l.begin(), l.end());
    offsets_.push_back(adjacency_.size());
  }

  const auto hops = bfs_hops(*this, 0);
  if (std::any_of(hops.begin(), hops.end(), [](std::size_t h) { return h == static_cast<std::size_t>(-1); })) {
    throw GraphError("graph is disconnected");
  }
}

std::span<const Neighbor> Network::neighbors(NodeId v) const {
  if (v >= node_count_) throw InvalidArgument("node out of range: " + std::to_string(v));
  return std::span<const Neighbor>(adjacency_).subspan(offsets_[v], offsets_[v + 1] - offsets_[v]);
}

Network Network::with_weights(std::span<const double> weights) const {
  if (weights.size() != edges_.size()) {
    throw InvalidArgument("weight list length " + std::to_string(weights.size()) +
                          " does not match link count " + std::to_string(edges_.size()));
  }
  for (double w : weights) check_weight(w);
  Network copy = *this;
  for (std::size_t i = 0; i < edges_.size(); ++i) copy.edges_[i].p = weights[i];
  return copy;
}

std::vector<double> Network::weights() const {
  std::vector<double> w;
  w.reserve(edges_.size());
  for (const Edge& e : edges_) w.push_back(e.p);
  return w;
}

std::size_t Network::hop_diameter() const {
  std::size_t best = 0;
  for (NodeId s = 0; s < node_count_; ++s) {
    const auto hops = bfs_hops(*this, s);
    best = std::max(best, *std::max_element(hops.begin(), hops.end()));
  }
  return best;
}

std::vector<std::size_t> Network::degree_sequence() const {
  std::vector<std::size_t> d(node_count_);
  for (NodeId v = 0; v < node_count_; ++v) d[v] = degree(v);
  return d;
}

bool operator==(const Network& a, const Network& b) {
  if (a.node_count_ != b.node_count_ || a.edges_.size() != b.edges_.size()) return false;
  auto normalized = [](const Network& n) {
    std::vector<Edge> es(n.edges_.begin(), n.edges_.end());
    for (Edge& e : es) {
      if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(es.begin(), es.end(), [](const Edge& x, const Edge& y) {
      return std::tie(x.u, x.v) < std::tie(y.u, y.v);
    });
    return es;
  };
  return normalized(a) == normalized(b);
}

std::string to_string(Family f) {
  switch (f) {
    case Family::kChain: return "chain";
    case Family::kStar: return "star";
    case Family::kFlower: return "flower";
    case Family::kRing: return "ring";
    case Family::kComplete: return "complete";
    case Family::kCustom: return "custom";
  }
  return "unknown";
}

Family parse_family(const std::string& name) {
  for (Family f : {Family::kChain, Family::kStar, Family::kFlower, Family::kRing,
                   Family::kComplete, Family::kCustom}) {
    if (to_string(f) == name) return f;
  }
  throw InvalidArgument("unknown topology family '" + name + "'");
}

void TopologySpec::validate() const {
  const std::string name = to_string(family);
  switch (family) {
    case Family::kChain:
    case Family::kStar:
    case Family::kComplete:
      if (n < 2) throw InvalidArgument(name + " requires N >= 2");
      break;
    case Family::kFlower:
      if (n < 3) throw InvalidArgument("flower requires N >= 3");
      if (k > n - 3) {
        throw InvalidArgument("flower requires 0 <= k <= L-2 (k=" + std::to_string(k) +
                              ", L=" + std::to_string(n - 1) + ")");
      }
      break;
    case Family::kRing:
      if (n < 3) throw InvalidArgument("ring requires N >= 3");
      break;
    case Family::kCustom:
      if (path.empty()) throw InvalidArgument("custom topology needs an edge-list path");
      break;
  }
}

std::size_t TopologySpec::link_count() const {
  switch (family) {
    case Family::kChain:
    case Family::kStar:
    case Family::kFlower: return n - 1;
    case Family::kRing: return n;
    case Family::kComplete: return n * (n - 1) / 2;
    case Family::kCustom: break;
  }
  throw InvalidArgument("link count of a custom topology is only known after loading");
}

std::string TopologySpec::label() const {
  switch (family) {
    case Family::kFlower: return "flower(" + std::to_string(n) + ",k=" + std::to_string(k) + ")";
    case Family::kCustom: return "custom(" + path.string() + ")";
    default: return to_string(family) + "(" + std::to_string(n) + ")";
  }
}

std::vector<std::pair<NodeId, NodeId>> canonical_links(const TopologySpec& spec) {
  spec.validate();
  const auto n = static_cast<NodeId>(spec.n);
  std::vector<std::pair<NodeId, NodeId>> links;
  switch (spec.family) {
    case Family::kChain:
      for (NodeId i = 0; i + 1 < n; ++i) links.emplace_back(i, i + 1);
      break;
    case Family::kStar:
      for (NodeId i = 1; i < n; ++i) links.emplace_back(0, i);
      break;
    case Family::kFlower: {
      const auto spokes = static_cast<NodeId>(spec.k + 2);
      for (NodeId i = 1; i <= spokes; ++i) links.emplace_back(0, i);
      for (NodeId i = spokes; i + 1 < n; ++i) links.emplace_back(i, i + 1);
      break;
    }
    case Family::kRing:
      for (NodeId i = 0; i + 1 < n; ++i) links.emplace_back(i, i + 1);
      links.emplace_back(n - 1, 0);
      break;
    case Family::kComplete:
      for (NodeId i = 0; i < n; ++i) {
        for (NodeId j = i + 1; j < n; ++j) links.emplace_back(i, j);
      }
      break;
    case Family::kCustom:
      throw InvalidArgument("custom topology has no canonical link list");
  }
  return links;
}

std::vector<double> resolve_weights(const WeightAssignment& w, std::size_t link_count) {
  std::vector<double> out;
  if (const auto* u = std::get_if<UniformWeight>(&w)) {
    check_weight(u->p);
    out.assign(link_count, u->p);
  } else if (const auto* l = std::get_if<WeightList>(&w)) {
    if (l->values.size() != link_count) {
      throw InvalidArgument("weight list length " + std::to_string(l->values.size()) +
                            " does not match link count " + std::to_string(link_count));
    }
    out = l->values;
  } else {
    const auto& m = std::get<MeMask>(w);
    if (m.mask.size() != link_count) {
      throw InvalidArgument("ME mask length " + std::to_string(m.mask.size()) +
                            " does not match link count " + std::to_string(link_count));
    }
    check_weight(m.p);
    out.reserve(link_count);
    for (bool me : m.mask) out.push_back(me ? 1.0 : m.p);
  }
  for (double p : out) check_weight(p);
  return out;
}

Network generate(const TopologySpec& spec, const WeightAssignment& weights) {
  if (spec.family == Family::kCustom) {
    spec.validate();
    Network base = load_edge_list(spec.path);
    const auto w = resolve_weights(weights, base.edge_count());
    return base.with_weights(w);
  }
  const auto links = canonical_links(spec);
  const auto w = resolve_weights(weights, links.size());
  std::vector<Edge> edges;
  edges.reserve(links.size());
  for (std::size_t i = 0; i < links.size(); ++i) edges.push_back({links[i].first, links[i].second, w[i]});
  return Network(spec.n, std::move(edges));
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) tokens.push_back(s.substr(i, j - i));
    i = j;
  }
  return tokens;
}

template <typename T>
bool parse_number(std::string_view tok, T& out) {
  const char* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

Network parse_edge_list(std::istream& in) {
  std::string raw;
  std::size_t line_no = 0;
  std::optional<std::size_t> n;
  std::vector<Edge> edges;
  std::set<std::pair<NodeId, NodeId>> seen;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto tokens = split_ws(line);
    if (!n) {
      std::size_t count = 0;
      if (tokens.size() != 1 || !parse_number(tokens[0], count) || count == 0) {
        throw ParseError(line_no, "expected a positive node count");
      }
      n = count;
      continue;
    }
    Edge e;
    if (tokens.size() != 3 || !parse_number(tokens[0], e.u) || !parse_number(tokens[1], e.v) ||
        !parse_number(tokens[2], e.p)) {
      throw ParseError(line_no, "expected 'u v p'");
    }
    if (e.u >= *n || e.v >= *n) throw ParseError(line_no, "node id out of range");
    if (e.u == e.v) throw ParseError(line_no, "self-loop");
    if (!(e.p >= 0.0 && e.p <= 1.0)) throw ParseError(line_no, "weight out of range");
    if (!seen.emplace(std::min(e.u, e.v), std::max(e.u, e.v)).second) {
      throw ParseError(line_no, "duplicate link");
    }
    edges.push_back(e);
  }
  if (!n) throw ParseError(line_no, "missing node count");
  return Network(*n, std::move(edges));
}

void write_edge_list(const Network& net, std::ostream& out) {
  out << net.node_count() << '\n';
  char buf[64];
  for (const Edge& e : net.edges()) {
    // Shortest representation that parses back to the same double.
    const auto res = std::to_chars(buf, buf + sizeof buf, e.p);
    out << e.u << ' ' << e.v << ' ' << std::string_view(buf, res.ptr) << '\n';
  }
}

Network load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_edge_list(in);
}

void save_edge_list(const Network& net, const std::filesystem::path& path) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    write_edge_list(net, out);
    if (!out.flush()) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot write " + path.string());
  }
}

}  // namespace qnetfid
