#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace qnetfid {

using NodeId = std::uint32_t;

/// Undirected link carrying a Werner state of weight `p`.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  double p = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
  NodeId node;
  std::size_t edge;  // index into Network::edges()
};

/// Immutable connected weighted graph. Construction validates every
/// invariant (no self-loops, no duplicate links, 0 <= p <= 1, connected)
/// and throws GraphError otherwise.
class Network {
 public:
  Network(std::size_t node_count, std::vector<Edge> edges);

  std::size_t node_count() const noexcept { return node_count_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }
  const Edge& edge(std::size_t i) const { return edges_.at(i); }
  std::span<const Neighbor> neighbors(NodeId v) const;
  std::size_t degree(NodeId v) const { return neighbors(v).size(); }

  /// Same topology and edge order, new weights (validated).
  Network with_weights(std::span<const double> weights) const;
  std::vector<double> weights() const;

  bool is_tree() const noexcept { return edges_.size() + 1 == node_count_; }
  /// Longest shortest-path distance, counted in links.
  std::size_t hop_diameter() const;
  std::vector<std::size_t> degree_sequence() const;

  /// Equality up to edge ordering and endpoint orientation.
  friend bool operator==(const Network& a, const Network& b);

 private:
  std::size_t node_count_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> adjacency_;
};

enum class Family { kChain, kStar, kFlower, kRing, kComplete, kCustom };

std::string to_string(Family f);
/// Accepts "chain", "star", "flower", "ring", "complete", "custom".
Family parse_family(const std::string& name);

/// Canonical family descriptor. `k` is used by kFlower only, `path` by
/// kCustom only.
struct TopologySpec {
  Family family = Family::kChain;
  std::size_t n = 0;
  std::size_t k = 0;
  std::filesystem::path path;

  static TopologySpec chain(std::size_t n) { return {Family::kChain, n, 0, {}}; }
  static TopologySpec star(std::size_t n) { return {Family::kStar, n, 0, {}}; }
  static TopologySpec flower(std::size_t n, std::size_t k) { return {Family::kFlower, n, k, {}}; }
  static TopologySpec ring(std::size_t n) { return {Family::kRing, n, 0, {}}; }
  static TopologySpec complete(std::size_t n) { return {Family::kComplete, n, 0, {}}; }
  static TopologySpec custom(std::filesystem::path p) { return {Family::kCustom, 0, 0, std::move(p)}; }

  /// Throws InvalidArgument when the node count or k is out of range.
  void validate() const;
  /// Number of links L for the canonical families.
  std::size_t link_count() const;
  bool is_tree_family() const noexcept {
    return family == Family::kChain || family == Family::kStar || family == Family::kFlower;
  }
  /// e.g. "chain(4)", "flower(6,k=2)".
  std::string label() const;
};

/// Link list of a canonical family in generator order. Flower(k) uses
/// hub 0, leaves 1..k+1, then the stem k+2, k+3, ... in chain order.
std::vector<std::pair<NodeId, NodeId>> canonical_links(const TopologySpec& spec);

struct UniformWeight {
  double p;
};
struct WeightList {
  std::vector<double> values;
};
/// Scenario B placement: mask[i] marks link i as maximally entangled (p=1).
struct MeMask {
  std::vector<bool> mask;
  double p;
};
using WeightAssignment = std::variant<UniformWeight, WeightList, MeMask>;

/// Resolves an assignment to one weight per link; throws InvalidArgument
/// on length mismatch and GraphError on out-of-range weights.
std::vector<double> resolve_weights(const WeightAssignment& w, std::size_t link_count);

/// Builds the family's network. For kCustom the file topology is loaded and
/// its weights replaced by `weights`.
Network generate(const TopologySpec& spec, const WeightAssignment& weights);

// Edge-list text format: first line N, then "u v p" per link. Blank lines
// and lines starting with '#' are skipped; CRLF is accepted.
Network parse_edge_list(std::istream& in);
void write_edge_list(const Network& net, std::ostream& out);
Network load_edge_list(const std::filesystem::path& path);
/// Writes through a temporary file and renames it into place.
void save_edge_list(const Network& net, const std::filesystem::path& path);

}  // namespace qnetfid
