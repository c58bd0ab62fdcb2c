#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "qnetfid/network.hpp"

namespace qnetfid {

/// Teleportation fidelity of a Werner-state path whose weights multiply to
/// `product`: (1 + product) / 2.
constexpr double fidelity_from_product(double product) noexcept { return 0.5 * (1.0 + product); }

/// Best source-target route. `product` is the left-to-right product of the
/// link weights along `best_path`, starting at `source`.
struct PairFidelity {
  NodeId source = 0;
  NodeId target = 0;
  std::vector<NodeId> best_path;
  double product = 0.0;
  double fidelity = 0.5;
  /// Number of distinct simple paths attaining `product`; filled only by
  /// Averaging::kPerMaxPath.
  std::size_t max_path_count = 1;
};

/// How pairs are weighted in the network average.
enum class Averaging {
  /// Every unordered pair counts once (C(N,2) denominator).
  kPerPair,
  /// Every pair is weighted by how many distinct simple paths reach its
  /// maximal product, i.e. the average runs over all maximal paths. On an
  /// even ring this counts both halves between opposite nodes.
  kPerMaxPath,
};

struct FidelityOptions {
  Averaging averaging = Averaging::kPerPair;
  bool pair_records = true;
  bool effective_path_length = false;
  /// Search budget (DFS steps per pair) for kPerMaxPath path counting.
  std::size_t max_path_search_cap = 10'000'000;
};

struct NetworkFidelity {
  double avg_max_fidelity = 1.0;
  double min_pair_fidelity = 1.0;
  double max_pair_fidelity = 1.0;
  std::vector<PairFidelity> pair_records;  // pairs (s,t) with s < t, row-major
  std::optional<double> effective_path_length;
};

/// Max-product route between s and t (best-first search). Ties on product
/// are broken by fewer hops, then the lexicographically smallest node
/// sequence. Throws InvalidArgument when s == t or a node is out of range.
PairFidelity pair_max_fidelity(const Network& net, NodeId s, NodeId t);

/// Records for every target reachable from `source` (entry `source` has an
/// empty path and product 1).
std::vector<PairFidelity> single_source_max_fidelity(const Network& net, NodeId source);

/// Maximal path products from `source` to every node, without paths. Values
/// are bitwise identical to those of single_source_max_fidelity.
std::vector<double> best_products_from(const Network& net, NodeId source);
/// Same, with `weights[i]` replacing the weight of link i (unchecked).
std::vector<double> best_products_from(const Network& net, NodeId source,
                                       std::span<const double> weights);

/// Network-wide average of the maximal pair fidelities.
NetworkFidelity average_max_fidelity(const Network& net, const FidelityOptions& options = {});

struct FidelitySummary {
  double mean = 1.0;
  double min = 1.0;
  double max = 1.0;
};

/// Per-pair average with min/max over pairs; no records, no allocation per
/// pair. Used on the Monte Carlo hot path.
FidelitySummary summarize_max_fidelity(const Network& net);
FidelitySummary summarize_max_fidelity(const Network& net, std::span<const double> weights);

/// Exhaustive simple-path enumeration oracle. Throws CapExceeded when the
/// network has more than `node_cap` nodes.
PairFidelity brute_force_pair_fidelity(const Network& net, NodeId s, NodeId t,
                                       std::size_t node_cap = 10);

/// Number of distinct simple s-t paths whose product equals the maximal
/// product. Throws CapExceeded when the pruned search exceeds `step_cap`.
std::size_t count_max_product_paths(const Network& net, NodeId s, NodeId t,
                                    std::size_t step_cap = 10'000'000);

/// Pair-averaged number of non-ME links (p < 1) on the best route in the
/// limit where every non-ME weight tends to 1: a 0-1 shortest path where ME
/// links cost nothing.
double effective_path_length(const Network& net);

}  // namespace qnetfid
