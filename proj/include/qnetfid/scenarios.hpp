#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qnetfid/fidelity.hpp"
#include "qnetfid/network.hpp"
#include "qnetfid/sweep_result.hpp"

namespace qnetfid {

/// Sample statistics of F^max_avg over placements or random draws.
/// `min_pair_fidelity` / `max_pair_fidelity` are the extreme single-pair
/// fidelities seen in any sample.
struct EstimateResult {
  double mean = 0.0;
  double std_error = 0.0;
  double std_dev = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t sample_count = 0;
  double min_pair_fidelity = 1.0;
  double max_pair_fidelity = 0.5;
  bool exhaustive = false;
  /// Closed-form placement average when the topology has one.
  std::optional<double> analytic;
};

enum class PlacementMode { kExhaustive, kSample };

struct PlacementConfig {
  PlacementMode mode = PlacementMode::kExhaustive;
  std::size_t sample_count = 1000;
  std::size_t exhaustive_cap = 1'000'000;
};

struct ScenarioA {
  double p = 0.5;
};
struct ScenarioB {
  double p = 0.5;
  std::size_t m_links = 0;
  PlacementConfig placement;
};
struct ScenarioC {
  std::size_t sample_count = 100'000;
  /// Links forced to p = 1 (random placement per sample); 0 is plain
  /// Scenario C.
  std::size_t m_links = 0;
};

struct ScenarioConfig {
  std::variant<ScenarioA, ScenarioB, ScenarioC> scenario;
  std::uint64_t seed = 0;
  TopologySpec topology;
  unsigned threads = 1;
};

/// Default Scenario C sample count: 1e5 up to 10 nodes, 1e3 above.
std::size_t default_scenario_C_samples(std::size_t n);

struct ScenarioAResult {
  NetworkFidelity engine;
  std::optional<double> analytic;
  std::optional<double> abs_diff;
};

/// Uniform weights. The closed form is attached only when it uses the same
/// averaging convention as `options` (even rings need kPerMaxPath).
ScenarioAResult run_scenario_A(const TopologySpec& topology, double p,
                               const FidelityOptions& options = {.pair_records = false});

/// M maximally entangled links, the rest at p. Exhaustive mode averages over
/// all C(L, M) placements (CapExceeded past the cap); sample mode draws
/// placements from the seeded generator.
EstimateResult run_scenario_B(const TopologySpec& topology, double p, std::size_t m_links,
                              const PlacementConfig& placement, std::uint64_t seed,
                              unsigned threads = 1);

/// I.i.d. uniform weights per sample; max over paths first, then the pair
/// average, then the mean over samples.
EstimateResult run_scenario_C(const TopologySpec& topology, std::size_t sample_count,
                              std::uint64_t seed, unsigned threads = 1, std::size_t m_links = 0);

/// Dispatches on the config's scenario. Scenario A reports the engine value
/// as a single exhaustive sample.
EstimateResult run(const ScenarioConfig& config);

/// Lexicographic rank -> M-subset of {0..L-1}. Requires C(L,M) to fit in
/// 64 bits.
std::vector<std::uint32_t> unrank_combination(std::size_t links, std::size_t m, std::uint64_t rank);
std::uint64_t combination_count(std::size_t links, std::size_t m);

struct DecoherenceParams {
  double alpha = 0.46;     // dB/km
  double p_det = 1.0;
  double distance = 0.0;   // km
};

/// p_det * 10^(-alpha d / 10); InvalidArgument on negative alpha or d or
/// p_det outside [0,1].
double decoherence_weight(const DecoherenceParams& params);

/// Rows (topology, n, d_km, p, F_avg_max) for every distance and topology.
SweepResult decoherence_sweep(std::span<const TopologySpec> topologies, double alpha, double p_det,
                              std::span<const double> distances);

struct AdvantageOptions {
  PlacementConfig placement;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool prefer_closed_form = true;
};

/// Quantum-advantage map over (p, m = M/L), M = round(m L). Columns:
/// p, m, M, F_avg_max, source, avg_advantage, any_path_advantage,
/// all_path_advantage.
SweepResult advantage_region(const TopologySpec& topology, std::span<const double> p_grid,
                             std::span<const double> m_grid, const AdvantageOptions& options = {});

struct LargeNOptions {
  /// Placement-sampled engine estimates are added for N up to this size.
  std::size_t numeric_max_n = 0;
  std::size_t numeric_samples = 20;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// F^max_avg against N at fixed (p, m). `k` applies to flowers. Columns:
/// family, n, p, M, m, F_avg_max, limit, distance_to_limit, avg_advantage,
/// F_numeric, numeric_std_error.
SweepResult large_N_sweep(Family family, double p, double m, std::span<const std::size_t> n_list,
                          const LargeNOptions& options = {}, std::size_t k = 0);

/// Evenly spaced grid [lo, hi] with `steps` points (steps >= 2), endpoints
/// exact.
std::vector<double> linear_grid(double lo, double hi, std::size_t steps);

}  // namespace qnetfid
