#include "qnetfid/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qnetfid/analytic.hpp"
#include "qnetfid/error.hpp"
#include "qnetfid/parallel.hpp"
#include "qnetfid/rng.hpp"
#include "qnetfid/summation.hpp"

namespace qnetfid {
namespace {

constexpr double kClassicalLimit = 2.0 / 3.0;

EstimateResult aggregate(const std::vector<FidelitySummary>& samples, bool exhaustive) {
  EstimateResult r;
  r.sample_count = samples.size();
  r.exhaustive = exhaustive;
  if (samples.empty()) return r;
  CompensatedSum sum;
  r.min = std::numeric_limits<double>::infinity();
  r.max = -std::numeric_limits<double>::infinity();
  for (const auto& s : samples) {
    sum.add(s.mean);
    r.min = std::min(r.min, s.mean);
    r.max = std::max(r.max, s.mean);
    r.min_pair_fidelity = std::min(r.min_pair_fidelity, s.min);
    r.max_pair_fidelity = std::max(r.max_pair_fidelity, s.max);
  }
  const auto n = static_cast<double>(samples.size());
  // Summation rounding can push the mean a hair outside [min, max].
  r.mean = std::clamp(sum.value() / n, r.min, r.max);
  if (r.min == r.max) return r;
  CompensatedSum sq;
  for (const auto& s : samples) {
    const double d = s.mean - r.mean;
    sq.add(d * d);
  }
  if (exhaustive) {
    r.std_dev = std::sqrt(sq.value() / n);
    r.std_error = 0.0;
  } else if (samples.size() > 1) {
    r.std_dev = std::sqrt(sq.value() / (n - 1.0));
    r.std_error = r.std_dev / std::sqrt(n);
  }
  return r;
}

// Picks `m` distinct link indices by a partial Fisher-Yates shuffle.
void sample_placement(CounterRng& rng, std::vector<std::uint32_t>& scratch, std::size_t m) {
  std::iota(scratch.begin(), scratch.end(), 0u);
  for (std::size_t i = 0; i < m; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(scratch.size() - i));
    std::swap(scratch[i], scratch[j]);
  }
}

std::uint64_t saturating_binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    const std::uint64_t factor = n - k + i;
    if (r > kMax / factor) return kMax;
    r = r * factor / i;
  }
  return r;
}

Network base_network(const TopologySpec& topology, double p) {
  return generate(topology, UniformWeight{p});
}

}  // namespace

std::size_t default_scenario_C_samples(std::size_t n) { return n <= 10 ? 100'000 : 1'000; }

std::uint64_t combination_count(std::size_t links, std::size_t m) { return saturating_binomial(links, m); }

std::vector<std::uint32_t> unrank_combination(std::size_t links, std::size_t m, std::uint64_t rank) {
  if (m > links) throw InvalidArgument("cannot choose more links than exist");
  if (rank >= combination_count(links, m)) throw InvalidArgument("combination rank out of range");
  std::vector<std::uint32_t> out;
  out.reserve(m);
  std::size_t remaining = m;
  for (std::size_t pos = 0; pos < links && remaining > 0; ++pos) {
    const std::uint64_t with_pos = saturating_binomial(links - pos - 1, remaining - 1);
    if (rank < with_pos) {
      out.push_back(static_cast<std::uint32_t>(pos));
      --remaining;
    } else {
      rank -= with_pos;
    }
  }
  return out;
}

ScenarioAResult run_scenario_A(const TopologySpec& topology, double p, const FidelityOptions& options) {
  ScenarioAResult r;
  const Network net = base_network(topology, p);
  r.engine = average_max_fidelity(net, options);
  const bool even_ring = topology.family == Family::kRing && topology.n % 2 == 0;
  if (!even_ring || options.averaging == Averaging::kPerMaxPath) {
    r.analytic = analytic::scenario_A(topology, p);
  }
  if (r.analytic) r.abs_diff = std::fabs(*r.analytic - r.engine.avg_max_fidelity);
  return r;
}

EstimateResult run_scenario_B(const TopologySpec& topology, double p, std::size_t m_links,
                              const PlacementConfig& placement, std::uint64_t seed, unsigned threads) {
  const Network net = base_network(topology, p);
  const std::size_t links = net.edge_count();
  if (m_links > links) {
    throw InvalidArgument("M=" + std::to_string(m_links) + " exceeds link count L=" + std::to_string(links));
  }
  const std::vector<double> base = net.weights();
  std::vector<FidelitySummary> samples;
  bool exhaustive = placement.mode == PlacementMode::kExhaustive;
  if (exhaustive) {
    const std::uint64_t total = combination_count(links, m_links);
    if (total > placement.exhaustive_cap) {
      throw CapExceeded("C(" + std::to_string(links) + "," + std::to_string(m_links) +
                        ") placements exceed the cap of " + std::to_string(placement.exhaustive_cap));
    }
    samples.resize(total);
    parallel_for(total, threads, [&](std::size_t begin, std::size_t end) {
      std::vector<double> w(links);
      for (std::size_t r = begin; r < end; ++r) {
        w = base;
        for (auto i : unrank_combination(links, m_links, r)) w[i] = 1.0;
        samples[r] = summarize_max_fidelity(net, w);
      }
    });
  } else {
    if (placement.sample_count == 0) throw InvalidArgument("sample count must be >= 1");
    samples.resize(placement.sample_count);
    parallel_for(samples.size(), threads, [&](std::size_t begin, std::size_t end) {
      std::vector<double> w(links);
      std::vector<std::uint32_t> scratch(links);
      for (std::size_t i = begin; i < end; ++i) {
        CounterRng rng(seed, i);
        sample_placement(rng, scratch, m_links);
        w = base;
        for (std::size_t j = 0; j < m_links; ++j) w[scratch[j]] = 1.0;
        samples[i] = summarize_max_fidelity(net, w);
      }
    });
  }
  EstimateResult r = aggregate(samples, exhaustive);
  r.analytic = analytic::scenario_B(topology, m_links, p);
  return r;
}

EstimateResult run_scenario_C(const TopologySpec& topology, std::size_t sample_count, std::uint64_t seed,
                              unsigned threads, std::size_t m_links) {
  if (sample_count == 0) throw InvalidArgument("sample count must be >= 1");
  const Network net = base_network(topology, 0.5);
  const std::size_t links = net.edge_count();
  if (m_links > links) {
    throw InvalidArgument("M=" + std::to_string(m_links) + " exceeds link count L=" + std::to_string(links));
  }
  std::vector<FidelitySummary> samples(sample_count);
  parallel_for(sample_count, threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> w(links);
    std::vector<std::uint32_t> scratch(links);
    for (std::size_t i = begin; i < end; ++i) {
      CounterRng rng(seed, i);
      for (double& x : w) x = rng.uniform();
      if (m_links > 0) {
        sample_placement(rng, scratch, m_links);
        for (std::size_t j = 0; j < m_links; ++j) w[scratch[j]] = 1.0;
      }
      samples[i] = summarize_max_fidelity(net, w);
    }
  });
  return aggregate(samples, false);
}

EstimateResult run(const ScenarioConfig& config) {
  if (const auto* a = std::get_if<ScenarioA>(&config.scenario)) {
    const auto res = run_scenario_A(config.topology, a->p);
    EstimateResult r;
    r.mean = r.min = r.max = res.engine.avg_max_fidelity;
    r.min_pair_fidelity = res.engine.min_pair_fidelity;
    r.max_pair_fidelity = res.engine.max_pair_fidelity;
    r.sample_count = 1;
    r.exhaustive = true;
    r.analytic = res.analytic;
    return r;
  }
  if (const auto* b = std::get_if<ScenarioB>(&config.scenario)) {
    return run_scenario_B(config.topology, b->p, b->m_links, b->placement, config.seed, config.threads);
  }
  const auto& c = std::get<ScenarioC>(config.scenario);
  return run_scenario_C(config.topology, c.sample_count, config.seed, config.threads, c.m_links);
}

double decoherence_weight(const DecoherenceParams& params) {
  if (!(params.alpha >= 0.0)) throw InvalidArgument("alpha must be >= 0");
  if (!(params.distance >= 0.0)) throw InvalidArgument("distance must be >= 0");
  if (!(params.p_det >= 0.0 && params.p_det <= 1.0)) throw InvalidArgument("p_det must lie in [0,1]");
  return params.p_det * std::pow(10.0, -params.alpha * params.distance / 10.0);
}

SweepResult decoherence_sweep(std::span<const TopologySpec> topologies, double alpha, double p_det,
                              std::span<const double> distances) {
  SweepResult out;
  out.columns = {"topology", "n", "d_km", "p", "F_avg_max"};
  for (const TopologySpec& spec : topologies) {
    for (double d : distances) {
      const double p = decoherence_weight({alpha, p_det, d});
      const double f = run_scenario_A(spec, p).engine.avg_max_fidelity;
      out.add_row({to_string(spec.family), static_cast<long long>(spec.n), d, p, f});
    }
  }
  return out;
}

SweepResult advantage_region(const TopologySpec& topology, std::span<const double> p_grid,
                             std::span<const double> m_grid, const AdvantageOptions& options) {
  const Network shape = base_network(topology, 0.5);
  const std::size_t links = shape.edge_count();
  const bool tree = shape.is_tree();
  const std::size_t diameter = shape.hop_diameter();

  SweepResult out;
  out.columns = {"p", "m", "M", "F_avg_max", "source", "avg_advantage", "any_path_advantage",
                 "all_path_advantage"};
  const std::size_t cells = p_grid.size() * m_grid.size();
  std::vector<std::vector<Cell>> rows(cells);
  parallel_for(cells, options.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      const double p = p_grid[idx / m_grid.size()];
      const double m = m_grid[idx % m_grid.size()];
      if (!(m >= 0.0 && m <= 1.0)) throw InvalidArgument("m must lie in [0,1]");
      const auto m_links = static_cast<std::size_t>(std::lround(m * static_cast<double>(links)));

      std::optional<double> mean;
      std::optional<EstimateResult> numeric;
      std::string source = "closed-form";
      if (options.prefer_closed_form) mean = analytic::scenario_B(topology, m_links, p);
      if (!mean || !tree) {
        PlacementConfig placement = options.placement;
        if (placement.mode == PlacementMode::kExhaustive &&
            combination_count(links, m_links) > placement.exhaustive_cap) {
          placement.mode = PlacementMode::kSample;
        }
        // Grid cells draw from disjoint seeds so each is reproducible alone.
        numeric = run_scenario_B(topology, p, m_links, placement, options.seed + idx, 1);
        if (!mean) {
          mean = numeric->mean;
          source = numeric->exhaustive ? "exhaustive" : "sampled";
        }
      }

      // A single link is a path and longer paths never beat their best link,
      // so the best pair anywhere is the best link weight.
      const double best_link = m_links > 0 ? 1.0 : p;
      const bool any_path = fidelity_from_product(best_link) > kClassicalLimit;
      bool all_path;
      if (tree) {
        // Worst placement keeps ME links off a longest route.
        const std::size_t worst = std::min(diameter, links - m_links);
        all_path = fidelity_from_product(std::pow(p, static_cast<double>(worst))) > kClassicalLimit;
      } else {
        all_path = numeric->min_pair_fidelity > kClassicalLimit;
      }
      rows[idx] = {p, m, static_cast<long long>(m_links), *mean, source, *mean > kClassicalLimit,
                   any_path, all_path};
    }
  });
  for (auto& row : rows) out.add_row(std::move(row));
  return out;
}

SweepResult large_N_sweep(Family family, double p, double m, std::span<const std::size_t> n_list,
                          const LargeNOptions& options, std::size_t k) {
  if (!(m >= 0.0 && m <= 1.0)) throw InvalidArgument("m must lie in [0,1]");
  SweepResult out;
  out.columns = {"family", "n", "p", "M", "m", "F_avg_max", "limit", "distance_to_limit", "avg_advantage",
                 "F_numeric", "numeric_std_error"};
  for (std::size_t n : n_list) {
    const TopologySpec spec{family, n, k, {}};
    spec.validate();
    const std::size_t links = spec.link_count();
    const auto m_links = static_cast<std::size_t>(std::lround(m * static_cast<double>(links)));

    std::optional<EstimateResult> numeric;
    if (n <= options.numeric_max_n) {
      numeric = run_scenario_B(spec, p, m_links, {PlacementMode::kSample, options.numeric_samples},
                               options.seed, options.threads);
    }
    std::optional<double> f = analytic::scenario_B(spec, m_links, p);
    if (!f && numeric) f = numeric->mean;

    std::optional<double> limit;
    if (family == Family::kChain && p < 1.0 && m < 1.0) {
      limit = 0.5;
    } else if (family == Family::kStar) {
      // Pair fractions with 0, 1 and 2 non-ME links tend to m^2, 2m(1-m)
      // and (1-m)^2.
      limit = m * m + 2.0 * m * (1.0 - m) * fidelity_from_product(p) +
              (1.0 - m) * (1.0 - m) * fidelity_from_product(p * p);
    }

    const auto opt = [](std::optional<double> v) -> Cell {
      if (v) return *v;
      return NotAvailable{};
    };
    out.add_row({to_string(family), static_cast<long long>(n), p, static_cast<long long>(m_links), m, opt(f),
                 opt(limit), (f && limit) ? Cell(*f - *limit) : Cell(NotAvailable{}),
                 f ? Cell(*f > kClassicalLimit) : Cell(NotAvailable{}),
                 numeric ? Cell(numeric->mean) : Cell(NotAvailable{}),
                 numeric ? Cell(numeric->std_error) : Cell(NotAvailable{})});
  }
  return out;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t steps) {
  if (steps < 2) throw InvalidArgument("a grid needs at least two points");
  std::vector<double> g(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
  }
  g.back() = hi;
  return g;
}

}  // namespace qnetfid
