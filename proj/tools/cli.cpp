#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qnetfid/analytic.hpp"
#include "qnetfid/error.hpp"
#include "qnetfid/fidelity.hpp"
#include "qnetfid/network.hpp"
#include "qnetfid/rng.hpp"
#include "qnetfid/scenarios.hpp"

namespace qnetfid::cli {
namespace {

using json = nlohmann::ordered_json;

constexpr const char* kVersion = QNETFID_VERSION;

std::string fixed6(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::string short_g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// Shared option groups

struct TopologyArgs {
  std::string family;
  std::size_t n = 0;
  std::size_t k = 0;
  std::string graph;

  void attach(CLI::App& app, bool allow_graph) {
    app.add_option("--family", family, "chain, star, flower, ring or complete");
    app.add_option("--n", n, "Node count N");
    app.add_option("--k", k, "Flower index k (0 <= k <= N-3)");
    if (allow_graph) app.add_option("--graph", graph, "Edge-list file instead of a family");
  }

  TopologySpec spec() const {
    if (!graph.empty()) return TopologySpec::custom(graph);
    if (family.empty()) throw InvalidArgument("one of --family or --graph is required");
    const Family f = parse_family(family);
    if (f == Family::kCustom) throw InvalidArgument("use --graph for custom topologies");
    TopologySpec s{f, n, k, {}};
    s.validate();
    return s;
  }
};

unsigned resolve_thread_option(const std::optional<unsigned>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("QNETFID_THREADS"); env && *env) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (*end != '\0') throw InvalidArgument(std::string("QNETFID_THREADS is not a number: ") + env);
    return static_cast<unsigned>(v);
  }
  return 0;
}

double parse_probability(const std::string& text, const char* what) {
  char* end = nullptr;
  const double p = std::strtod(text.c_str(), &end);
  if (text.empty() || *end != '\0') throw InvalidArgument(std::string(what) + " is not a number: " + text);
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument(std::string(what) + " must lie in [0,1]");
  return p;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || *end != '\0') throw InvalidArgument("bad list entry '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::string iso_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string join_args(const std::vector<std::string>& args) {
  std::string s;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) s += ' ';
    s += args[i];
  }
  return s;
}

// Temp file + rename so a failed run never leaves a partial file behind.
template <typename Writer>
void write_atomically(const std::filesystem::path& path, Writer&& write) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    try {
      write(out);
    } catch (...) {
      out.close();
      std::filesystem::remove(tmp);
      throw;
    }
    if (!out.flush()) {
      out.close();
      std::filesystem::remove(tmp);
      throw IoError("write failed for " + path.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot write " + path.string());
  }
}

// ---------------------------------------------------------------------------
// generate

struct GenerateArgs {
  TopologyArgs topology;
  std::optional<std::string> p;
  std::string weights;
  std::string me_mask;
  std::string out_path;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  const TopologySpec spec = a.topology.spec();
  WeightAssignment w = UniformWeight{1.0};
  if (!a.weights.empty()) {
    w = WeightList{parse_list(a.weights)};
    for (double x : std::get<WeightList>(w).values) {
      if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument("weight out of range");
    }
  } else {
    if (!a.p) throw InvalidArgument("--p or --weights is required");
    const double p = parse_probability(*a.p, "--p");
    if (!a.me_mask.empty()) {
      std::vector<bool> mask;
      for (double x : parse_list(a.me_mask)) mask.push_back(x != 0.0);
      w = MeMask{std::move(mask), p};
    } else {
      w = UniformWeight{p};
    }
  }
  const Network net = generate(spec, w);
  if (a.out_path.empty()) {
    write_edge_list(net, out);
  } else {
    save_edge_list(net, a.out_path);
    out << "wrote " << spec.label() << " with " << net.edge_count() << " links to " << a.out_path << '\n';
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// compute

struct ComputeArgs {
  TopologyArgs topology;
  std::string scenario = "A";
  std::optional<std::string> p;
  std::size_t m_links = 0;
  std::string placement = "exhaustive";
  std::optional<std::size_t> samples;
  std::uint64_t seed = 0;
  bool pairs = false;
  bool eff_length = false;
  std::string averaging = "pairs";
  std::string format = "text";
  std::optional<unsigned> threads;
};

json pair_json(const PairFidelity& r) {
  return json{{"source", r.source},   {"target", r.target},          {"fidelity", r.fidelity},
              {"product", r.product}, {"path", r.best_path},         {"max_path_count", r.max_path_count}};
}

std::string path_string(const std::vector<NodeId>& path) {
  std::string s;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) s += '-';
    s += std::to_string(path[i]);
  }
  return s;
}

json estimate_json(const EstimateResult& r) {
  json j{{"mean", r.mean},
         {"std_error", r.std_error},
         {"std_dev", r.std_dev},
         {"min", r.min},
         {"max", r.max},
         {"sample_count", r.sample_count},
         {"exhaustive", r.exhaustive},
         {"min_pair_fidelity", r.min_pair_fidelity},
         {"max_pair_fidelity", r.max_pair_fidelity}};
  if (r.analytic) {
    j["analytic"] = *r.analytic;
    j["abs_diff"] = std::fabs(*r.analytic - r.mean);
  } else {
    j["analytic"] = nullptr;
    j["numeric_only"] = true;
  }
  return j;
}

int compute_scenario_A(const ComputeArgs& a, const TopologySpec& spec, std::ostream& out) {
  const Averaging averaging = a.averaging == "max-paths" ? Averaging::kPerMaxPath : Averaging::kPerPair;
  std::optional<double> p;
  if (a.p) p = parse_probability(*a.p, "--p");
  Network net = [&] {
    if (spec.family == Family::kCustom && !p) return load_edge_list(spec.path);
    if (!p) throw InvalidArgument("--p is required for scenario A on a generated topology");
    return generate(spec, UniformWeight{*p});
  }();
  const NetworkFidelity nf = average_max_fidelity(
      net, {.averaging = averaging, .pair_records = a.pairs, .effective_path_length = a.eff_length});

  std::optional<Rational> exact;
  std::optional<double> closed;
  const bool even_ring = spec.family == Family::kRing && spec.n % 2 == 0;
  if (p && spec.family != Family::kCustom && (!even_ring || averaging == Averaging::kPerMaxPath)) {
    exact = analytic::scenario_A_exact(spec, parse_rational(*a.p));
    closed = analytic::scenario_A(spec, *p);
  }

  if (a.format == "json") {
    json j{{"topology", spec.label()},
           {"nodes", net.node_count()},
           {"links", net.edge_count()},
           {"scenario", "A"},
           {"averaging", a.averaging},
           {"F_avg_max", nf.avg_max_fidelity},
           {"min_pair_fidelity", nf.min_pair_fidelity},
           {"max_pair_fidelity", nf.max_pair_fidelity}};
    if (p) j["p"] = *p;
    if (closed) {
      j["analytic"] = *closed;
      j["analytic_exact"] = to_string(*exact);
      j["abs_diff"] = std::fabs(*closed - nf.avg_max_fidelity);
    }
    if (nf.effective_path_length) j["effective_path_length"] = *nf.effective_path_length;
    if (a.pairs) {
      j["pairs"] = json::array();
      for (const auto& r : nf.pair_records) j["pairs"].push_back(pair_json(r));
    }
    out << j.dump(2) << '\n';
    return kOk;
  }
  if (a.format == "csv") {
    SweepResult table;
    if (a.pairs) {
      table.columns = {"source", "target", "fidelity", "product", "path"};
      for (const auto& r : nf.pair_records) {
        table.add_row({static_cast<long long>(r.source), static_cast<long long>(r.target), r.fidelity, r.product,
                       path_string(r.best_path)});
      }
    } else {
      table.columns = {"topology", "scenario", "p", "F_avg_max", "analytic", "abs_diff", "effective_path_length"};
      const auto opt = [](std::optional<double> v) -> Cell { return v ? Cell(*v) : Cell(NotAvailable{}); };
      table.add_row({spec.label(), std::string("A"), opt(p), nf.avg_max_fidelity, opt(closed),
                     closed ? Cell(std::fabs(*closed - nf.avg_max_fidelity)) : Cell(NotAvailable{}),
                     opt(nf.effective_path_length)});
    }
    write_csv(table, out);
    return kOk;
  }

  out << "topology: " << spec.label() << " (N=" << net.node_count() << ", L=" << net.edge_count() << ")\n";
  out << "scenario: A" << (p ? " (p=" + *a.p + ")" : std::string(" (weights from file)")) << '\n';
  out << "F_avg_max: " << fixed6(nf.avg_max_fidelity) << '\n';
  if (closed) {
    out << "analytic: " << to_string(*exact) << " = " << fixed6(*closed)
        << ", diff " << short_g(std::fabs(*closed - nf.avg_max_fidelity)) << '\n';
  } else if (even_ring && p) {
    out << "analytic: counts both paths between opposite nodes; rerun with --averaging max-paths\n";
  }
  if (nf.effective_path_length) out << "effective_path_length: " << fixed6(*nf.effective_path_length) << '\n';
  if (a.pairs) {
    out << "source target fidelity product path\n";
    for (const auto& r : nf.pair_records) {
      out << r.source << ' ' << r.target << ' ' << fixed6(r.fidelity) << ' ' << fixed6(r.product) << ' '
          << path_string(r.best_path) << '\n';
    }
  }
  return kOk;
}

int compute_estimate(const ComputeArgs& a, const TopologySpec& spec, std::ostream& out) {
  const unsigned threads = resolve_thread_option(a.threads);
  EstimateResult r;
  std::string params;
  if (a.scenario == "B") {
    if (!a.p) throw InvalidArgument("--p is required for scenario B");
    const double p = parse_probability(*a.p, "--p");
    PlacementConfig placement;
    placement.mode = a.placement == "sample" ? PlacementMode::kSample : PlacementMode::kExhaustive;
    if (a.samples) placement.sample_count = *a.samples;
    r = run_scenario_B(spec, p, a.m_links, placement, a.seed, threads);
    params = "p=" + *a.p + ", M=" + std::to_string(a.m_links) + ", " + a.placement;
  } else {
    std::size_t n = spec.n;
    if (spec.family == Family::kCustom) n = load_edge_list(spec.path).node_count();
    const std::size_t samples = a.samples.value_or(default_scenario_C_samples(n));
    r = run_scenario_C(spec, samples, a.seed, threads, a.m_links);
    params = "samples=" + std::to_string(samples) + ", seed=" + std::to_string(a.seed) +
             (a.m_links ? ", M=" + std::to_string(a.m_links) : std::string());
  }

  if (a.format == "json") {
    json j{{"topology", spec.label()}, {"scenario", a.scenario}, {"seed", a.seed},
           {"rng", CounterRng::kAlgorithm}};
    if (a.p) j["p"] = parse_probability(*a.p, "--p");
    j["m_links"] = a.m_links;
    j["result"] = estimate_json(r);
    out << j.dump(2) << '\n';
    return kOk;
  }
  if (a.format == "csv") {
    SweepResult table;
    table.columns = {"topology", "scenario", "M", "mean", "std_error", "std_dev", "min", "max", "samples",
                     "analytic"};
    table.add_row({spec.label(), a.scenario, static_cast<long long>(a.m_links), r.mean, r.std_error, r.std_dev,
                   r.min, r.max, static_cast<long long>(r.sample_count),
                   r.analytic ? Cell(*r.analytic) : Cell(NotAvailable{})});
    write_csv(table, out);
    return kOk;
  }
  out << "topology: " << spec.label() << '\n';
  out << "scenario: " << a.scenario << " (" << params << ")\n";
  out << "F_avg_max: " << fixed6(r.mean);
  if (!r.exhaustive) out << " +/- " << short_g(r.std_error) << " (std error)";
  out << '\n';
  out << "min: " << fixed6(r.min) << "  max: " << fixed6(r.max) << "  std_dev: " << short_g(r.std_dev)
      << "  samples: " << r.sample_count << '\n';
  if (a.scenario == "B") {
    if (r.analytic) {
      out << "analytic: " << fixed6(*r.analytic) << ", diff " << short_g(std::fabs(*r.analytic - r.mean)) << '\n';
    } else {
      out << "analytic: none (numeric-only)\n";
    }
  } else {
    out << "rng: " << CounterRng::kAlgorithm << '\n';
  }
  return kOk;
}

int cmd_compute(const ComputeArgs& a, std::ostream& out) {
  const TopologySpec spec = a.topology.spec();
  if (a.scenario == "A") return compute_scenario_A(a, spec, out);
  if (a.pairs) throw InvalidArgument("--pairs is only available for scenario A");
  return compute_estimate(a, spec, out);
}

// ---------------------------------------------------------------------------
// sweep

struct SweepArgs {
  std::string kind;
  std::string preset;
  TopologyArgs topology;
  std::string scenario = "B";
  std::optional<std::string> p;
  std::optional<double> m;
  double p_min = 0.0;
  double p_max = 1.0;
  std::size_t p_steps = 101;
  std::size_t m_steps = 101;
  std::string n_list;
  std::size_t numeric_max_n = 0;
  double alpha = 0.46;
  double p_det = 1.0;
  double d_min = 30.0;
  double d_max = 150.0;
  double d_step = 10.0;
  std::string placement = "exhaustive";
  std::optional<std::size_t> samples;
  std::uint64_t seed = 0;
  std::string averaging = "pairs";
  std::string out_path;
  bool no_timestamp = false;
  std::optional<unsigned> threads;
};

const std::vector<std::string> kTopologyColumns{"topology", "n", "k"};

std::vector<Cell> topology_cells(const TopologySpec& s) {
  return {to_string(s.family), static_cast<long long>(s.n),
          s.family == Family::kFlower ? Cell(static_cast<long long>(s.k)) : Cell(NotAvailable{})};
}

/// Prefixes every row of `r` with the topology columns of `spec`.
SweepResult with_topology(const SweepResult& r, const TopologySpec& spec) {
  SweepResult out;
  out.columns = kTopologyColumns;
  out.columns.insert(out.columns.end(), r.columns.begin(), r.columns.end());
  for (const auto& row : r.rows) {
    auto cells = topology_cells(spec);
    cells.insert(cells.end(), row.begin(), row.end());
    out.add_row(std::move(cells));
  }
  return out;
}

void merge(std::optional<SweepResult>& acc, const SweepResult& part) {
  if (!acc) {
    acc = part;
  } else {
    acc->append(part);
  }
}

SweepResult sweep_p(const std::vector<TopologySpec>& specs, const std::vector<double>& grid, Averaging averaging) {
  SweepResult out;
  out.columns = kTopologyColumns;
  for (const char* c : {"p", "F_avg_max", "analytic", "abs_diff"}) out.columns.emplace_back(c);
  for (const auto& spec : specs) {
    for (double p : grid) {
      const auto r = run_scenario_A(spec, p, {.averaging = averaging, .pair_records = false});
      auto row = topology_cells(spec);
      row.push_back(p);
      row.push_back(r.engine.avg_max_fidelity);
      row.push_back(r.analytic ? Cell(*r.analytic) : Cell(NotAvailable{}));
      row.push_back(r.abs_diff ? Cell(*r.abs_diff) : Cell(NotAvailable{}));
      out.add_row(std::move(row));
    }
  }
  return out;
}

struct MSweepConfig {
  std::string scenario;  // "B" or "C"
  double p = 0.5;
  PlacementConfig placement;
  std::size_t c_samples = 0;  // 0: default for N
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

SweepResult sweep_m(const std::vector<TopologySpec>& specs, const MSweepConfig& cfg) {
  SweepResult out;
  out.columns = {"scenario"};
  out.columns.insert(out.columns.end(), kTopologyColumns.begin(), kTopologyColumns.end());
  for (const char* c : {"p", "M", "m", "avg_path_length", "F_avg_max", "analytic", "abs_diff", "std_error",
                        "std_dev", "min", "max", "samples", "source"}) {
    out.columns.emplace_back(c);
  }
  for (const auto& spec : specs) {
    const Network shape = generate(spec, UniformWeight{0.5});
    const double avg_path = effective_path_length(shape);
    const std::size_t links = shape.edge_count();
    for (std::size_t m = 0; m <= links; ++m) {
      EstimateResult r;
      std::string source;
      if (cfg.scenario == "B") {
        PlacementConfig placement = cfg.placement;
        if (placement.mode == PlacementMode::kExhaustive && combination_count(links, m) > placement.exhaustive_cap) {
          placement.mode = PlacementMode::kSample;
        }
        r = run_scenario_B(spec, cfg.p, m, placement, cfg.seed, cfg.threads);
        source = r.exhaustive ? "exhaustive" : "sampled";
      } else {
        const std::size_t samples = cfg.c_samples ? cfg.c_samples : default_scenario_C_samples(shape.node_count());
        r = run_scenario_C(spec, samples, cfg.seed, cfg.threads, m);
        source = "sampled";
      }
      auto row = std::vector<Cell>{cfg.scenario};
      const auto topo = topology_cells(spec);
      row.insert(row.end(), topo.begin(), topo.end());
      row.push_back(cfg.scenario == "B" ? Cell(cfg.p) : Cell(NotAvailable{}));
      row.push_back(static_cast<long long>(m));
      row.push_back(static_cast<double>(m) / static_cast<double>(links));
      row.push_back(avg_path);
      row.push_back(r.mean);
      row.push_back(r.analytic ? Cell(*r.analytic) : Cell(NotAvailable{}));
      row.push_back(r.analytic ? Cell(std::fabs(*r.analytic - r.mean)) : Cell(NotAvailable{}));
      row.push_back(r.std_error);
      row.push_back(r.std_dev);
      row.push_back(r.min);
      row.push_back(r.max);
      row.push_back(static_cast<long long>(r.sample_count));
      row.push_back(source);
      out.add_row(std::move(row));
    }
  }
  return out;
}

std::vector<std::size_t> parse_n_list(const std::string& text, std::vector<std::size_t> fallback) {
  if (text.empty()) return fallback;
  std::vector<std::size_t> out;
  for (double v : parse_list(text)) {
    if (v < 2 || v != std::floor(v)) throw InvalidArgument("node counts must be integers >= 2");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

std::vector<double> distance_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || hi < lo) throw InvalidArgument("bad distance range");
  std::vector<double> d;
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  for (std::size_t i = 0; i < count; ++i) d.push_back(lo + step * static_cast<double>(i));
  return d;
}

SweepResult sweep_pm(const std::vector<TopologySpec>& specs, const SweepArgs& a, unsigned threads) {
  const auto p_grid = linear_grid(a.p_min, a.p_max, a.p_steps);
  const auto m_grid = linear_grid(0.0, 1.0, a.m_steps);
  AdvantageOptions opt;
  opt.placement.mode = a.placement == "sample" ? PlacementMode::kSample : PlacementMode::kExhaustive;
  opt.placement.sample_count = a.samples.value_or(200);
  opt.seed = a.seed;
  opt.threads = threads;
  std::optional<SweepResult> acc;
  for (const auto& spec : specs) merge(acc, with_topology(advantage_region(spec, p_grid, m_grid, opt), spec));
  return *acc;
}

SweepResult sweep_n(const std::vector<Family>& families, const std::vector<std::pair<double, double>>& cases,
                    const std::vector<std::size_t>& n_list, const SweepArgs& a, unsigned threads) {
  LargeNOptions opt;
  opt.numeric_max_n = a.numeric_max_n;
  opt.numeric_samples = a.samples.value_or(20);
  opt.seed = a.seed;
  opt.threads = threads;
  std::optional<SweepResult> acc;
  for (Family f : families) {
    for (const auto& [p, m] : cases) merge(acc, large_N_sweep(f, p, m, n_list, opt, a.topology.k));
  }
  return *acc;
}

std::vector<TopologySpec> user_specs(const SweepArgs& a) {
  if (a.topology.family.empty() && a.topology.graph.empty()) {
    throw InvalidArgument("--family (or --graph) is required for this sweep");
  }
  return {a.topology.spec()};
}

SweepResult run_sweep(const SweepArgs& a, unsigned threads) {
  const Averaging averaging = a.averaging == "max-paths" ? Averaging::kPerMaxPath : Averaging::kPerPair;
  const auto p_value = [&](double fallback) { return a.p ? parse_probability(*a.p, "--p") : fallback; };
  MSweepConfig mcfg;
  mcfg.placement.mode = a.placement == "sample" ? PlacementMode::kSample : PlacementMode::kExhaustive;
  mcfg.placement.sample_count = a.samples.value_or(1000);
  mcfg.c_samples = a.samples.value_or(0);
  mcfg.seed = a.seed;
  mcfg.threads = threads;

  const auto family_list = [&](std::vector<TopologySpec> defaults) {
    if (!a.topology.family.empty() || !a.topology.graph.empty()) return user_specs(a);
    return defaults;
  };
  const std::size_t n_or = a.topology.n;
  const auto fig_specs = [&](std::size_t n, std::size_t k_mid) {
    return family_list({TopologySpec::chain(n), TopologySpec::flower(n, k_mid), TopologySpec::star(n)});
  };

  if (!a.preset.empty()) {
    if (a.preset == "fig2") {
      const std::size_t n = n_or ? n_or : 7;
      std::vector<TopologySpec> specs{TopologySpec::chain(n)};
      for (std::size_t k = 1; k + 3 < n; ++k) specs.push_back(TopologySpec::flower(n, k));
      specs.push_back(TopologySpec::star(n));
      specs = family_list(specs);
      mcfg.scenario = "B";
      mcfg.p = p_value(0.5);
      SweepResult out = sweep_m(specs, mcfg);
      // Scenario C reference points (M = 0 rows only).
      mcfg.scenario = "C";
      for (const auto& spec : specs) {
        SweepResult c = sweep_m({spec}, mcfg);
        c.rows.resize(1);
        out.append(c);
      }
      return out;
    }
    if (a.preset == "fig3a") {
      return sweep_p(fig_specs(n_or ? n_or : 10, 3), linear_grid(a.p_min, a.p_max, a.p_steps), averaging);
    }
    if (a.preset == "fig3b") {
      mcfg.scenario = "B";
      mcfg.p = p_value(0.5);
      return sweep_m(fig_specs(n_or ? n_or : 10, 3), mcfg);
    }
    if (a.preset == "fig3c") {
      mcfg.scenario = "C";
      return sweep_m(fig_specs(n_or ? n_or : 10, 3), mcfg);
    }
    if (a.preset == "fig3def") {
      const std::size_t n = n_or ? n_or : 100;
      return sweep_pm(fig_specs(n, n >= 52 ? 48 : (n - 3) / 2), a, threads);
    }
    if (a.preset == "fig4") {
      std::vector<Family> families{Family::kChain, Family::kStar};
      if (!a.topology.family.empty()) families = {parse_family(a.topology.family)};
      std::vector<std::pair<double, double>> cases{{0.5, 0.6}, {0.9, 0.6}, {0.5, 0.5}, {0.5, 0.9}};
      if (a.p || a.m) cases = {{p_value(0.5), a.m.value_or(0.6)}};
      const auto ns = parse_n_list(a.n_list, {10, 20, 50, 100, 200, 500, 1000});
      return sweep_n(families, cases, ns, a, threads);
    }
    if (a.preset == "fig5") {
      const std::size_t n = n_or ? n_or : 8;
      const auto specs = family_list(
          {TopologySpec::chain(n), TopologySpec::star(n), TopologySpec::ring(n), TopologySpec::complete(n)});
      return decoherence_sweep(specs, a.alpha, a.p_det, distance_grid(a.d_min, a.d_max, a.d_step));
    }
    throw InvalidArgument("unknown preset '" + a.preset + "'");
  }

  if (a.kind == "p") return sweep_p(user_specs(a), linear_grid(a.p_min, a.p_max, a.p_steps), averaging);
  if (a.kind == "m") {
    mcfg.scenario = a.scenario;
    if (mcfg.scenario != "B" && mcfg.scenario != "C") throw InvalidArgument("--scenario must be B or C for kind m");
    mcfg.p = p_value(0.5);
    return sweep_m(user_specs(a), mcfg);
  }
  if (a.kind == "N") {
    if (a.topology.family.empty()) throw InvalidArgument("--family is required for kind N");
    const auto ns = parse_n_list(a.n_list, {10, 20, 50, 100, 200, 500, 1000});
    return sweep_n({parse_family(a.topology.family)}, {{p_value(0.5), a.m.value_or(0.0)}}, ns, a, threads);
  }
  if (a.kind == "d") {
    const std::size_t n = n_or ? n_or : 8;
    std::vector<TopologySpec> specs{TopologySpec::chain(n), TopologySpec::star(n), TopologySpec::ring(n),
                                    TopologySpec::complete(n)};
    if (!a.topology.family.empty()) {
      TopologyArgs t = a.topology;
      t.n = n;
      specs = {t.spec()};
    }
    return decoherence_sweep(specs, a.alpha, a.p_det, distance_grid(a.d_min, a.d_max, a.d_step));
  }
  if (a.kind == "pm-grid") return sweep_pm(user_specs(a), a, threads);
  throw InvalidArgument("one of --kind or --preset is required");
}

int cmd_sweep(const SweepArgs& a, const std::vector<std::string>& argv, std::ostream& out) {
  const unsigned threads = resolve_thread_option(a.threads);
  SweepResult result = run_sweep(a, threads);
  result.metadata.command_line = join_args(argv);
  result.metadata.seed = a.seed;
  result.metadata.version = kVersion;
  result.metadata.rng_algorithm = CounterRng::kAlgorithm;
  if (!a.no_timestamp) result.metadata.timestamp = iso_timestamp();

  if (a.out_path.empty()) {
    write_csv(result, out);
    return kOk;
  }
  write_atomically(a.out_path, [&](std::ostream& os) { write_csv(result, os); });
  json meta{{"command_line", result.metadata.command_line},
            {"seed", result.metadata.seed},
            {"version", result.metadata.version},
            {"rng", result.metadata.rng_algorithm},
            {"kind", a.preset.empty() ? a.kind : "preset:" + a.preset},
            {"rows", result.rows.size()},
            {"columns", result.columns},
            {"timestamp", result.metadata.timestamp ? json(*result.metadata.timestamp) : json(nullptr)}};
  write_atomically(a.out_path + ".meta.json", [&](std::ostream& os) { os << meta.dump(2) << '\n'; });
  out << "wrote " << result.rows.size() << " rows to " << a.out_path << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Average maximum teleportation fidelity of Werner-state repeater networks", "qnetfid"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  GenerateArgs gen;
  auto* generate_cmd = app.add_subcommand("generate", "Write a canonical topology as an edge list");
  gen.topology.attach(*generate_cmd, false);
  generate_cmd->add_option("--p", gen.p, "Uniform link weight (non-ME weight with --me-mask)");
  generate_cmd->add_option("--weights", gen.weights, "Comma-separated weight per link");
  generate_cmd->add_option("--me-mask", gen.me_mask, "Comma-separated 0/1 per link; 1 marks an ME link");
  generate_cmd->add_option("-o,--out", gen.out_path, "Output file (default: stdout)");

  ComputeArgs comp;
  auto* compute_cmd = app.add_subcommand("compute", "Average maximum fidelity of one network");
  comp.topology.attach(*compute_cmd, true);
  compute_cmd->add_option("--scenario", comp.scenario, "A, B or C")->check(CLI::IsMember({"A", "B", "C"}));
  compute_cmd->add_option("--p", comp.p, "Link weight (scenario A, non-ME weight in B)");
  compute_cmd->add_option("--m-links", comp.m_links, "Number of ME links (B; optional in C)");
  compute_cmd->add_option("--placement", comp.placement, "exhaustive or sample")
      ->check(CLI::IsMember({"exhaustive", "sample"}));
  compute_cmd->add_option("--samples", comp.samples, "Monte Carlo / placement samples")->check(CLI::PositiveNumber);
  compute_cmd->add_option("--seed", comp.seed, "RNG seed");
  compute_cmd->add_flag("--pairs", comp.pairs, "Print the per-pair table");
  compute_cmd->add_flag("--eff-length", comp.eff_length, "Print the effective path length");
  compute_cmd->add_option("--averaging", comp.averaging, "pairs or max-paths")
      ->check(CLI::IsMember({"pairs", "max-paths"}));
  compute_cmd->add_option("--format", comp.format, "text, json or csv")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  compute_cmd->add_option("--threads", comp.threads, "Worker threads (0 = auto)");

  SweepArgs sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "Parameter sweeps as CSV");
  sw.topology.attach(*sweep_cmd, true);
  sweep_cmd->add_option("--kind", sw.kind, "p, m, N, d or pm-grid")
      ->check(CLI::IsMember({"p", "m", "N", "d", "pm-grid"}));
  sweep_cmd->add_option("--preset", sw.preset, "fig2, fig3a, fig3b, fig3c, fig3def, fig4 or fig5")
      ->check(CLI::IsMember({"fig2", "fig3a", "fig3b", "fig3c", "fig3def", "fig4", "fig5"}));
  sweep_cmd->add_option("--scenario", sw.scenario, "B or C (kind m)")->check(CLI::IsMember({"B", "C"}));
  sweep_cmd->add_option("--p", sw.p, "Link weight");
  sweep_cmd->add_option("--m", sw.m, "Fraction of ME links (kind N)")->check(CLI::Range(0.0, 1.0));
  sweep_cmd->add_option("--p-min", sw.p_min)->check(CLI::Range(0.0, 1.0));
  sweep_cmd->add_option("--p-max", sw.p_max)->check(CLI::Range(0.0, 1.0));
  sweep_cmd->add_option("--p-steps", sw.p_steps)->check(CLI::Range(2, 100000));
  sweep_cmd->add_option("--m-steps", sw.m_steps)->check(CLI::Range(2, 100000));
  sweep_cmd->add_option("--n-list", sw.n_list, "Comma-separated node counts (kind N)");
  sweep_cmd->add_option("--numeric-max-n", sw.numeric_max_n, "Add sampled engine points up to this N (kind N)");
  sweep_cmd->add_option("--alpha", sw.alpha, "Fibre attenuation, dB/km")->check(CLI::NonNegativeNumber);
  sweep_cmd->add_option("--p-det", sw.p_det, "Detection probability")->check(CLI::Range(0.0, 1.0));
  sweep_cmd->add_option("--d-min", sw.d_min)->check(CLI::NonNegativeNumber);
  sweep_cmd->add_option("--d-max", sw.d_max)->check(CLI::NonNegativeNumber);
  sweep_cmd->add_option("--d-step", sw.d_step)->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--placement", sw.placement, "exhaustive or sample")
      ->check(CLI::IsMember({"exhaustive", "sample"}));
  sweep_cmd->add_option("--samples", sw.samples, "Samples per point")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--seed", sw.seed, "RNG seed");
  sweep_cmd->add_option("--averaging", sw.averaging, "pairs or max-paths")
      ->check(CLI::IsMember({"pairs", "max-paths"}));
  sweep_cmd->add_option("-o,--out", sw.out_path, "Output CSV (default: stdout)");
  sweep_cmd->add_flag("--no-timestamp", sw.no_timestamp, "Leave the timestamp out of the metadata");
  sweep_cmd->add_option("--threads", sw.threads, "Worker threads (0 = auto)");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (generate_cmd->parsed()) return cmd_generate(gen, out);
    if (compute_cmd->parsed()) return cmd_compute(comp, out);
    if (sweep_cmd->parsed()) return cmd_sweep(sw, args, out);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const GraphError& e) {
    err << "error: " << e.what() << '\n';
    return kGraph;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace qnetfid::cli
