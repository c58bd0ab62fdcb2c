#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "qnetfid/analytic.hpp"
#include "qnetfid/error.hpp"
#include "qnetfid/fidelity.hpp"
#include "qnetfid/network.hpp"
#include "qnetfid/scenarios.hpp"
#ifdef QNETFID_HAS_CLI
#include "cli.hpp"
#endif

namespace py = pybind11;
using namespace qnetfid;

namespace {

TopologySpec make_spec(const std::string& family, std::size_t n, std::size_t k) {
  TopologySpec s{parse_family(family), n, k, {}};
  if (s.family == Family::kCustom) throw InvalidArgument("custom topologies are loaded with load_edge_list");
  s.validate();
  return s;
}

py::dict pair_dict(const PairFidelity& r) {
  py::dict d;
  d["source"] = r.source;
  d["target"] = r.target;
  d["path"] = r.best_path;
  d["product"] = r.product;
  d["fidelity"] = r.fidelity;
  d["max_path_count"] = r.max_path_count;
  return d;
}

py::dict estimate_dict(const EstimateResult& r) {
  py::dict d;
  d["mean"] = r.mean;
  d["std_error"] = r.std_error;
  d["std_dev"] = r.std_dev;
  d["min"] = r.min;
  d["max"] = r.max;
  d["sample_count"] = r.sample_count;
  d["exhaustive"] = r.exhaustive;
  d["min_pair_fidelity"] = r.min_pair_fidelity;
  d["max_pair_fidelity"] = r.max_pair_fidelity;
  d["analytic"] = r.analytic ? py::cast(*r.analytic) : py::none();
  return d;
}

Averaging parse_averaging(const std::string& s) {
  if (s == "pairs") return Averaging::kPerPair;
  if (s == "max-paths") return Averaging::kPerMaxPath;
  throw InvalidArgument("averaging must be 'pairs' or 'max-paths'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Max-product fidelity engine, closed forms and scenario runners";
  m.attr("__version__") = QNETFID_VERSION;

  py::register_exception<GraphError>(m, "GraphError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<CapExceeded>(m, "CapExceeded", PyExc_ValueError);

  py::class_<Network>(m, "Network")
      .def(py::init([](std::size_t n, const std::vector<std::tuple<NodeId, NodeId, double>>& edges) {
             std::vector<Edge> e;
             for (const auto& [u, v, p] : edges) e.push_back({u, v, p});
             return Network(n, std::move(e));
           }),
           py::arg("node_count"), py::arg("edges"))
      .def_property_readonly("node_count", &Network::node_count)
      .def_property_readonly("edge_count", &Network::edge_count)
      .def_property_readonly("edges",
                             [](const Network& net) {
                               std::vector<std::tuple<NodeId, NodeId, double>> out;
                               for (const Edge& e : net.edges()) out.emplace_back(e.u, e.v, e.p);
                               return out;
                             })
      .def("weights", &Network::weights)
      .def("with_weights", &Network::with_weights, py::arg("weights"))
      .def("degree_sequence", &Network::degree_sequence)
      .def("is_tree", &Network::is_tree)
      .def("hop_diameter", &Network::hop_diameter)
      .def("__eq__", [](const Network& a, const Network& b) { return a == b; })
      .def("__repr__", [](const Network& net) {
        return "<Network nodes=" + std::to_string(net.node_count()) + " links=" + std::to_string(net.edge_count()) +
               ">";
      });

  m.def(
      "generate",
      [](const std::string& family, std::size_t n, std::optional<double> p, std::size_t k,
         std::optional<std::vector<double>> weights, std::optional<std::vector<bool>> me_mask) {
        const TopologySpec spec = make_spec(family, n, k);
        if (weights) return generate(spec, WeightList{*weights});
        if (!p) throw InvalidArgument("p or weights is required");
        if (me_mask) return generate(spec, MeMask{*me_mask, *p});
        return generate(spec, UniformWeight{*p});
      },
      py::arg("family"), py::arg("n"), py::arg("p") = py::none(), py::arg("k") = 0, py::arg("weights") = py::none(),
      py::arg("me_mask") = py::none());
  m.def("load_edge_list", &load_edge_list, py::arg("path"));
  m.def("save_edge_list", &save_edge_list, py::arg("network"), py::arg("path"));

  m.def(
      "average_max_fidelity",
      [](const Network& net, const std::string& averaging, bool pairs, bool eff_length) {
        const auto r = average_max_fidelity(net, {.averaging = parse_averaging(averaging),
                                                  .pair_records = pairs,
                                                  .effective_path_length = eff_length});
        py::dict d;
        d["F_avg_max"] = r.avg_max_fidelity;
        d["min_pair_fidelity"] = r.min_pair_fidelity;
        d["max_pair_fidelity"] = r.max_pair_fidelity;
        d["effective_path_length"] = r.effective_path_length ? py::cast(*r.effective_path_length) : py::none();
        py::list records;
        for (const auto& rec : r.pair_records) records.append(pair_dict(rec));
        d["pairs"] = records;
        return d;
      },
      py::arg("network"), py::arg("averaging") = "pairs", py::arg("pairs") = false,
      py::arg("effective_path_length") = false);
  m.def(
      "pair_max_fidelity", [](const Network& net, NodeId s, NodeId t) { return pair_dict(pair_max_fidelity(net, s, t)); },
      py::arg("network"), py::arg("source"), py::arg("target"));
  m.def(
      "brute_force_pair_fidelity",
      [](const Network& net, NodeId s, NodeId t, std::size_t cap) {
        return pair_dict(brute_force_pair_fidelity(net, s, t, cap));
      },
      py::arg("network"), py::arg("source"), py::arg("target"), py::arg("node_cap") = 10);
  m.def("effective_path_length", &effective_path_length, py::arg("network"));

  m.def(
      "scenario_A",
      [](const std::string& family, std::size_t n, double p, std::size_t k) {
        return analytic::scenario_A(make_spec(family, n, k), p);
      },
      py::arg("family"), py::arg("n"), py::arg("p"), py::arg("k") = 0);
  m.def(
      "scenario_A_exact",
      [](const std::string& family, std::size_t n, const std::string& p, std::size_t k) -> std::optional<std::string> {
        const auto r = analytic::scenario_A_exact(make_spec(family, n, k), parse_rational(p));
        if (!r) return std::nullopt;
        return to_string(*r);
      },
      py::arg("family"), py::arg("n"), py::arg("p"), py::arg("k") = 0);
  m.def(
      "scenario_B",
      [](const std::string& family, std::size_t n, std::size_t m_links, double p, std::size_t k) {
        return analytic::scenario_B(make_spec(family, n, k), m_links, p);
      },
      py::arg("family"), py::arg("n"), py::arg("m_links"), py::arg("p"), py::arg("k") = 0);
  m.def(
      "scenario_B_exact",
      [](const std::string& family, std::size_t n, std::size_t m_links, const std::string& p,
         std::size_t k) -> std::optional<std::string> {
        const auto r = analytic::scenario_B_exact(make_spec(family, n, k), m_links, parse_rational(p));
        if (!r) return std::nullopt;
        return to_string(*r);
      },
      py::arg("family"), py::arg("n"), py::arg("m_links"), py::arg("p"), py::arg("k") = 0);

  m.def(
      "run_scenario_B",
      [](const std::string& family, std::size_t n, double p, std::size_t m_links, std::size_t k,
         const std::string& placement, std::size_t samples, std::uint64_t seed, unsigned threads) {
        PlacementConfig cfg;
        cfg.mode = placement == "sample" ? PlacementMode::kSample : PlacementMode::kExhaustive;
        cfg.sample_count = samples;
        EstimateResult r;
        {
          py::gil_scoped_release release;
          r = run_scenario_B(make_spec(family, n, k), p, m_links, cfg, seed, threads);
        }
        return estimate_dict(r);
      },
      py::arg("family"), py::arg("n"), py::arg("p"), py::arg("m_links"), py::arg("k") = 0,
      py::arg("placement") = "exhaustive", py::arg("samples") = 1000, py::arg("seed") = 0, py::arg("threads") = 1);
  m.def(
      "run_scenario_C",
      [](const std::string& family, std::size_t n, std::size_t samples, std::uint64_t seed, unsigned threads,
         std::size_t m_links, std::size_t k) {
        EstimateResult r;
        {
          py::gil_scoped_release release;
          r = run_scenario_C(make_spec(family, n, k), samples, seed, threads, m_links);
        }
        return estimate_dict(r);
      },
      py::arg("family"), py::arg("n"), py::arg("samples"), py::arg("seed") = 0, py::arg("threads") = 1,
      py::arg("m_links") = 0, py::arg("k") = 0);
  m.def(
      "decoherence_weight",
      [](double alpha, double p_det, double d) { return decoherence_weight({alpha, p_det, d}); }, py::arg("alpha"),
      py::arg("p_det"), py::arg("distance_km"));

  m.def(
      "cli",
      [](const std::vector<std::string>& args) {
#ifdef QNETFID_HAS_CLI
        std::vector<std::string> argv{"qnetfid"};
        argv.insert(argv.end(), args.begin(), args.end());
        std::ostringstream out, err;
        const int code = cli::run(argv, out, err);
        return py::make_tuple(code, out.str(), err.str());
#else
        (void)args;
        throw std::runtime_error("built without the command-line interface");
#endif
      },
      py::arg("args"), "Runs the command-line tool in-process; returns (exit_code, stdout, stderr).");
}
