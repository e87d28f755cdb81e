// Python bindings for the qgraph core.

#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qgraph/io.hpp"
#include "qgraph/secular.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace qgraph;

namespace {

TopologyClass class_named(const std::string& name) {
  const auto c = topology_from_string(name);
  if (!c) throw py::value_error("unknown topology class '" + name + "'");
  return *c;
}

GraphSpec make_graph(const std::vector<std::pair<double, double>>& positions,
                     const std::vector<std::pair<int, int>>& adjacency, const std::vector<double>& potentials,
                     const std::string& topology) {
  std::vector<Vec2> pos;
  for (const auto& [x, y] : positions) pos.push_back({x, y});
  std::optional<TopologyClass> declared;
  if (!topology.empty()) declared = class_named(topology);
  return build_graph(pos, adjacency, declared, potentials);
}

py::dict tensors_dict(const TensorSet& t) {
  return py::dict("beta"_a = py::dict("xxx"_a = t.beta.xxx, "xxy"_a = t.beta.xxy, "xyy"_a = t.beta.xyy,
                                      "yyy"_a = t.beta.yyy),
                  "gamma"_a = py::dict("xxxx"_a = t.gamma.xxxx, "xxxy"_a = t.gamma.xxxy, "xxyy"_a = t.gamma.xxyy,
                                       "xyyy"_a = t.gamma.xyyy, "yyyy"_a = t.gamma.yyyy),
                  "beta_norm"_a = t.beta_norm, "gamma_norm"_a = t.gamma_norm, "phi_star"_a = t.beta_best.angle,
                  "beta_xxx_max"_a = t.beta_best.value, "gamma_xxxx_max"_a = t.gamma_best.value,
                  "gamma_xxxx_min"_a = t.gamma_worst.value, "states"_a = t.states, "converged"_a = t.converged);
}

}  // namespace

PYBIND11_MODULE(_qgraph, m) {
  m.doc() = "Spectra, transition moments and hyperpolarizabilities of planar quantum graphs";
  m.attr("__version__") = kVersion;

  py::class_<GraphSpec>(m, "Graph")
      .def(py::init(&make_graph), "positions"_a, "adjacency"_a, "potentials"_a = std::vector<double>{},
           "topology"_a = std::string())
      .def_static(
          "from_json", [](const std::string& text) { return graph_from_json(nlohmann::json::parse(text)); },
          "text"_a)
      .def_static("load", &load_graph, "path"_a)
      .def("to_json", [](const GraphSpec& g) { return to_json(g).dump(); })
      .def_property_readonly("topology", [](const GraphSpec& g) { return std::string(to_string(g.topology_class())); })
      .def_property_readonly("positions",
                             [](const GraphSpec& g) {
                               std::vector<std::pair<double, double>> out;
                               for (const auto& p : g.positions()) out.emplace_back(p.x, p.y);
                               return out;
                             })
      .def_property_readonly("adjacency", &GraphSpec::adjacency)
      .def_property_readonly("potentials", &GraphSpec::potentials)
      .def_property_readonly("edge_lengths",
                             [](const GraphSpec& g) {
                               std::vector<double> out;
                               for (const auto& e : g.edges()) out.push_back(e.length);
                               return out;
                             })
      .def_property_readonly("total_length", &GraphSpec::total_length)
      .def_property_readonly("closed", &GraphSpec::closed)
      .def("rotated", &GraphSpec::rotated, "alpha"_a)
      .def("translated",
           [](const GraphSpec& g, double dx, double dy) { return g.translated({dx, dy}); }, "dx"_a, "dy"_a)
      .def("__repr__", [](const GraphSpec& g) {
        return "<Graph " + std::string(to_string(g.topology_class())) + ", " + std::to_string(g.vertex_count()) +
               " vertices, " + std::to_string(g.edge_count()) + " edges>";
      });

  m.def("topology_classes", [] {
    std::vector<std::string> out;
    for (const auto c : all_topology_classes()) out.emplace_back(to_string(c));
    return out;
  });

  m.def(
      "sample_graph",
      [](const std::string& topology, std::uint64_t seed, std::uint64_t id) {
        auto rng = sample_rng(seed, id);
        return sample_graph(class_named(topology), rng);
      },
      "topology"_a, "seed"_a = 1, "id"_a = 0);

  m.def(
      "spectrum",
      [](const GraphSpec& g, int states) {
        SpectralOptions o;
        o.states = states;
        const auto sol = solve_spectrum(g, o);
        py::list out;
        for (const auto& st : sol.states) {
          out.append(py::dict("k"_a = st.k, "energy"_a = st.energy, "bound"_a = st.bound,
                              "family"_a = to_string(st.family), "multiplicity"_a = st.multiplicity));
        }
        return out;
      },
      "graph"_a, "states"_a = 30);

  m.def(
      "moments",
      [](const GraphSpec& g, int states) {
        SpectralOptions o;
        o.states = states;
        const auto t = transition_moments(g, solve_states(g, o));
        return py::dict("x"_a = t.x(), "y"_a = t.y(), "energies"_a = t.energies());
      },
      "graph"_a, "states"_a = 30, "Position matrices and energies of the lowest states.");

  m.def(
      "tensors",
      [](const GraphSpec& g, int states) {
        SpectralOptions o;
        o.states = states;
        const auto t = transition_moments(g, solve_states(g, o));
        const auto ts = compute_tensors(t, states);
        auto d = tensors_dict(ts);
        const auto three = three_level(t, ts.beta_best.angle);
        d["three_level"] = py::dict("e_ratio"_a = three.e_ratio, "x_ratio"_a = three.x_ratio,
                                    "beta_3l"_a = three.beta_3l, "extreme"_a = three.extreme);
        d["sum_rule_00"] = truncated_sum_rule(t, 0, 0, ts.states, Channel2D::combined);
        return d;
      },
      "graph"_a, "states"_a = 30);

  m.def(
      "ensemble",
      [](const std::string& topology, int samples, std::uint64_t seed, int states, int threads) {
        EnsembleOptions o;
        o.samples = samples;
        o.seed = seed;
        o.states = states;
        o.threads = threads;
        const auto c = class_named(topology);
        std::vector<EnsembleRecord> recs;
        {
          py::gil_scoped_release release;
          recs = sample_topology(c, o);
        }
        return summarize(c, recs).to_json().dump();
      },
      "topology"_a, "samples"_a = 1000, "seed"_a = 1, "states"_a = 30, "threads"_a = 1,
      "Summary of a Monte Carlo ensemble as a JSON string.");

  m.def(
      "delta_wire",
      [](double g, double s0, double length, int states) {
        const auto p = delta_wire_point(length, g, s0, states);
        return py::dict("ok"_a = p.ok, "beta"_a = p.beta, "beta_3l"_a = p.beta_3l, "extreme"_a = p.extreme,
                        "e_ratio"_a = p.e_ratio, "x_ratio"_a = p.x_ratio, "sum_rule"_a = p.sum_rule);
      },
      "g"_a, "s0"_a, "length"_a = 1.0, "states"_a = 30);

  m.def("secular_3star", &secular_3star, "a"_a, "b"_a, "c"_a, "k"_a);
  m.def("extreme_f", &extreme_f, "e"_a);
  m.def("extreme_g", &extreme_g, "x"_a);
}
