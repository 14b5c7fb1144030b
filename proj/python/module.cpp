#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "genwag/chain.hpp"
#include "genwag/errors.hpp"
#include "genwag/conditions.hpp"
#include "genwag/game.hpp"
#include "genwag/graphs.hpp"
#include "genwag/search.hpp"

namespace py = pybind11;
using namespace genwag;

namespace {

std::string classify_json(const Game& g) {
  return classify(g).to_json(g).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Path structure of best-response, better-response and satisficing "
            "graphs of finite normal-form games";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<ResourceError>(m, "ResourceError", PyExc_RuntimeError);

  py::class_<Game>(m, "Game")
      .def_static("from_json", &Game::from_json_text, py::arg("text"))
      .def_property_readonly("num_players", &Game::num_players)
      .def_property_readonly("action_counts", &Game::action_counts)
      .def_property_readonly("num_profiles", &Game::num_profiles)
      .def("to_json", [](const Game& g) { return g.to_json().dump(); })
      .def("flat_index", &Game::flat_index)
      .def("profile_at", &Game::profile_at)
      .def("profile_label", &Game::profile_label)
      .def("payoff",
           [](const Game& g, int player, const ActionProfile& profile) {
             return rational_to_string(g.payoff(player, profile));
           })
      .def("payoff_float",
           [](const Game& g, int player, const ActionProfile& profile) {
             return rational_to_double(g.payoff(player, profile));
           })
      .def("best_responses", &Game::best_responses)
      .def("better_responses", &Game::better_responses)
      .def("satisfied_set", &Game::satisfied_set)
      .def("pure_nash", &Game::enumerate_pure_nash)
      .def("is_strict_pure_nash", &Game::is_strict_pure_nash);

  m.def("named_example", &named_example, py::arg("name"));
  m.def("named_example_list", &named_example_list);

  m.def("classify", &classify_json, py::arg("game"),
        "Full classification report as a JSON string.");
  m.def(
      "graph_edges",
      [](const Game& g, const std::string& kind) {
        ResponseGraph graph = build_graph(g, parse_graph_kind(kind));
        std::vector<std::pair<FlatIndex, FlatIndex>> edges;
        for (FlatIndex a = 0; a < g.num_profiles(); ++a)
          for (FlatIndex b : graph.adj[a]) edges.emplace_back(a, b);
        return edges;
      },
      py::arg("game"), py::arg("kind"));
  m.def(
      "export_dot",
      [](const Game& g, const std::string& kind) {
        return export_dot(g, build_graph(g, parse_graph_kind(kind)));
      },
      py::arg("game"), py::arg("kind"));
  m.def(
      "witness_path",
      [](const Game& g, const std::string& kind, FlatIndex start)
          -> std::optional<std::vector<FlatIndex>> {
        return witness_path(g, parse_graph_kind(kind), start);
      },
      py::arg("game"), py::arg("kind"), py::arg("start"));

  m.def(
      "simulate",
      [](const Game& g, FlatIndex start, int steps, std::uint64_t seed) {
        return simulate(g, start, steps, seed).profiles;
      },
      py::arg("game"), py::arg("start"), py::arg("steps"), py::arg("seed"));
  m.def(
      "transition_probability",
      [](const Game& g, const ActionProfile& a, const ActionProfile& b) {
        return rational_to_string(transition_probability(g, a, b));
      },
      py::arg("game"), py::arg("from_profile"), py::arg("to_profile"));
  m.def(
      "absorption_probability",
      [](const Game& g, FlatIndex start) {
        ChainKernel kernel = build_kernel(g);
        AbsorptionProbability p = absorption_probability(g, kernel, start);
        return std::make_pair(p.value, p.exact);
      },
      py::arg("game"), py::arg("start"),
      "Returns (probability, exact); exact means decided by reachability.");
  m.def(
      "absorbing_states",
      [](const Game& g) { return absorbing_states(build_kernel(g)); },
      py::arg("game"));

  m.def(
      "check_theorem2",
      [](const Game& g) { return check_theorem2(g).to_json(g).dump(); },
      py::arg("game"));
  m.def(
      "check_isp",
      [](const Game& g) { return check_isp(g).to_json(g).dump(); },
      py::arg("game"));
  m.def(
      "check_conjecture_hypothesis",
      [](const Game& g) {
        return check_conjecture_hypothesis(g).to_json(g).dump();
      },
      py::arg("game"));

  m.def(
      "census",
      [](const std::string& spec_json, int workers) {
        GeneratorSpec spec =
            GeneratorSpec::from_json(nlohmann::json::parse(spec_json));
        SearchOptions opts;
        opts.workers = workers;
        return census(spec, opts).to_json().dump();
      },
      py::arg("spec_json"), py::arg("workers") = 1);
  m.def(
      "hunt_conjecture",
      [](const std::string& spec_json, int workers) {
        GeneratorSpec spec =
            GeneratorSpec::from_json(nlohmann::json::parse(spec_json));
        SearchOptions opts;
        opts.workers = workers;
        return hunt_conjecture(spec, opts).to_json().dump();
      },
      py::arg("spec_json"), py::arg("workers") = 1);
}
