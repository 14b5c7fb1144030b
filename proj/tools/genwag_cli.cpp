#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "genwag/chain.hpp"
#include "genwag/conditions.hpp"
#include "genwag/errors.hpp"
#include "genwag/game.hpp"
#include "genwag/graphs.hpp"
#include "genwag/search.hpp"

namespace {

using namespace genwag;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, sep)) out.push_back(tok);
  return out;
}

FlatIndex resolve_profile(const Game& game, const std::string& text) {
  // Accept a flat index or a comma-separated action tuple / label tuple.
  if (text.find(',') == std::string::npos) {
    try {
      std::size_t pos = 0;
      long long flat = std::stoll(text, &pos);
      if (pos == text.size()) {
        if (flat < 0 || flat >= game.num_profiles())
          throw InputError("profile index out of range");
        return flat;
      }
    } catch (const std::invalid_argument&) {
    }
  }
  return game.flat_index(game.parse_profile(text));
}

struct GeneratorFlags {
  std::string mode = "exhaustive";
  std::string actions;
  std::string alphabet;
  std::string range;
  std::string names;
  std::uint64_t seed = 0;
  long long count = 0;
  long long slice_start = -1;
  long long slice_stride = -1;
  long long budget = 1'000'000;

  void attach(CLI::App* cmd) {
    cmd->add_option("--mode", mode, "exhaustive | random | named");
    cmd->add_option("--actions", actions, "per-player action counts, e.g. 2,2,2");
    cmd->add_option("--alphabet", alphabet, "payoff alphabet, e.g. 0,1,2 or 0,1/2,1");
    cmd->add_option("--range", range, "random integer payoffs lo:hi");
    cmd->add_option("--names", names, "named mode: comma-separated example names");
    cmd->add_option("--seed", seed, "random mode seed");
    cmd->add_option("--count", count, "random mode stream length");
    cmd->add_option("--slice-start", slice_start, "exhaustive slice start index");
    cmd->add_option("--slice-stride", slice_stride, "exhaustive slice stride");
    cmd->add_option("--budget", budget, "max exhaustive games without a slice");
  }

  GeneratorSpec to_spec() const {
    GeneratorSpec spec;
    spec.mode = mode == "random"  ? GeneratorMode::Random
                : mode == "named" ? GeneratorMode::Named
                                  : GeneratorMode::Exhaustive;
    if (mode != "exhaustive" && mode != "random" && mode != "named")
      throw InputError("unknown generator mode '" + mode + "'");
    for (const auto& tok : split(actions, ','))
      spec.action_counts.push_back(std::stoi(tok));
    for (const auto& tok : split(alphabet, ','))
      spec.alphabet.push_back(parse_rational(tok));
    if (!range.empty()) {
      auto parts = split(range, ':');
      if (parts.size() != 2) throw InputError("--range expects lo:hi");
      spec.int_range = {std::stoll(parts[0]), std::stoll(parts[1])};
    }
    spec.names = split(names, ',');
    spec.seed = seed;
    spec.count = count;
    if (slice_start >= 0) spec.slice_start = slice_start;
    if (slice_stride >= 0) spec.slice_stride = slice_stride;
    spec.budget = budget;
    return spec;
  }
};

void print_report_text(const SearchReport& report) {
  std::cout << "predicate: " << report.predicate << "\n"
            << "examined: " << report.examined << "\n"
            << "tallies: no-pure-NE=" << report.tallies[0]
            << " WAG=" << report.tallies[1]
            << " GenWAG-not-WAG=" << report.tallies[2]
            << " pure-NE-not-GenWAG=" << report.tallies[3] << "\n"
            << "counterexamples: " << report.counterexamples.size() << "\n"
            << "wall time: " << report.wall_time_seconds << " s\n";
  for (const auto& c : report.counterexamples)
    std::cout << "counterexample " << c.at("index") << ": "
              << c.at("game").dump() << "\n";
}

int run(int argc, char** argv) {
  CLI::App app{"Classify finite games by best-response, better-response and "
               "satisficing path structure"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "machine-readable JSON output");

  std::string game_arg, kind_name = "sat", start_text = "0";
  std::uint64_t seed = 0;
  long long steps = 100, trajectories = 1;
  bool dot = false, do_t2 = false, do_isp = false, do_conj = false,
       exhaustive_failures = false;
  GeneratorFlags gen;
  std::string sweep_name = "conjecture";
  SearchOptions opts;

  auto* classify_cmd = app.add_subcommand("classify", "full classification report");
  classify_cmd->add_option("game", game_arg)->required();

  auto* nash_cmd = app.add_subcommand("nash", "list pure Nash equilibria");
  nash_cmd->add_option("game", game_arg)->required();

  auto* graph_cmd = app.add_subcommand("graph", "build a response graph");
  graph_cmd->add_option("game", game_arg)->required();
  graph_cmd->add_option("--kind", kind_name, "best | better | sat");
  graph_cmd->add_flag("--dot", dot, "emit DOT");

  auto* sim_cmd = app.add_subcommand("simulate", "run the satisficing Markov chain");
  sim_cmd->add_option("game", game_arg)->required();
  sim_cmd->add_option("--start", start_text, "start profile (flat index or tuple)");
  sim_cmd->add_option("--steps", steps);
  sim_cmd->add_option("--seed", seed);
  sim_cmd->add_option("--trajectories", trajectories);

  auto* absorb_cmd = app.add_subcommand("absorb", "per-start absorption probabilities");
  absorb_cmd->add_option("game", game_arg)->required();

  auto* check_cmd = app.add_subcommand("check", "sufficient-condition checkers");
  check_cmd->add_option("game", game_arg)->required();
  check_cmd->add_flag("--theorem2", do_t2);
  check_cmd->add_flag("--isp", do_isp);
  check_cmd->add_flag("--conjecture-hypothesis", do_conj);
  check_cmd->add_flag("--all-failures", exhaustive_failures,
                      "list every failing subgame, not just the first");

  auto* census_cmd = app.add_subcommand("census", "classification tallies over a game stream");
  gen.attach(census_cmd);
  census_cmd->add_option("--workers", opts.workers);

  auto* hunt_cmd = app.add_subcommand("hunt", "search a game stream for violations");
  gen.attach(hunt_cmd);
  hunt_cmd->add_option("--predicate", sweep_name,
                       "conjecture | theorem1 | theorem2 | theorem3 | lemma2 | eq1");
  hunt_cmd->add_option("--workers", opts.workers);
  hunt_cmd->add_option("--checkpoint", opts.checkpoint_path);
  hunt_cmd->add_option("--checkpoint-every", opts.checkpoint_every);
  hunt_cmd->add_option("--limit", opts.limit, "examine at most this many games this run");

  auto* examples_cmd = app.add_subcommand("examples", "list built-in example games");

  CLI11_PARSE(app, argc, argv);

  if (*examples_cmd) {
    for (const auto& name : named_example_list()) {
      Game g = named_example(name);
      std::cout << name << ": " << g.num_players() << " players, actions";
      for (int c : g.action_counts()) std::cout << " " << c;
      std::cout << "\n";
    }
    return 0;
  }

  if (*classify_cmd) {
    Game game = load_game(game_arg);
    ClassificationReport report = classify(game);
    if (as_json) {
      std::cout << report.to_json(game).dump(2) << "\n";
    } else {
      std::cout << "pure Nash:";
      for (FlatIndex a : report.pure_nash)
        std::cout << " " << game.profile_label(a);
      if (report.pure_nash.empty()) std::cout << " (none)";
      std::cout << "\nweakly acyclic: " << (report.is_weakly_acyclic ? "yes" : "no")
                << "\ngeneralized weakly acyclic: "
                << (report.is_genwag ? "yes" : "no") << "\n";
      if (!report.unreachable_better.empty()) {
        std::cout << "no better-response path to Nash from:";
        for (FlatIndex a : report.unreachable_better)
          std::cout << " " << game.profile_label(a);
        std::cout << "\n";
      }
      if (!report.unreachable_sat.empty()) {
        std::cout << "no satisficing path to Nash from:";
        for (FlatIndex a : report.unreachable_sat)
          std::cout << " " << game.profile_label(a);
        std::cout << "\n";
      }
      if (report.witness) {
        std::cout << "witness satisficing path:";
        for (FlatIndex a : *report.witness)
          std::cout << " " << game.profile_label(a);
        std::cout << "\n";
      }
    }
    return 0;
  }

  if (*nash_cmd) {
    Game game = load_game(game_arg);
    auto nash = game.enumerate_pure_nash();
    if (as_json) {
      nlohmann::ordered_json j;
      j["pure_nash"] = nash;
      nlohmann::ordered_json strict = nlohmann::ordered_json::array();
      for (FlatIndex a : nash) strict.push_back(game.is_strict_pure_nash_flat(a));
      j["strict"] = strict;
      std::cout << j.dump(2) << "\n";
    } else {
      for (FlatIndex a : nash)
        std::cout << game.profile_label(a)
                  << (game.is_strict_pure_nash_flat(a) ? " (strict)" : "") << "\n";
      if (nash.empty()) std::cout << "no pure Nash equilibrium\n";
    }
    return 0;
  }

  if (*graph_cmd) {
    Game game = load_game(game_arg);
    ResponseGraph graph = build_graph(game, parse_graph_kind(kind_name));
    if (dot) {
      std::cout << export_dot(game, graph);
    } else if (as_json) {
      nlohmann::ordered_json j;
      j["kind"] = graph_kind_name(graph.kind);
      j["nodes"] = game.num_profiles();
      j["edges"] = nlohmann::ordered_json::array();
      for (FlatIndex a = 0; a < game.num_profiles(); ++a)
        for (FlatIndex b : graph.adj[a]) j["edges"].push_back({a, b});
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << graph_kind_name(graph.kind) << " graph: "
                << game.num_profiles() << " nodes, " << graph.num_edges()
                << " edges\n";
      for (FlatIndex a = 0; a < game.num_profiles(); ++a)
        for (FlatIndex b : graph.adj[a])
          std::cout << game.profile_label(a) << " -> " << game.profile_label(b)
                    << "\n";
    }
    return 0;
  }

  if (*sim_cmd) {
    Game game = load_game(game_arg);
    FlatIndex start = resolve_profile(game, start_text);
    nlohmann::ordered_json all = nlohmann::ordered_json::array();
    for (long long j = 0; j < trajectories; ++j) {
      Trajectory traj = simulate(game, start, static_cast<int>(steps),
                                 derive_trajectory_seed(seed, j));
      if (as_json) {
        all.push_back(traj.to_json(game));
      } else {
        std::cout << "trajectory " << j << ":";
        for (FlatIndex a : traj.profiles) std::cout << " " << game.profile_label(a);
        std::cout << "\n";
      }
    }
    if (as_json) {
      nlohmann::ordered_json j;
      j["rng"] = kRngName;
      j["seed"] = seed;
      j["start"] = start;
      j["steps"] = steps;
      j["trajectories"] = all;
      std::cout << j.dump(2) << "\n";
    }
    return 0;
  }

  if (*absorb_cmd) {
    Game game = load_game(game_arg);
    ChainKernel kernel = build_kernel(game);
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (FlatIndex a = 0; a < game.num_profiles(); ++a) {
      AbsorptionProbability p = absorption_probability(game, kernel, a);
      if (as_json) {
        nlohmann::ordered_json row;
        row["profile"] = a;
        row["label"] = game.profile_label(a);
        if (p.exact)
          row["probability"] = p.value == 1.0 ? "1" : "0";
        else
          row["probability"] = p.value;
        row["exact"] = p.exact;
        rows.push_back(row);
      } else {
        std::cout << game.profile_label(a) << ": " << p.value
                  << (p.exact ? " (exact)" : "") << "\n";
      }
    }
    if (as_json) std::cout << rows.dump(2) << "\n";
    return 0;
  }

  if (*check_cmd) {
    Game game = load_game(game_arg);
    if (!do_t2 && !do_isp && !do_conj)
      throw InputError("check: pick --theorem2, --isp or --conjecture-hypothesis");
    std::vector<ConditionVerdict> verdicts;
    if (do_t2) verdicts.push_back(check_theorem2(game));
    if (do_isp) verdicts.push_back(check_isp(game, exhaustive_failures));
    if (do_conj)
      verdicts.push_back(check_conjecture_hypothesis(game, exhaustive_failures));
    if (as_json) {
      nlohmann::ordered_json arr = nlohmann::ordered_json::array();
      for (const auto& v : verdicts) arr.push_back(v.to_json(game));
      std::cout << arr.dump(2) << "\n";
    } else {
      for (const auto& v : verdicts) {
        std::cout << condition_name(v.condition) << ": "
                  << (v.holds ? "holds" : "does not hold");
        if (v.strict_nash)
          std::cout << ", strict NE " << game.profile_label(*v.strict_nash);
        if (v.failing_subgame) {
          std::cout << ", failing subgame keep={";
          for (std::size_t k = 0; k < v.failing_subgame->keep.size(); ++k)
            std::cout << (k ? "," : "") << v.failing_subgame->keep[k];
          std::cout << "} fixed={";
          bool first = true;
          for (auto [p, a] : v.failing_subgame->fixed) {
            std::cout << (first ? "" : ",") << p << ":" << a;
            first = false;
          }
          std::cout << "}";
        }
        std::cout << "\n";
      }
    }
    return 0;
  }

  if (*census_cmd) {
    SearchReport report = census(gen.to_spec(), opts);
    if (as_json)
      std::cout << report.to_json().dump(2) << "\n";
    else
      print_report_text(report);
    return 0;
  }

  if (*hunt_cmd) {
    GeneratorSpec spec = gen.to_spec();
    SearchReport report = sweep_name == "conjecture"
                              ? hunt_conjecture(spec, opts)
                              : hunt_theorem_violations(
                                    spec, parse_theorem_id(sweep_name), opts);
    if (as_json)
      std::cout << report.to_json().dump(2) << "\n";
    else
      print_report_text(report);
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const genwag::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const genwag::ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const genwag::ConsistencyError& e) {
    std::cerr << "internal consistency failure: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
