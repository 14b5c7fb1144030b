#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "genwag/game.hpp"

namespace genwag {

enum class GraphKind { Best, Better, Sat };

GraphKind parse_graph_kind(const std::string& name);
std::string graph_kind_name(GraphKind kind);

// Directed graph over all profiles of a game for one edge predicate.
// Self-loops exist at every node under all three definitions; they are not
// stored, and "sink" means no outgoing non-self-loop edge.
struct ResponseGraph {
  GraphKind kind;
  // adj[from] = ascending successor list, self-loops excluded.
  std::vector<std::vector<FlatIndex>> adj;

  long long num_edges() const;
};

// Evaluates the kind's two-condition predicate player by player against the
// FROM profile's best/better sets. from == to returns true.
bool edge_exists(const Game& game, GraphKind kind, const ActionProfile& from,
                 const ActionProfile& to);

// Edges generated implicitly per node: satisfied players are frozen and each
// unsatisfied player ranges over its allowed moves, so a satisficing node
// with unsatisfied set U has out-degree prod_{i in U} |A^i| - 1.
ResponseGraph build_graph(const Game& game, GraphKind kind);

// Reverse BFS from the pure Nash set; returns the profiles from which no
// Nash node is reachable (a Nash profile reaches itself via the empty path).
std::vector<FlatIndex> profiles_without_path_to_nash(const Game& game,
                                                     const ResponseGraph& graph);

struct ClassificationReport {
  std::vector<FlatIndex> pure_nash;
  bool is_weakly_acyclic = false;
  bool is_genwag = false;
  std::vector<FlatIndex> unreachable_best;
  std::vector<FlatIndex> unreachable_better;
  std::vector<FlatIndex> unreachable_sat;
  // For GenWAG-but-not-WAG games: a satisficing path from the first profile
  // that lacks a better-response path. Illustrative only.
  std::optional<std::vector<FlatIndex>> witness;

  nlohmann::ordered_json to_json(const Game& game) const;
};

// is_weakly_acyclic  <=>  pure Nash exists and every profile has a
// better-response path to one; is_genwag likewise over the satisficing graph.
ClassificationReport classify(const Game& game);

// Shortest path (BFS) from start to some pure Nash profile, ties broken by
// smallest flat index at every hop; nullopt when no such path exists.
// A Nash start yields the length-0 path {start}.
std::optional<std::vector<FlatIndex>> witness_path(const Game& game,
                                                   GraphKind kind,
                                                   FlatIndex start);

// Deterministic DOT rendering; pure Nash nodes get a doubled outline.
std::string export_dot(const Game& game, const ResponseGraph& graph);

}  // namespace genwag
