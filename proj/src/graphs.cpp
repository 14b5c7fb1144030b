#include "genwag/graphs.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <sstream>

#include "genwag/errors.hpp"

namespace genwag {

GraphKind parse_graph_kind(const std::string& name) {
  if (name == "best") return GraphKind::Best;
  if (name == "better") return GraphKind::Better;
  if (name == "sat") return GraphKind::Sat;
  throw InputError("unknown graph kind '" + name + "' (best, better, sat)");
}

std::string graph_kind_name(GraphKind kind) {
  switch (kind) {
    case GraphKind::Best: return "best";
    case GraphKind::Better: return "better";
    case GraphKind::Sat: return "sat";
  }
  return "?";
}

long long ResponseGraph::num_edges() const {
  long long total = 0;
  for (const auto& succ : adj) total += static_cast<long long>(succ.size());
  return total;
}

bool edge_exists(const Game& game, GraphKind kind, const ActionProfile& from,
                 const ActionProfile& to) {
  const int n = game.num_players();
  if (static_cast<int>(to.size()) != n) throw InputError("profile has wrong length");
  (void)game.flat_index(to);  // range validation
  for (int i = 0; i < n; ++i) {
    if (game.is_satisfied(i, from)) {
      if (to[i] != from[i]) return false;
      continue;
    }
    if (to[i] == from[i]) continue;
    switch (kind) {
      case GraphKind::Best: {
        auto best = game.best_responses(i, from);
        if (!std::binary_search(best.begin(), best.end(), to[i])) return false;
        break;
      }
      case GraphKind::Better: {
        auto better = game.better_responses(i, from);
        if (!std::binary_search(better.begin(), better.end(), to[i])) return false;
        break;
      }
      case GraphKind::Sat:
        break;  // any action is admissible for an unsatisfied player
    }
  }
  return true;
}

ResponseGraph build_graph(const Game& game, GraphKind kind) {
  const FlatIndex P = game.num_profiles();
  const int n = game.num_players();
  ResponseGraph graph;
  graph.kind = kind;
  graph.adj.resize(P);

  // Per-mover choice lists, reused across nodes.
  std::vector<int> movers;
  std::vector<std::vector<int>> choices;
  std::vector<std::size_t> odo;
  ActionProfile profile;

  for (FlatIndex a = 0; a < P; ++a) {
    profile = game.profile_at(a);
    movers.clear();
    choices.clear();
    for (int i = 0; i < n; ++i) {
      if (game.is_satisfied_flat(i, a)) continue;
      movers.push_back(i);
      switch (kind) {
        case GraphKind::Best: {
          // The current (non-best) action may always be kept.
          auto set = game.best_responses(i, profile);
          set.insert(std::lower_bound(set.begin(), set.end(), profile[i]),
                     profile[i]);
          choices.push_back(std::move(set));
          break;
        }
        case GraphKind::Better:
          choices.push_back(game.better_responses(i, profile));
          break;
        case GraphKind::Sat: {
          std::vector<int> all(game.action_counts()[i]);
          for (int v = 0; v < game.action_counts()[i]; ++v) all[v] = v;
          choices.push_back(std::move(all));
          break;
        }
      }
    }
    if (movers.empty()) continue;  // pure Nash: sink

    // Base flat index with all movers zeroed out.
    FlatIndex base = a;
    std::vector<FlatIndex> stride(movers.size());
    for (std::size_t k = 0; k < movers.size(); ++k) {
      FlatIndex s = 1;
      for (int j = movers[k] + 1; j < n; ++j) s *= game.action_counts()[j];
      stride[k] = s;
      base -= profile[movers[k]] * s;
    }

    // Odometer over choice lists; first mover slowest, so targets come out
    // in ascending flat order.
    odo.assign(movers.size(), 0);
    auto& succ = graph.adj[a];
    while (true) {
      FlatIndex target = base;
      for (std::size_t k = 0; k < movers.size(); ++k)
        target += choices[k][odo[k]] * stride[k];
      if (target != a) succ.push_back(target);
      int k = static_cast<int>(movers.size()) - 1;
      while (k >= 0 && ++odo[k] == choices[k].size()) odo[k--] = 0;
      if (k < 0) break;
    }
  }
  return graph;
}

std::vector<FlatIndex> profiles_without_path_to_nash(const Game& game,
                                                     const ResponseGraph& graph) {
  const FlatIndex P = game.num_profiles();
  std::vector<std::vector<FlatIndex>> radj(P);
  for (FlatIndex a = 0; a < P; ++a)
    for (FlatIndex b : graph.adj[a]) radj[b].push_back(a);

  std::vector<char> reached(P, 0);
  std::deque<FlatIndex> queue;
  for (FlatIndex a = 0; a < P; ++a)
    if (game.is_pure_nash(a)) {
      reached[a] = 1;
      queue.push_back(a);
    }
  while (!queue.empty()) {
    FlatIndex b = queue.front();
    queue.pop_front();
    for (FlatIndex a : radj[b])
      if (!reached[a]) {
        reached[a] = 1;
        queue.push_back(a);
      }
  }
  std::vector<FlatIndex> missing;
  for (FlatIndex a = 0; a < P; ++a)
    if (!reached[a]) missing.push_back(a);
  return missing;
}

ClassificationReport classify(const Game& game) {
  ClassificationReport report;
  report.pure_nash = game.enumerate_pure_nash();

  ResponseGraph best = build_graph(game, GraphKind::Best);
  ResponseGraph better = build_graph(game, GraphKind::Better);
  ResponseGraph sat = build_graph(game, GraphKind::Sat);
  report.unreachable_best = profiles_without_path_to_nash(game, best);
  report.unreachable_better = profiles_without_path_to_nash(game, better);
  report.unreachable_sat = profiles_without_path_to_nash(game, sat);

  report.is_weakly_acyclic =
      !report.pure_nash.empty() && report.unreachable_better.empty();
  report.is_genwag = !report.pure_nash.empty() && report.unreachable_sat.empty();

  if (report.is_genwag && !report.unreachable_better.empty())
    report.witness = witness_path(game, GraphKind::Sat, report.unreachable_better[0]);
  return report;
}

std::optional<std::vector<FlatIndex>> witness_path(const Game& game,
                                                   GraphKind kind,
                                                   FlatIndex start) {
  if (start < 0 || start >= game.num_profiles())
    throw InputError("start profile out of range");
  if (game.is_pure_nash(start)) return std::vector<FlatIndex>{start};

  ResponseGraph graph = build_graph(game, kind);
  const FlatIndex P = game.num_profiles();
  std::vector<int> dist(P, -1);
  dist[start] = 0;
  std::deque<FlatIndex> queue{start};
  int found_depth = -1;
  FlatIndex target = -1;
  while (!queue.empty()) {
    FlatIndex a = queue.front();
    queue.pop_front();
    if (found_depth >= 0 && dist[a] >= found_depth) break;
    for (FlatIndex b : graph.adj[a])
      if (dist[b] < 0) {
        dist[b] = dist[a] + 1;
        if (game.is_pure_nash(b)) {
          // Smallest-index Nash node at the minimal depth wins.
          if (found_depth < 0) {
            found_depth = dist[b];
            target = b;
          } else if (dist[b] == found_depth && b < target) {
            target = b;
          }
        }
        queue.push_back(b);
      }
  }
  if (target < 0) return std::nullopt;

  // Reconstruct backwards, picking the smallest predecessor at each level.
  std::vector<std::vector<FlatIndex>> radj(P);
  for (FlatIndex a = 0; a < P; ++a)
    if (dist[a] >= 0)
      for (FlatIndex b : graph.adj[a]) radj[b].push_back(a);
  std::vector<FlatIndex> path{target};
  FlatIndex cur = target;
  for (int d = found_depth - 1; d >= 0; --d) {
    FlatIndex best_pred = std::numeric_limits<FlatIndex>::max();
    for (FlatIndex p : radj[cur])
      if (dist[p] == d && p < best_pred) best_pred = p;
    cur = best_pred;
    path.push_back(cur);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::string export_dot(const Game& game, const ResponseGraph& graph) {
  std::ostringstream out;
  out << "digraph " << graph_kind_name(graph.kind) << "_response {\n";
  for (FlatIndex a = 0; a < game.num_profiles(); ++a) {
    out << "  n" << a << " [label=\"" << game.profile_label(a) << "\"";
    if (game.is_pure_nash(a)) out << " peripheries=2";
    out << "];\n";
  }
  for (FlatIndex a = 0; a < game.num_profiles(); ++a)
    for (FlatIndex b : graph.adj[a]) out << "  n" << a << " -> n" << b << ";\n";
  out << "}\n";
  return out.str();
}

nlohmann::ordered_json ClassificationReport::to_json(const Game& game) const {
  nlohmann::ordered_json j;
  auto with_labels = [&](const std::vector<FlatIndex>& flats) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (FlatIndex f : flats) arr.push_back(f);
    return arr;
  };
  auto labels_of = [&](const std::vector<FlatIndex>& flats) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (FlatIndex f : flats) arr.push_back(game.profile_label(f));
    return arr;
  };
  j["pure_nash"] = with_labels(pure_nash);
  j["pure_nash_labels"] = labels_of(pure_nash);
  j["is_weakly_acyclic"] = is_weakly_acyclic;
  j["is_genwag"] = is_genwag;
  j["unreachable"] = {{"best", with_labels(unreachable_best)},
                      {"better", with_labels(unreachable_better)},
                      {"sat", with_labels(unreachable_sat)}};
  if (witness) {
    j["witness"] = with_labels(*witness);
    j["witness_labels"] = labels_of(*witness);
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

}  // namespace genwag
