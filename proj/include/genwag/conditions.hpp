#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "genwag/game.hpp"

namespace genwag {

enum class Condition { Theorem2, ISP, ConjectureHypothesis };

std::string condition_name(Condition c);

// Identifies one induced subgame of a parent game.
struct SubgameRef {
  std::vector<int> keep;                      // kept players, ascending
  std::vector<std::pair<int, int>> fixed;     // (frozen player, action)

  nlohmann::ordered_json to_json(const Game& parent) const;
};

struct ConditionVerdict {
  Condition condition;
  bool holds = false;
  // The strict NE found, when holds (two-player condition).
  std::optional<FlatIndex> strict_nash;
  // First failing induced subgame in enumeration order, when not holds
  // (subgame-based conditions).
  std::optional<SubgameRef> failing_subgame;
  // All failures, populated only in exhaustive mode.
  std::vector<SubgameRef> all_failures;

  nlohmann::ordered_json to_json(const Game& game) const;
};

// Pure Nash profiles at which every player's action is a strict best
// response.
std::vector<FlatIndex> strict_pure_nash_set(const Game& game);

// Holds iff the game has exactly two players and a strict pure Nash
// equilibrium; then the game is guaranteed generalized weakly acyclic.
ConditionVerdict check_theorem2(const Game& game);

// Visits every (keep subset, fixed partial profile) pair exactly once:
// subset size ascending, subsets of equal size in lexicographic member
// order, fixed profiles lexicographic (lowest frozen player most
// significant). Includes keep = {} and keep = all players.
// Total count = sum over subsets of prod over frozen players of |A^i|;
// exceeding `cap` is a ResourceError (0 = uncapped).
void enumerate_induced_subgames(
    const Game& game,
    const std::function<bool(const SubgameRef&, const InducedSubgame&)>& visit,
    long long cap = 10'000'000);

long long count_induced_subgames(const Game& game);

// Induced subgame property: every induced subgame has exactly one pure Nash
// equilibrium and it is strict. Early-exits with the first failing subgame
// unless exhaustive.
ConditionVerdict check_isp(const Game& game, bool exhaustive = false);

// Hypothesis of the open conjecture: every induced subgame has at least one
// strict pure Nash equilibrium (uniqueness deliberately not required).
ConditionVerdict check_conjecture_hypothesis(const Game& game,
                                             bool exhaustive = false);

}  // namespace genwag
