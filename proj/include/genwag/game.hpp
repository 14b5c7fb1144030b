#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "genwag/rational.hpp"

namespace genwag {

// One action index per player, actions[i] in {0, ..., |A^i|-1}.
using ActionProfile = std::vector<int>;

// Profiles are interchangeably addressed by a flat index in
// {0, ..., prod |A^i| - 1}, mixed-radix with player 0 most significant.
// Every module and file format uses this single convention.
using FlatIndex = long long;

// Maximum number of profiles a Game may have. Defaults to 10^6,
// overridable via the GENWAG_PROFILE_CAP environment variable.
long long profile_cap();

class Game;

// An induced subgame together with the data needed to lift its profiles
// back into the parent game.
struct InducedSubgame {
  // The |keep|-player game with the complement frozen.
  // Stored by value; subgames are small.
  std::vector<int> players;  // original indices of kept players, ascending
  ActionProfile fixed;       // full length; action for frozen players, -1 for kept
  // Lift a subgame profile (indexed by position in `players`) to a full
  // parent-game profile.
  ActionProfile lift(const ActionProfile& sub) const;

  const Game& game() const { return *game_; }
  InducedSubgame(std::vector<int> players_, ActionProfile fixed_,
                 std::shared_ptr<const Game> g)
      : players(std::move(players_)), fixed(std::move(fixed_)), game_(std::move(g)) {}

 private:
  std::shared_ptr<const Game> game_;
};

// A finite normal-form game with exact rational payoffs. Immutable after
// construction; all operations are pure functions of their inputs and the
// object is safe to share across threads.
//
// Zero-player games are permitted: they have exactly one (empty) profile,
// which is vacuously a unique strict pure Nash equilibrium. This degenerate
// case is what makes quantifiers over "any induced subgame" well defined.
class Game {
 public:
  // payoffs[player][flat_index] = r^player(profile).
  Game(std::vector<int> action_counts,
       std::vector<std::vector<Rational>> payoffs,
       std::vector<std::vector<std::string>> action_labels = {});

  int num_players() const { return static_cast<int>(counts_.size()); }
  const std::vector<int>& action_counts() const { return counts_; }
  FlatIndex num_profiles() const { return num_profiles_; }
  const std::vector<std::vector<std::string>>& action_labels() const {
    return labels_;
  }

  FlatIndex flat_index(const ActionProfile& profile) const;
  ActionProfile profile_at(FlatIndex flat) const;
  // "(T,L)" style rendering using the action labels.
  std::string profile_label(FlatIndex flat) const;
  // Parse "T,L" or "0,1" into a profile.
  ActionProfile parse_profile(const std::string& text) const;

  const Rational& payoff(int player, const ActionProfile& profile) const;
  const Rational& payoff_flat(int player, FlatIndex flat) const {
    return payoffs_[player][flat];
  }

  // Argmax actions of a |-> r^i(a, a^{-i}); ties all included, never empty.
  // Only the other players' entries of `profile` are read.
  std::vector<int> best_responses(int player, const ActionProfile& profile) const;
  // {a : r^i(a, a^{-i}) >= r^i(a^i, a^{-i})}; always contains the current
  // action (the weak inequality is deliberate).
  std::vector<int> better_responses(int player, const ActionProfile& profile) const;

  bool is_satisfied(int player, const ActionProfile& profile) const;
  bool is_satisfied_flat(int player, FlatIndex flat) const;
  // Sat(a): players whose current action is a best response.
  std::vector<int> satisfied_set(const ActionProfile& profile) const;
  std::vector<int> satisfied_set_flat(FlatIndex flat) const;
  std::vector<int> unsatisfied_set_flat(FlatIndex flat) const;

  bool is_pure_nash(FlatIndex flat) const;
  // All profiles where every player is satisfied; ascending flat order.
  std::vector<FlatIndex> enumerate_pure_nash() const;
  // True iff every player's action strictly beats every alternative.
  bool is_strict_pure_nash(const ActionProfile& profile) const;
  bool is_strict_pure_nash_flat(FlatIndex flat) const;

  // `fixed` assigns an action to every player outside `keep`; overlap or a
  // missing assignment is an InputError. keep = all players returns a copy
  // of the game itself; keep = {} returns the zero-player game.
  InducedSubgame induced_subgame(
      const std::vector<int>& keep,
      const std::vector<std::pair<int, int>>& fixed) const;

  nlohmann::ordered_json to_json() const;
  static Game from_json(const nlohmann::json& j);
  static Game from_json_text(const std::string& text);

  bool payoff_identical(const Game& other) const;

 private:
  std::vector<int> counts_;
  std::vector<FlatIndex> strides_;  // strides_[i]: weight of player i's digit
  FlatIndex num_profiles_ = 1;
  std::vector<std::vector<Rational>> payoffs_;
  std::vector<std::vector<std::string>> labels_;
};

// Exact transcriptions of the three running examples: the 2x2
// discoordination game, the 3x3 game with a unique strict equilibrium that
// is not weakly acyclic, and the 3x3 indifference game that is not
// generalized weakly acyclic.
Game named_example(const std::string& name);
std::vector<std::string> named_example_list();

// Resolve a CLI-style game argument: a named example or a JSON file path.
Game load_game(const std::string& name_or_path);

}  // namespace genwag
