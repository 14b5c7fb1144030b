#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "genwag/game.hpp"

namespace genwag {

enum class GeneratorMode { Exhaustive, Random, Named };

// Describes a stream of games. Exhaustive mode enumerates every assignment
// of alphabet values to payoff cells in lexicographic order (cells ordered
// player-major, then flat profile index, first cell most significant);
// random mode derives an independent RNG per game index so the stream is
// reproducible and order-independent under parallelism.
struct GeneratorSpec {
  GeneratorMode mode = GeneratorMode::Exhaustive;
  std::vector<int> action_counts;          // one per player
  std::vector<Rational> alphabet;          // exhaustive, or random-from-alphabet
  // Random alternative: uniform integers in [lo, hi].
  std::optional<std::pair<long long, long long>> int_range;
  std::uint64_t seed = 0;
  long long count = 0;                     // random mode stream length
  std::vector<std::string> names;          // named mode
  std::optional<long long> slice_start;
  std::optional<long long> slice_stride;
  long long budget = 1'000'000;            // max games without a slice

  nlohmann::ordered_json to_json() const;
  static GeneratorSpec from_json(const nlohmann::json& j);
  std::uint64_t hash() const;

  // Number of games this spec yields (after slicing). Exhaustive totals
  // beyond 2^62 require a slice.
  long long num_games() const;
  // The j-th game of the stream, a pure function of (spec, j).
  Game game_at(long long j) const;
};

// The four mutually exclusive classification buckets. The fifth combination
// (weakly acyclic without a pure Nash equilibrium) is impossible and
// asserted empty.
enum class CensusBucket : int {
  NoPureNash = 0,
  WeaklyAcyclic = 1,
  GenWagNotWag = 2,
  PureNashNotGenWag = 3,
};

struct SearchReport {
  std::string predicate;
  long long examined = 0;
  long long tallies[4] = {0, 0, 0, 0};
  // Serialized offending games, ordered by generation index. Every entry
  // has been re-verified by a fresh single-threaded evaluation.
  std::vector<nlohmann::ordered_json> counterexamples;
  double wall_time_seconds = 0.0;  // not serialized: reports are byte-stable
  nlohmann::ordered_json spec_echo;

  nlohmann::ordered_json to_json() const;
};

enum class TheoremId { Theorem1, Theorem2, Theorem3, Lemma2, Eq1 };
TheoremId parse_theorem_id(const std::string& name);
std::string theorem_id_name(TheoremId id);

struct SearchOptions {
  int workers = 1;
  std::string checkpoint_path;       // empty = no checkpointing
  long long checkpoint_every = 100'000;
  long long limit = 0;               // examine at most this many this run (0 = all)
};

// Classifies every game in the stream and tallies the four buckets.
SearchReport census(const GeneratorSpec& spec, const SearchOptions& opts = {});

// Counterexamples: games satisfying the conjecture hypothesis that are not
// generalized weakly acyclic. Resumable via the checkpoint file.
SearchReport hunt_conjecture(const GeneratorSpec& spec,
                             const SearchOptions& opts = {});

// Evaluates a proved implication/equivalence on every game; a violation is
// an implementation bug and raises ConsistencyError with the game attached.
SearchReport hunt_theorem_violations(const GeneratorSpec& spec, TheoremId which,
                                     const SearchOptions& opts = {});

}  // namespace genwag
