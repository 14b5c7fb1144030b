#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "genwag/game.hpp"

namespace genwag {

// Exact sparse row-stochastic transition matrix of the satisficing Markov
// chain: satisfied players repeat their action, unsatisfied players resample
// uniformly and independently over their full action set.
struct ChainKernel {
  // rows[a] = ascending (successor, probability) pairs; each row sums to 1
  // exactly, and every supported successor of a has the same probability
  // prod_{i in UnSat(a)} 1/|A^i|.
  std::vector<std::vector<std::pair<FlatIndex, Rational>>> rows;
};

// 0 if any satisfied player's action differs between from and to, otherwise
// prod over unsatisfied players of 1/|A^i|.
Rational transition_probability(const Game& game, const ActionProfile& from,
                                const ActionProfile& to);

ChainKernel build_kernel(const Game& game);

// Profiles whose row is a unit self-loop. Equals the pure Nash set.
std::vector<FlatIndex> absorbing_states(const ChainKernel& kernel);

struct CommunicatingClass {
  std::vector<FlatIndex> members;  // ascending
  bool closed = false;             // no supported transition leaves the class
};

// Strongly connected components of the kernel's support digraph, ordered by
// smallest member.
std::vector<CommunicatingClass> communicating_classes(const ChainKernel& kernel);

struct AbsorptionProbability {
  double value = 0.0;
  // True when the value (0 or 1) was decided by reachability alone and does
  // not depend on floating point.
  bool exact = false;
  double residual = 0.0;  // of the linear solve; 0 when exact
};

// Probability of eventually entering the pure Nash set from start. States
// that cannot reach the Nash set are exactly 0; states that cannot reach any
// such state are exactly 1; the remainder is solved via the standard
// transient linear system (residual above 1e-12 is a NumericalError).
AbsorptionProbability absorption_probability(const Game& game,
                                             const ChainKernel& kernel,
                                             FlatIndex start);

// Expected steps to absorption; absent when absorption is not almost sure
// from start. Convenience on the same linear machinery.
std::optional<double> expected_hitting_time(const Game& game,
                                            const ChainKernel& kernel,
                                            FlatIndex start);

// RNG contract (recorded in output metadata as "mt19937_64/splitmix64-v1"):
// a trajectory with user seed s and trajectory index j runs an mt19937_64
// seeded with splitmix64(s ^ (0x9E3779B97F4A7C15 * (j+1))); within a step,
// unsatisfied players are resampled in increasing player index, each
// consuming exactly one 64-bit draw.
inline constexpr const char* kRngName = "mt19937_64/splitmix64-v1";

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_trajectory_seed(std::uint64_t seed, std::uint64_t index);

struct Trajectory {
  std::uint64_t seed = 0;  // the already-derived per-trajectory seed
  std::vector<FlatIndex> profiles;  // length steps + 1, profiles[0] = start

  nlohmann::ordered_json to_json(const Game& game) const;
};

// Bit-reproducible given (game, start, steps, seed).
Trajectory simulate(const Game& game, FlatIndex start, int steps,
                    std::uint64_t seed);

// One step of the randomized inertial better-response dynamics: satisfied
// players keep their action, each unsatisfied player i draws uniformly from
// Better^i(a) ∪ {a^i} (which is Better^i(a) itself under the weak
// inequality; implemented as written).
FlatIndex inertial_better_response_step(const Game& game, FlatIndex profile,
                                        std::mt19937_64& rng);

}  // namespace genwag
