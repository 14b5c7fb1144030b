#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "genwag/errors.hpp"
#include "genwag/graphs.hpp"
#include "genwag/search.hpp"

using namespace genwag;

namespace {

GeneratorSpec exhaustive_2x2() {
  GeneratorSpec spec;
  spec.mode = GeneratorMode::Exhaustive;
  spec.action_counts = {2, 2};
  spec.alphabet = {Rational(0), Rational(1)};
  return spec;
}

// Independent classification oracle: pairwise edge predicate plus
// Floyd-Warshall transitive closure instead of implicit generation and BFS.
int oracle_bucket(const Game& g) {
  const int n = static_cast<int>(g.num_profiles());
  auto reaches_nash = [&](GraphKind kind) {
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        reach[a][b] = a == b || edge_exists(g, kind, g.profile_at(a),
                                            g.profile_at(b));
    for (int k = 0; k < n; ++k)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          if (reach[a][k] && reach[k][b]) reach[a][b] = true;
    for (int a = 0; a < n; ++a) {
      bool ok = false;
      for (int b = 0; b < n; ++b)
        if (reach[a][b] && g.is_pure_nash(b)) ok = true;
      if (!ok) return false;
    }
    return true;
  };
  if (g.enumerate_pure_nash().empty()) return 0;
  if (reaches_nash(GraphKind::Better)) return 1;
  if (reaches_nash(GraphKind::Sat)) return 2;
  return 3;
}

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const char* stem)
      : path(std::filesystem::temp_directory_path() /
             (std::string(stem) + std::to_string(::getpid()) + ".json")) {
    std::filesystem::remove(path);
  }
  ~TempFile() { std::filesystem::remove(path); }
};

}  // namespace

TEST_CASE("exhaustive stream counts and endpoints") {
  GeneratorSpec spec = exhaustive_2x2();
  CHECK(spec.num_games() == 256);  // 2 alphabet values, 8 payoff cells

  Game first = spec.game_at(0);
  for (int i = 0; i < 2; ++i)
    for (FlatIndex a = 0; a < 4; ++a)
      CHECK(first.payoff_flat(i, a) == Rational(0));
  Game last = spec.game_at(255);
  for (int i = 0; i < 2; ++i)
    for (FlatIndex a = 0; a < 4; ++a)
      CHECK(last.payoff_flat(i, a) == Rational(1));

  // index 1 flips only the least significant cell: player 1, profile (1,1)
  Game second = spec.game_at(1);
  CHECK(second.payoff_flat(1, 3) == Rational(1));
  CHECK(second.payoff_flat(1, 2) == Rational(0));
  CHECK(second.payoff_flat(0, 0) == Rational(0));
  // index 128 flips only the most significant cell: player 0, profile (0,0)
  Game mid = spec.game_at(128);
  CHECK(mid.payoff_flat(0, 0) == Rational(1));
  CHECK(mid.payoff_flat(0, 1) == Rational(0));
  CHECK(mid.payoff_flat(1, 3) == Rational(0));

  CHECK_THROWS_AS(spec.game_at(256), InputError);
}

TEST_CASE("exhaustive budget guard and slices") {
  GeneratorSpec big;
  big.mode = GeneratorMode::Exhaustive;
  big.action_counts = {3, 3};
  big.alphabet = {Rational(0), Rational(1), Rational(2)};
  big.budget = 1000;  // 3^18 without a slice
  CHECK_THROWS_AS(big.num_games(), ResourceError);

  big.slice_start = 0;
  big.slice_stride = 1'000'000;
  CHECK(big.num_games() == 388);  // ceil(3^18 / stride)
  CHECK_NOTHROW(big.game_at(0));

  GeneratorSpec bad = exhaustive_2x2();
  bad.slice_start = 5;
  CHECK_THROWS_AS(bad.num_games(), InputError);  // stride missing
}

TEST_CASE("slices partition the exhaustive stream") {
  GeneratorSpec full = exhaustive_2x2();
  std::vector<nlohmann::ordered_json> games;
  for (long long j = 0; j < full.num_games(); ++j)
    games.push_back(full.game_at(j).to_json());

  std::vector<nlohmann::ordered_json> sliced;
  for (long long start = 0; start < 3; ++start) {
    GeneratorSpec slice = exhaustive_2x2();
    slice.slice_start = start;
    slice.slice_stride = 3;
    for (long long j = 0; j < slice.num_games(); ++j)
      sliced.push_back(slice.game_at(j).to_json());
  }
  CHECK(sliced.size() == games.size());
  auto dump = [](std::vector<nlohmann::ordered_json> v) {
    std::vector<std::string> out;
    for (auto& j : v) out.push_back(j.dump());
    std::sort(out.begin(), out.end());
    return out;
  };
  CHECK(dump(sliced) == dump(games));
}

TEST_CASE("random stream is reproducible and order-independent") {
  GeneratorSpec spec;
  spec.mode = GeneratorMode::Random;
  spec.action_counts = {2, 3};
  spec.int_range = std::make_pair(-2LL, 2LL);
  spec.seed = 99;
  spec.count = 40;
  CHECK(spec.num_games() == 40);

  // pure function of (spec, index): re-evaluation and reversed order agree
  std::vector<std::string> forward, again;
  for (long long j = 0; j < 40; ++j) forward.push_back(spec.game_at(j).to_json().dump());
  for (long long j = 39; j >= 0; --j) again.push_back(spec.game_at(j).to_json().dump());
  std::reverse(again.begin(), again.end());
  CHECK(forward == again);

  // payoffs respect the requested range
  for (long long j = 0; j < 40; ++j) {
    Game g = spec.game_at(j);
    for (int i = 0; i < g.num_players(); ++i)
      for (FlatIndex a = 0; a < g.num_profiles(); ++a) {
        CHECK(g.payoff_flat(i, a) >= Rational(-2));
        CHECK(g.payoff_flat(i, a) <= Rational(2));
      }
  }

  // different seeds give different streams
  GeneratorSpec other = spec;
  other.seed = 100;
  bool differs = false;
  for (long long j = 0; j < 40; ++j)
    if (other.game_at(j).to_json() != spec.game_at(j).to_json()) differs = true;
  CHECK(differs);
}

TEST_CASE("spec JSON round trip preserves the hash") {
  GeneratorSpec spec;
  spec.mode = GeneratorMode::Random;
  spec.action_counts = {2, 2};
  spec.alphabet = {Rational(1, 3), Rational(2)};
  spec.seed = 7;
  spec.count = 5;
  GeneratorSpec back = GeneratorSpec::from_json(spec.to_json());
  CHECK(back.to_json() == spec.to_json());
  CHECK(back.hash() == spec.hash());
  CHECK(back.game_at(3).to_json() == spec.game_at(3).to_json());

  GeneratorSpec other = spec;
  other.seed = 8;
  CHECK(other.hash() != spec.hash());
}

TEST_CASE("census of the named figures") {
  GeneratorSpec spec;
  spec.mode = GeneratorMode::Named;
  spec.names = {"fig1", "fig2", "fig3"};
  SearchReport report = census(spec);
  CHECK(report.examined == 3);
  CHECK(report.tallies[0] == 1);  // no pure Nash
  CHECK(report.tallies[1] == 0);  // weakly acyclic
  CHECK(report.tallies[2] == 1);  // GenWAG but not WAG
  CHECK(report.tallies[3] == 1);  // pure Nash but not GenWAG
  CHECK(report.counterexamples.empty());

  auto j = report.to_json();
  CHECK(j.at("predicate") == "census");
  CHECK(j.at("tallies").at("genwag_not_wag") == 1);
  CHECK_FALSE(j.contains("wall_time_seconds"));
}

TEST_CASE("census tallies match the independent oracle over all 2x2 games") {
  GeneratorSpec spec = exhaustive_2x2();
  long long expected[4] = {0, 0, 0, 0};
  for (long long j = 0; j < spec.num_games(); ++j)
    ++expected[oracle_bucket(spec.game_at(j))];
  CHECK(expected[0] + expected[1] + expected[2] + expected[3] == 256);

  SearchReport report = census(spec);
  CHECK(report.examined == 256);
  for (int k = 0; k < 4; ++k) CHECK(report.tallies[k] == expected[k]);
}

TEST_CASE("parallel census is byte-identical to sequential") {
  GeneratorSpec spec = exhaustive_2x2();
  SearchOptions seq, par;
  par.workers = 4;
  CHECK(census(spec, par).to_json().dump() == census(spec, seq).to_json().dump());
}

TEST_CASE("conjecture hunt finds nothing among two-player games") {
  // two players plus the hypothesis implies a strict NE, which already
  // guarantees generalized weak acyclicity
  GeneratorSpec spec = exhaustive_2x2();
  SearchOptions opts;
  opts.workers = 2;
  SearchReport report = hunt_conjecture(spec, opts);
  CHECK(report.examined == 256);
  CHECK(report.counterexamples.empty());

  GeneratorSpec rnd;
  rnd.mode = GeneratorMode::Random;
  rnd.action_counts = {3, 3};
  rnd.int_range = std::make_pair(0LL, 3LL);
  rnd.seed = 5;
  rnd.count = 150;
  CHECK(hunt_conjecture(rnd).counterexamples.empty());
}

TEST_CASE("theorem sweeps stay silent on exhaustive and random streams") {
  GeneratorSpec spec = exhaustive_2x2();
  for (TheoremId id : {TheoremId::Eq1, TheoremId::Lemma2, TheoremId::Theorem1,
                       TheoremId::Theorem2, TheoremId::Theorem3}) {
    SearchReport report = hunt_theorem_violations(spec, id);
    CHECK(report.examined == 256);
    CHECK(report.counterexamples.empty());
  }

  GeneratorSpec rnd;
  rnd.mode = GeneratorMode::Random;
  rnd.action_counts = {2, 2, 2};
  rnd.int_range = std::make_pair(0LL, 2LL);
  rnd.seed = 31;
  rnd.count = 60;
  for (TheoremId id : {TheoremId::Eq1, TheoremId::Lemma2, TheoremId::Theorem1})
    CHECK_NOTHROW(hunt_theorem_violations(rnd, id));
}

TEST_CASE("theorem id names round trip") {
  for (const char* name : {"theorem1", "theorem2", "theorem3", "lemma2", "eq1"})
    CHECK(theorem_id_name(parse_theorem_id(name)) == name);
  CHECK_THROWS_AS(parse_theorem_id("theorem9"), InputError);
}

TEST_CASE("checkpointed run resumes and matches a single pass") {
  GeneratorSpec spec = exhaustive_2x2();
  SearchReport whole = census(spec);

  TempFile cp("genwag-census-cp-");
  SearchOptions first;
  first.checkpoint_path = cp.path.string();
  first.checkpoint_every = 64;
  first.limit = 100;
  SearchReport partial = census(spec, first);
  CHECK(partial.examined == 100);

  SearchOptions rest;
  rest.checkpoint_path = cp.path.string();
  rest.checkpoint_every = 64;
  SearchReport resumed = census(spec, rest);
  CHECK(resumed.to_json().dump() == whole.to_json().dump());

  // a checkpoint written for one spec refuses to seed another
  GeneratorSpec other = exhaustive_2x2();
  other.alphabet = {Rational(0), Rational(2)};
  SearchOptions reuse;
  reuse.checkpoint_path = cp.path.string();
  CHECK_THROWS_AS(census(other, reuse), InputError);
}

TEST_CASE("reports are byte-identical across reruns") {
  GeneratorSpec spec;
  spec.mode = GeneratorMode::Random;
  spec.action_counts = {2, 2};
  spec.int_range = std::make_pair(0LL, 1LL);
  spec.seed = 12;
  spec.count = 30;
  SearchOptions opts;
  opts.workers = 3;
  CHECK(hunt_conjecture(spec, opts).to_json().dump() ==
        hunt_conjecture(spec, opts).to_json().dump());
}
