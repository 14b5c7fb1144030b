#include <doctest.h>

#include <algorithm>
#include <random>

#include "genwag/conditions.hpp"
#include "genwag/errors.hpp"
#include "genwag/game.hpp"
#include "genwag/graphs.hpp"

using namespace genwag;

namespace {

Game zero_game(std::vector<int> counts) {
  long long profiles = 1;
  for (int c : counts) profiles *= c;
  std::vector<std::vector<Rational>> payoffs(
      counts.size(), std::vector<Rational>(profiles, Rational(0)));
  return Game(std::move(counts), std::move(payoffs));
}

Game random_game(std::vector<int> counts, std::mt19937_64& rng) {
  long long profiles = 1;
  for (int c : counts) profiles *= c;
  std::vector<std::vector<Rational>> payoffs(counts.size());
  for (auto& tensor : payoffs)
    for (long long a = 0; a < profiles; ++a)
      tensor.push_back(Rational(static_cast<long long>(rng() % 4)));
  return Game(std::move(counts), std::move(payoffs));
}

// 2x2 game with a unique strict NE in every induced subgame; full-game NE
// at (second row, second column).
Game isp_example() {
  return Game({2, 2}, {{Rational(3), Rational(0), Rational(4), Rational(1)},
                       {Rational(3), Rational(4), Rational(0), Rational(1)}});
}

// Brute-force oracle for the ISP predicate, walking subgames by hand.
bool oracle_isp(const Game& g) {
  bool ok = true;
  enumerate_induced_subgames(g, [&](const SubgameRef&, const InducedSubgame& sub) {
    auto nash = sub.game().enumerate_pure_nash();
    int strict = 0;
    for (FlatIndex a : nash)
      if (sub.game().is_strict_pure_nash_flat(a)) ++strict;
    if (!(nash.size() == 1 && strict == 1)) ok = false;
    return ok;
  });
  return ok;
}

}  // namespace

TEST_CASE("strict pure Nash sets of the figures") {
  CHECK(strict_pure_nash_set(named_example("fig2")) == std::vector<FlatIndex>{0});
  CHECK(strict_pure_nash_set(named_example("fig3")).empty());
  CHECK(strict_pure_nash_set(named_example("fig1")).empty());
}

TEST_CASE("two-player strict-equilibrium condition") {
  ConditionVerdict v2 = check_theorem2(named_example("fig2"));
  CHECK(v2.holds);
  CHECK(v2.strict_nash == FlatIndex{0});
  CHECK_FALSE(check_theorem2(named_example("fig3")).holds);
  CHECK_FALSE(check_theorem2(named_example("fig1")).holds);
  // player-count guard
  std::mt19937_64 rng(1);
  CHECK_FALSE(check_theorem2(random_game({2, 2, 2}, rng)).holds);
}

TEST_CASE("induced subgame enumeration counts") {
  CHECK(count_induced_subgames(zero_game({2, 2})) == 9);
  CHECK(count_induced_subgames(zero_game({2, 2, 2})) == 27);
  CHECK(count_induced_subgames(zero_game({5})) == 6);

  long long visited = 0;
  enumerate_induced_subgames(zero_game({2, 2}),
                             [&](const SubgameRef&, const InducedSubgame&) {
                               ++visited;
                               return true;
                             });
  CHECK(visited == 9);
}

TEST_CASE("enumeration order is size-ascending then lexicographic") {
  std::vector<SubgameRef> refs;
  enumerate_induced_subgames(zero_game({2, 3}),
                             [&](const SubgameRef& r, const InducedSubgame&) {
                               refs.push_back(r);
                               return true;
                             });
  REQUIRE(refs.size() == 12);  // 6 empty-keep + 3 + 2 + 1
  CHECK(refs[0].keep.empty());
  CHECK(refs[0].fixed == std::vector<std::pair<int, int>>{{0, 0}, {1, 0}});
  CHECK(refs[1].fixed == std::vector<std::pair<int, int>>{{0, 0}, {1, 1}});
  CHECK(refs[6].keep == std::vector<int>{0});
  CHECK(refs[6].fixed == std::vector<std::pair<int, int>>{{1, 0}});
  CHECK(refs[9].keep == std::vector<int>{1});
  CHECK(refs.back().keep == std::vector<int>{0, 1});
  CHECK(refs.back().fixed.empty());
}

TEST_CASE("induced subgame property checker") {
  // fig3 fails with the column-L subgame (row payoffs tie at 1)
  ConditionVerdict v3 = check_isp(named_example("fig3"));
  CHECK_FALSE(v3.holds);
  REQUIRE(v3.failing_subgame.has_value());
  CHECK(v3.failing_subgame->keep == std::vector<int>{0});
  CHECK(v3.failing_subgame->fixed ==
        std::vector<std::pair<int, int>>{{1, 0}});

  CHECK(check_isp(isp_example()).holds);
  CHECK(oracle_isp(isp_example()));
  // the claimed full-game NE
  CHECK(isp_example().enumerate_pure_nash() ==
        std::vector<FlatIndex>{isp_example().flat_index({1, 1})});

  CHECK_FALSE(check_isp(zero_game({2, 2})).holds);
}

TEST_CASE("exhaustive mode lists every failing subgame") {
  ConditionVerdict v = check_isp(zero_game({2, 2}), /*exhaustive=*/true);
  CHECK_FALSE(v.holds);
  // every subgame with at least one free player fails on the all-zero game
  CHECK(v.all_failures.size() == 5);
  CHECK(v.failing_subgame->keep == v.all_failures.front().keep);
}

TEST_CASE("conjecture hypothesis checker") {
  CHECK(check_conjecture_hypothesis(isp_example()).holds);
  ConditionVerdict v3 = check_conjecture_hypothesis(named_example("fig3"));
  CHECK_FALSE(v3.holds);
  REQUIRE(v3.failing_subgame.has_value());
  CHECK(v3.failing_subgame->keep == std::vector<int>{0});
  CHECK(v3.failing_subgame->fixed ==
        std::vector<std::pair<int, int>>{{1, 0}});

  // coordination game with two strict NE on the diagonal: hypothesis holds
  // even though uniqueness fails
  Game coord({2, 2}, {{Rational(2), Rational(0), Rational(0), Rational(1)},
                      {Rational(2), Rational(0), Rational(0), Rational(1)}});
  CHECK(check_conjecture_hypothesis(coord).holds);
  CHECK_FALSE(check_isp(coord).holds);
  CHECK(strict_pure_nash_set(coord).size() == 2);
}

TEST_CASE("ISP implies the conjecture hypothesis and GenWAG") {
  std::mt19937_64 rng(7);
  int isp_seen = 0;
  for (int trial = 0; trial < 4000 && isp_seen < 25; ++trial) {
    Game g = random_game({2, 2}, rng);
    ConditionVerdict isp = check_isp(g);
    if (!isp.holds) continue;
    ++isp_seen;
    CHECK(check_conjecture_hypothesis(g).holds);
    CHECK(classify(g).is_genwag);
  }
  CHECK(isp_seen > 0);
}

TEST_CASE("ISP is hereditary") {
  // random ISP games: a dominant-action bonus large enough to swamp the
  // noise makes every induced subgame dominance-solvable with strict
  // preferences, so ISP holds by construction
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<int> counts{2, 2, 2};
    std::vector<std::vector<Rational>> payoffs(3);
    for (int i = 0; i < 3; ++i)
      for (FlatIndex a = 0; a < 8; ++a) {
        ActionProfile p{int(a >> 2) & 1, int(a >> 1) & 1, int(a) & 1};
        payoffs[i].push_back(Rational(10 * (p[i] == 0) +
                                      static_cast<long long>(rng() % 4)));
      }
    Game g(counts, payoffs);
    REQUIRE(check_isp(g).holds);
    enumerate_induced_subgames(g,
                               [&](const SubgameRef&, const InducedSubgame& sub) {
                                 CHECK(check_isp(sub.game()).holds);
                                 return true;
                               });
  }
}

TEST_CASE("theorem-2 games are generalized weakly acyclic") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    Game g = random_game({3, 3}, rng);
    if (check_theorem2(g).holds) CHECK(classify(g).is_genwag);
  }
}

TEST_CASE("verdict JSON carries the witness") {
  Game fig3 = named_example("fig3");
  auto j = check_isp(fig3).to_json(fig3);
  CHECK(j.at("condition") == "isp");
  CHECK(j.at("holds") == false);
  CHECK(j.at("failing_subgame").at("keep") == std::vector<int>{0});
  CHECK(j.at("failing_subgame").contains("subgame"));
}
