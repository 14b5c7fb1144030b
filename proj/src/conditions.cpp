#include "genwag/conditions.hpp"

#include <algorithm>

#include "genwag/errors.hpp"

namespace genwag {

namespace {

// Visits all k-element subsets of {0,...,n-1} in lexicographic member order.
template <typename Fn>
void for_each_subset_of_size(int n, int k, Fn&& fn) {
  std::vector<int> subset(k);
  for (int i = 0; i < k; ++i) subset[i] = i;
  while (true) {
    fn(subset);
    int i = k - 1;
    while (i >= 0 && subset[i] == n - k + i) --i;
    if (i < 0) break;
    ++subset[i];
    for (int j = i + 1; j < k; ++j) subset[j] = subset[j - 1] + 1;
  }
}

ConditionVerdict check_subgame_condition(
    const Game& game, Condition which, bool exhaustive,
    const std::function<bool(const Game&)>& subgame_ok) {
  ConditionVerdict verdict;
  verdict.condition = which;
  verdict.holds = true;
  enumerate_induced_subgames(
      game, [&](const SubgameRef& ref, const InducedSubgame& sub) {
        if (subgame_ok(sub.game())) return true;
        if (verdict.holds) {
          verdict.holds = false;
          verdict.failing_subgame = ref;
        }
        if (!exhaustive) return false;  // early exit
        verdict.all_failures.push_back(ref);
        return true;
      });
  return verdict;
}

}  // namespace

std::string condition_name(Condition c) {
  switch (c) {
    case Condition::Theorem2: return "theorem2";
    case Condition::ISP: return "isp";
    case Condition::ConjectureHypothesis: return "conjecture_hypothesis";
  }
  return "?";
}

std::vector<FlatIndex> strict_pure_nash_set(const Game& game) {
  std::vector<FlatIndex> strict;
  for (FlatIndex a : game.enumerate_pure_nash())
    if (game.is_strict_pure_nash_flat(a)) strict.push_back(a);
  return strict;
}

ConditionVerdict check_theorem2(const Game& game) {
  ConditionVerdict verdict;
  verdict.condition = Condition::Theorem2;
  if (game.num_players() != 2) {
    verdict.holds = false;
    return verdict;
  }
  auto strict = strict_pure_nash_set(game);
  verdict.holds = !strict.empty();
  if (verdict.holds) verdict.strict_nash = strict.front();
  return verdict;
}

long long count_induced_subgames(const Game& game) {
  // sum over subsets N of prod_{i not in N} |A^i|
  // = prod_i (|A^i| + 1).
  long long total = 1;
  for (int c : game.action_counts()) {
    if (total > (1LL << 62) / (c + 1))
      throw ResourceError("induced subgame count overflows");
    total *= c + 1;
  }
  return total;
}

void enumerate_induced_subgames(
    const Game& game,
    const std::function<bool(const SubgameRef&, const InducedSubgame&)>& visit,
    long long cap) {
  const int n = game.num_players();
  if (cap > 0 && count_induced_subgames(game) > cap)
    throw ResourceError("induced subgame enumeration exceeds cap of " +
                        std::to_string(cap));
  bool stop = false;
  for (int size = 0; size <= n && !stop; ++size) {
    for_each_subset_of_size(n, size, [&](const std::vector<int>& keep) {
      if (stop) return;
      std::vector<int> frozen;
      for (int i = 0, k = 0; i < n; ++i) {
        if (k < size && keep[k] == i)
          ++k;
        else
          frozen.push_back(i);
      }
      // Lexicographic over frozen assignments, lowest player most
      // significant.
      std::vector<int> assign(frozen.size(), 0);
      while (true) {
        SubgameRef ref;
        ref.keep = keep;
        for (std::size_t k = 0; k < frozen.size(); ++k)
          ref.fixed.emplace_back(frozen[k], assign[k]);
        InducedSubgame sub = game.induced_subgame(ref.keep, ref.fixed);
        if (!visit(ref, sub)) {
          stop = true;
          return;
        }
        int k = static_cast<int>(frozen.size()) - 1;
        while (k >= 0 && ++assign[k] == game.action_counts()[frozen[k]])
          assign[k--] = 0;
        if (k < 0) break;
      }
    });
  }
}

ConditionVerdict check_isp(const Game& game, bool exhaustive) {
  return check_subgame_condition(
      game, Condition::ISP, exhaustive, [](const Game& sub) {
        auto nash = sub.enumerate_pure_nash();
        return nash.size() == 1 && sub.is_strict_pure_nash_flat(nash[0]);
      });
}

ConditionVerdict check_conjecture_hypothesis(const Game& game, bool exhaustive) {
  return check_subgame_condition(
      game, Condition::ConjectureHypothesis, exhaustive, [](const Game& sub) {
        for (FlatIndex a : sub.enumerate_pure_nash())
          if (sub.is_strict_pure_nash_flat(a)) return true;
        return false;
      });
}

nlohmann::ordered_json SubgameRef::to_json(const Game& parent) const {
  nlohmann::ordered_json j;
  j["keep"] = keep;
  nlohmann::ordered_json fixed_j = nlohmann::ordered_json::object();
  for (auto [player, action] : fixed)
    fixed_j[std::to_string(player)] = action;
  j["fixed"] = fixed_j;
  j["subgame"] = parent.induced_subgame(keep, fixed).game().to_json();
  return j;
}

nlohmann::ordered_json ConditionVerdict::to_json(const Game& game) const {
  nlohmann::ordered_json j;
  j["condition"] = condition_name(condition);
  j["holds"] = holds;
  if (strict_nash) {
    j["strict_nash"] = *strict_nash;
    j["strict_nash_label"] = game.profile_label(*strict_nash);
  }
  if (failing_subgame) j["failing_subgame"] = failing_subgame->to_json(game);
  if (!all_failures.empty()) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& f : all_failures) arr.push_back(f.to_json(game));
    j["all_failures"] = arr;
  }
  return j;
}

}  // namespace genwag
