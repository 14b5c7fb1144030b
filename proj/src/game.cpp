#include "genwag/game.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "genwag/errors.hpp"

namespace genwag {

namespace {

constexpr long long kDefaultProfileCap = 1'000'000;

Rational json_to_rational(const nlohmann::json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_number_unsigned()) return Rational(static_cast<long long>(j.get<unsigned long long>()));
  if (j.is_number_float()) {
    // Doubles are dyadic rationals; convert exactly or refuse.
    double d = j.get<double>();
    long long den = 1;
    while (d != std::floor(d)) {
      if (den > (1LL << 52) || std::abs(d) > 4.5e15)
        throw InputError(where + ": float not exactly representable, use a \"p/q\" string");
      d *= 2;
      den *= 2;
    }
    if (std::abs(d) > 9e18) throw InputError(where + ": value out of range");
    return Rational(static_cast<long long>(d), den);
  }
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const InputError& e) {
      throw InputError(where + ": " + e.what());
    }
  }
  throw InputError(where + ": payoff must be an integer or a rational string");
}

// Flattens the depth-n nested payoff tensor of one player, checking shape.
void flatten_tensor(const nlohmann::json& node, const std::vector<int>& counts,
                    int depth, std::vector<int>& coord, int player,
                    std::vector<Rational>& out) {
  std::ostringstream where;
  where << "payoffs[" << player << "]";
  for (int c : coord) where << "[" << c << "]";
  if (depth == static_cast<int>(counts.size())) {
    out.push_back(json_to_rational(node, where.str()));
    return;
  }
  if (!node.is_array())
    throw InputError(where.str() + ": expected a list of length " +
                     std::to_string(counts[depth]));
  if (static_cast<int>(node.size()) != counts[depth])
    throw InputError(where.str() + ": expected " + std::to_string(counts[depth]) +
                     " entries, got " + std::to_string(node.size()));
  for (int a = 0; a < counts[depth]; ++a) {
    coord.push_back(a);
    flatten_tensor(node[a], counts, depth + 1, coord, player, out);
    coord.pop_back();
  }
}

nlohmann::ordered_json nest_tensor(const std::vector<Rational>& flat,
                                   const std::vector<int>& counts, int depth,
                                   FlatIndex base, FlatIndex stride) {
  if (depth == static_cast<int>(counts.size())) {
    const Rational& r = flat[base];
    if (r.denominator() == 1) return r.numerator();
    return rational_to_string(r);
  }
  FlatIndex child_stride = stride / counts[depth];
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (int a = 0; a < counts[depth]; ++a)
    arr.push_back(nest_tensor(flat, counts, depth + 1, base + a * child_stride,
                              child_stride));
  return arr;
}

}  // namespace

long long profile_cap() {
  static const long long cap = [] {
    if (const char* env = std::getenv("GENWAG_PROFILE_CAP")) {
      char* end = nullptr;
      long long v = std::strtoll(env, &end, 10);
      if (end && *end == '\0' && v > 0) return v;
    }
    return kDefaultProfileCap;
  }();
  return cap;
}

Game::Game(std::vector<int> action_counts,
           std::vector<std::vector<Rational>> payoffs,
           std::vector<std::vector<std::string>> action_labels)
    : counts_(std::move(action_counts)),
      payoffs_(std::move(payoffs)),
      labels_(std::move(action_labels)) {
  const int n = num_players();
  strides_.assign(n, 1);
  num_profiles_ = 1;
  for (int i = n - 1; i >= 0; --i) {
    if (counts_[i] < 1) throw InputError("action_counts must be positive");
    strides_[i] = num_profiles_;
    if (num_profiles_ > profile_cap() / counts_[i])
      throw ResourceError("profile count exceeds cap of " +
                          std::to_string(profile_cap()));
    num_profiles_ *= counts_[i];
  }
  // Player 0 most significant: strides computed above are for player-last
  // least significant, which is the same thing.
  if (static_cast<int>(payoffs_.size()) != n)
    throw InputError("expected one payoff tensor per player");
  for (int i = 0; i < n; ++i)
    if (static_cast<FlatIndex>(payoffs_[i].size()) != num_profiles_)
      throw InputError("player " + std::to_string(i) +
                       " payoff tensor has wrong size");
  if (labels_.empty()) {
    labels_.resize(n);
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < counts_[i]; ++a)
        labels_[i].push_back(std::to_string(a));
  } else {
    if (static_cast<int>(labels_.size()) != n)
      throw InputError("expected one label list per player");
    for (int i = 0; i < n; ++i)
      if (static_cast<int>(labels_[i].size()) != counts_[i])
        throw InputError("player " + std::to_string(i) +
                         " label list has wrong size");
  }
}

FlatIndex Game::flat_index(const ActionProfile& profile) const {
  if (static_cast<int>(profile.size()) != num_players())
    throw InputError("profile has wrong length");
  FlatIndex flat = 0;
  for (int i = 0; i < num_players(); ++i) {
    if (profile[i] < 0 || profile[i] >= counts_[i])
      throw InputError("action index " + std::to_string(profile[i]) +
                       " out of range for player " + std::to_string(i));
    flat += profile[i] * strides_[i];
  }
  return flat;
}

ActionProfile Game::profile_at(FlatIndex flat) const {
  if (flat < 0 || flat >= num_profiles_)
    throw InputError("flat profile index out of range");
  ActionProfile profile(num_players());
  for (int i = 0; i < num_players(); ++i) {
    profile[i] = static_cast<int>(flat / strides_[i]);
    flat %= strides_[i];
  }
  return profile;
}

std::string Game::profile_label(FlatIndex flat) const {
  ActionProfile p = profile_at(flat);
  std::string out = "(";
  for (int i = 0; i < num_players(); ++i) {
    if (i) out += ",";
    out += labels_[i][p[i]];
  }
  return out + ")";
}

ActionProfile Game::parse_profile(const std::string& text) const {
  std::string body = text;
  if (body.size() >= 2 && body.front() == '(' && body.back() == ')')
    body = body.substr(1, body.size() - 2);
  std::vector<std::string> tokens;
  std::stringstream ss(body);
  std::string tok;
  while (std::getline(ss, tok, ',')) tokens.push_back(tok);
  if (static_cast<int>(tokens.size()) != num_players())
    throw InputError("profile '" + text + "' has " +
                     std::to_string(tokens.size()) + " entries, expected " +
                     std::to_string(num_players()));
  ActionProfile profile(num_players());
  for (int i = 0; i < num_players(); ++i) {
    auto it = std::find(labels_[i].begin(), labels_[i].end(), tokens[i]);
    if (it != labels_[i].end()) {
      profile[i] = static_cast<int>(it - labels_[i].begin());
      continue;
    }
    try {
      profile[i] = std::stoi(tokens[i]);
    } catch (const std::exception&) {
      throw InputError("unknown action '" + tokens[i] + "' for player " +
                       std::to_string(i));
    }
    if (profile[i] < 0 || profile[i] >= counts_[i])
      throw InputError("action index " + tokens[i] + " out of range for player " +
                       std::to_string(i));
  }
  return profile;
}

const Rational& Game::payoff(int player, const ActionProfile& profile) const {
  if (player < 0 || player >= num_players())
    throw InputError("player index out of range");
  return payoffs_[player][flat_index(profile)];
}

std::vector<int> Game::best_responses(int player,
                                      const ActionProfile& profile) const {
  if (player < 0 || player >= num_players())
    throw InputError("player index out of range");
  FlatIndex flat = flat_index(profile);
  FlatIndex base = flat - profile[player] * strides_[player];
  std::vector<int> best;
  const Rational* best_value = nullptr;
  for (int a = 0; a < counts_[player]; ++a) {
    const Rational& v = payoffs_[player][base + a * strides_[player]];
    if (!best_value || v > *best_value) {
      best_value = &v;
      best.clear();
      best.push_back(a);
    } else if (v == *best_value) {
      best.push_back(a);
    }
  }
  return best;
}

std::vector<int> Game::better_responses(int player,
                                        const ActionProfile& profile) const {
  if (player < 0 || player >= num_players())
    throw InputError("player index out of range");
  FlatIndex flat = flat_index(profile);
  FlatIndex base = flat - profile[player] * strides_[player];
  const Rational& threshold = payoffs_[player][flat];
  std::vector<int> better;
  for (int a = 0; a < counts_[player]; ++a)
    if (payoffs_[player][base + a * strides_[player]] >= threshold)
      better.push_back(a);
  return better;
}

bool Game::is_satisfied_flat(int player, FlatIndex flat) const {
  int current = static_cast<int>(flat / strides_[player]) % counts_[player];
  FlatIndex base = flat - current * strides_[player];
  const Rational& value = payoffs_[player][flat];
  for (int a = 0; a < counts_[player]; ++a)
    if (payoffs_[player][base + a * strides_[player]] > value) return false;
  return true;
}

bool Game::is_satisfied(int player, const ActionProfile& profile) const {
  if (player < 0 || player >= num_players())
    throw InputError("player index out of range");
  return is_satisfied_flat(player, flat_index(profile));
}

std::vector<int> Game::satisfied_set(const ActionProfile& profile) const {
  return satisfied_set_flat(flat_index(profile));
}

std::vector<int> Game::satisfied_set_flat(FlatIndex flat) const {
  std::vector<int> sat;
  for (int i = 0; i < num_players(); ++i)
    if (is_satisfied_flat(i, flat)) sat.push_back(i);
  return sat;
}

std::vector<int> Game::unsatisfied_set_flat(FlatIndex flat) const {
  std::vector<int> unsat;
  for (int i = 0; i < num_players(); ++i)
    if (!is_satisfied_flat(i, flat)) unsat.push_back(i);
  return unsat;
}

bool Game::is_pure_nash(FlatIndex flat) const {
  for (int i = 0; i < num_players(); ++i)
    if (!is_satisfied_flat(i, flat)) return false;
  return true;
}

std::vector<FlatIndex> Game::enumerate_pure_nash() const {
  std::vector<FlatIndex> nash;
  for (FlatIndex a = 0; a < num_profiles_; ++a)
    if (is_pure_nash(a)) nash.push_back(a);
  return nash;
}

bool Game::is_strict_pure_nash_flat(FlatIndex flat) const {
  for (int i = 0; i < num_players(); ++i) {
    int current = static_cast<int>(flat / strides_[i]) % counts_[i];
    FlatIndex base = flat - current * strides_[i];
    const Rational& value = payoffs_[i][flat];
    for (int a = 0; a < counts_[i]; ++a)
      if (a != current && payoffs_[i][base + a * strides_[i]] >= value)
        return false;
  }
  return true;
}

bool Game::is_strict_pure_nash(const ActionProfile& profile) const {
  return is_strict_pure_nash_flat(flat_index(profile));
}

InducedSubgame Game::induced_subgame(
    const std::vector<int>& keep,
    const std::vector<std::pair<int, int>>& fixed) const {
  const int n = num_players();
  std::vector<char> kept(n, 0);
  for (int i : keep) {
    if (i < 0 || i >= n) throw InputError("keep: player index out of range");
    if (kept[i]) throw InputError("keep: duplicate player " + std::to_string(i));
    kept[i] = 1;
  }
  ActionProfile frozen(n, -1);
  for (auto [player, action] : fixed) {
    if (player < 0 || player >= n)
      throw InputError("fixed: player index out of range");
    if (kept[player])
      throw InputError("player " + std::to_string(player) +
                       " appears in both keep and fixed");
    if (frozen[player] != -1)
      throw InputError("fixed: duplicate player " + std::to_string(player));
    if (action < 0 || action >= counts_[player])
      throw InputError("fixed: action out of range for player " +
                       std::to_string(player));
    frozen[player] = action;
  }
  for (int i = 0; i < n; ++i)
    if (!kept[i] && frozen[i] == -1)
      throw InputError("player " + std::to_string(i) +
                       " is neither kept nor fixed");

  std::vector<int> players;
  std::vector<int> sub_counts;
  std::vector<std::vector<std::string>> sub_labels;
  for (int i = 0; i < n; ++i)
    if (kept[i]) {
      players.push_back(i);
      sub_counts.push_back(counts_[i]);
      sub_labels.push_back(labels_[i]);
    }
  const int m = static_cast<int>(players.size());
  FlatIndex sub_profiles = 1;
  for (int c : sub_counts) sub_profiles *= c;

  std::vector<std::vector<Rational>> sub_payoffs(
      m, std::vector<Rational>(sub_profiles, Rational(0)));
  ActionProfile full = frozen;
  ActionProfile sub(m, 0);
  for (FlatIndex s = 0; s < sub_profiles; ++s) {
    FlatIndex rem = s;
    for (int k = m - 1; k >= 0; --k) {
      sub[k] = static_cast<int>(rem % sub_counts[k]);
      rem /= sub_counts[k];
    }
    for (int k = 0; k < m; ++k) full[players[k]] = sub[k];
    FlatIndex f = flat_index(full);
    for (int k = 0; k < m; ++k) sub_payoffs[k][s] = payoffs_[players[k]][f];
  }

  auto sub_game = std::make_shared<const Game>(
      std::move(sub_counts), std::move(sub_payoffs), std::move(sub_labels));
  return InducedSubgame(std::move(players), std::move(frozen), std::move(sub_game));
}

ActionProfile InducedSubgame::lift(const ActionProfile& sub) const {
  if (sub.size() != players.size())
    throw InputError("subgame profile has wrong length");
  ActionProfile full = fixed;
  for (std::size_t k = 0; k < players.size(); ++k) full[players[k]] = sub[k];
  return full;
}

nlohmann::ordered_json Game::to_json() const {
  nlohmann::ordered_json j;
  j["players"] = num_players();
  j["action_counts"] = counts_;
  j["action_labels"] = labels_;
  nlohmann::ordered_json tensors = nlohmann::ordered_json::array();
  for (int i = 0; i < num_players(); ++i)
    tensors.push_back(nest_tensor(payoffs_[i], counts_, 0, 0, num_profiles_));
  j["payoffs"] = tensors;
  return j;
}

Game Game::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("game file: expected a JSON object");
  for (const char* field : {"players", "action_counts", "payoffs"})
    if (!j.contains(field))
      throw InputError(std::string("game file: missing field '") + field + "'");
  int n = j.at("players").get<int>();
  if (n < 1) throw InputError("players must be >= 1");
  std::vector<int> counts = j.at("action_counts").get<std::vector<int>>();
  if (static_cast<int>(counts.size()) != n)
    throw InputError("action_counts length does not match players");
  const auto& tensors = j.at("payoffs");
  if (!tensors.is_array() || static_cast<int>(tensors.size()) != n)
    throw InputError("payoffs must list one tensor per player");
  std::vector<std::vector<Rational>> payoffs(n);
  for (int i = 0; i < n; ++i) {
    std::vector<int> coord;
    flatten_tensor(tensors[i], counts, 0, coord, i, payoffs[i]);
  }
  std::vector<std::vector<std::string>> labels;
  if (j.contains("action_labels") && !j.at("action_labels").is_null())
    labels = j.at("action_labels").get<std::vector<std::vector<std::string>>>();
  return Game(std::move(counts), std::move(payoffs), std::move(labels));
}

Game Game::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("game file: ") + e.what());
  }
  return from_json(j);
}

bool Game::payoff_identical(const Game& other) const {
  return counts_ == other.counts_ && payoffs_ == other.payoffs_;
}

Game named_example(const std::string& name) {
  if (name == "fig1") {
    // 2x2 discoordination game: the row player wants to match, the column
    // player wants to mismatch. No pure Nash equilibrium.
    return Game({2, 2},
                {{1, 0, 0, 1},   // row: (A,a) (A,b) (B,a) (B,b)
                 {0, 1, 1, 0}},
                {{"A", "B"}, {"a", "b"}});
  }
  if (name == "fig2") {
    // Unique strict pure Nash equilibrium (T,L); not weakly acyclic but
    // generalized weakly acyclic.
    return Game({3, 3},
                {{9, 0, 0, 0, 2, 1, 0, 1, 2},
                 {9, 0, 0, 0, 1, 2, 0, 2, 1}},
                {{"T", "M", "B"}, {"L", "C", "R"}});
  }
  if (name == "fig3") {
    // Unique non-strict pure Nash equilibrium (T,L); not generalized weakly
    // acyclic: indifference keeps four profiles away from equilibrium.
    return Game({3, 3},
                {{1, 0, 0, 1, 1, 0, 1, 0, 1},
                 {1, 1, 1, 0, 0, 1, 0, 1, 0}},
                {{"T", "M", "B"}, {"L", "C", "R"}});
  }
  throw InputError("unknown example '" + name + "' (try fig1, fig2, fig3)");
}

std::vector<std::string> named_example_list() { return {"fig1", "fig2", "fig3"}; }

Game load_game(const std::string& name_or_path) {
  for (const auto& n : named_example_list())
    if (name_or_path == n) return named_example(n);
  std::ifstream in(name_or_path);
  if (!in) throw InputError("cannot open game file '" + name_or_path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return Game::from_json_text(buffer.str());
}

}  // namespace genwag
