#include "genwag/chain.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "genwag/errors.hpp"

namespace genwag {

namespace {

constexpr double kResidualLimit = 1e-12;

// Support digraph reachability helpers (self-loops irrelevant for these).
std::vector<std::vector<FlatIndex>> reverse_support(const ChainKernel& kernel) {
  std::vector<std::vector<FlatIndex>> radj(kernel.rows.size());
  for (FlatIndex a = 0; a < static_cast<FlatIndex>(kernel.rows.size()); ++a)
    for (const auto& [b, p] : kernel.rows[a]) radj[b].push_back(a);
  return radj;
}

std::vector<char> reverse_reachable(
    const std::vector<std::vector<FlatIndex>>& radj,
    const std::vector<char>& sources) {
  std::vector<char> reached(radj.size(), 0);
  std::deque<FlatIndex> queue;
  for (FlatIndex a = 0; a < static_cast<FlatIndex>(radj.size()); ++a)
    if (sources[a]) {
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
  return reached;
}

// Solves x = Qx + b restricted to `unknown` states and returns (x, residual).
// Q is the kernel restricted to unknown-to-unknown transitions; b collects
// mass flowing to states with known value.
std::pair<std::vector<double>, double> solve_transient(
    const ChainKernel& kernel, const std::vector<FlatIndex>& unknown,
    const std::vector<double>& known_value, const std::vector<char>& is_known) {
  const int m = static_cast<int>(unknown.size());
  std::unordered_map<FlatIndex, int> pos;
  pos.reserve(unknown.size());
  for (int k = 0; k < m; ++k) pos[unknown[k]] = k;

  Eigen::SparseMatrix<double> A(m, m);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
  std::vector<Eigen::Triplet<double>> triplets;
  for (int k = 0; k < m; ++k) {
    triplets.emplace_back(k, k, 1.0);
    for (const auto& [succ, prob] : kernel.rows[unknown[k]]) {
      double p = rational_to_double(prob);
      if (is_known[succ]) {
        b[k] += p * known_value[succ];
      } else {
        triplets.emplace_back(k, pos.at(succ), -p);
      }
    }
  }
  A.setFromTriplets(triplets.begin(), triplets.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> solver;
  solver.compute(A);
  if (solver.info() != Eigen::Success)
    throw NumericalError("transient linear system factorization failed");
  Eigen::VectorXd x = solver.solve(b);
  double residual = (A * x - b).cwiseAbs().maxCoeff();
  if (residual > kResidualLimit)
    throw NumericalError("transient solve residual " + std::to_string(residual) +
                         " exceeds 1e-12");
  std::vector<double> values(m);
  for (int k = 0; k < m; ++k) values[k] = x[k];
  return {values, residual};
}

}  // namespace

Rational transition_probability(const Game& game, const ActionProfile& from,
                                const ActionProfile& to) {
  (void)game.flat_index(to);
  Rational prob(1);
  for (int i = 0; i < game.num_players(); ++i) {
    if (game.is_satisfied(i, from)) {
      if (to[i] != from[i]) return Rational(0);
    } else {
      prob *= Rational(1, game.action_counts()[i]);
    }
  }
  return prob;
}

ChainKernel build_kernel(const Game& game) {
  const FlatIndex P = game.num_profiles();
  const int n = game.num_players();
  ChainKernel kernel;
  kernel.rows.resize(P);
  for (FlatIndex a = 0; a < P; ++a) {
    auto unsat = game.unsatisfied_set_flat(a);
    Rational prob(1);
    for (int i : unsat) prob *= Rational(1, game.action_counts()[i]);
    if (unsat.empty()) {
      kernel.rows[a] = {{a, Rational(1)}};
      continue;
    }
    ActionProfile profile = game.profile_at(a);
    FlatIndex base = a;
    std::vector<FlatIndex> stride(unsat.size());
    for (std::size_t k = 0; k < unsat.size(); ++k) {
      FlatIndex s = 1;
      for (int j = unsat[k] + 1; j < n; ++j) s *= game.action_counts()[j];
      stride[k] = s;
      base -= profile[unsat[k]] * s;
    }
    std::vector<int> odo(unsat.size(), 0);
    auto& row = kernel.rows[a];
    while (true) {
      FlatIndex target = base;
      for (std::size_t k = 0; k < unsat.size(); ++k)
        target += odo[k] * stride[k];
      row.emplace_back(target, prob);
      int k = static_cast<int>(unsat.size()) - 1;
      while (k >= 0 && ++odo[k] == game.action_counts()[unsat[k]]) odo[k--] = 0;
      if (k < 0) break;
    }
  }
  return kernel;
}

std::vector<FlatIndex> absorbing_states(const ChainKernel& kernel) {
  std::vector<FlatIndex> absorbing;
  for (FlatIndex a = 0; a < static_cast<FlatIndex>(kernel.rows.size()); ++a) {
    const auto& row = kernel.rows[a];
    if (row.size() == 1 && row[0].first == a && row[0].second == Rational(1))
      absorbing.push_back(a);
  }
  return absorbing;
}

std::vector<CommunicatingClass> communicating_classes(const ChainKernel& kernel) {
  const FlatIndex P = static_cast<FlatIndex>(kernel.rows.size());
  // Iterative Tarjan SCC over the support digraph.
  std::vector<int> index(P, -1), lowlink(P, 0), comp(P, -1);
  std::vector<char> on_stack(P, 0);
  std::vector<FlatIndex> stack;
  int next_index = 0, next_comp = 0;

  struct Frame {
    FlatIndex node;
    std::size_t child;
  };
  std::vector<Frame> call_stack;
  for (FlatIndex root = 0; root < P; ++root) {
    if (index[root] != -1) continue;
    call_stack.push_back({root, 0});
    while (!call_stack.empty()) {
      Frame& frame = call_stack.back();
      FlatIndex v = frame.node;
      if (frame.child == 0) {
        index[v] = lowlink[v] = next_index++;
        stack.push_back(v);
        on_stack[v] = 1;
      }
      bool descended = false;
      while (frame.child < kernel.rows[v].size()) {
        FlatIndex w = kernel.rows[v][frame.child++].first;
        if (index[w] == -1) {
          call_stack.push_back({w, 0});
          descended = true;
          break;
        }
        if (on_stack[w]) lowlink[v] = std::min(lowlink[v], index[w]);
      }
      if (descended) continue;
      if (lowlink[v] == index[v]) {
        while (true) {
          FlatIndex w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = next_comp;
          if (w == v) break;
        }
        ++next_comp;
      }
      call_stack.pop_back();
      if (!call_stack.empty()) {
        FlatIndex parent = call_stack.back().node;
        lowlink[parent] = std::min(lowlink[parent], lowlink[v]);
      }
    }
  }

  std::vector<CommunicatingClass> classes(next_comp);
  for (FlatIndex a = 0; a < P; ++a) classes[comp[a]].members.push_back(a);
  for (auto& c : classes) {
    std::sort(c.members.begin(), c.members.end());
    c.closed = true;
  }
  for (FlatIndex a = 0; a < P; ++a)
    for (const auto& [b, p] : kernel.rows[a])
      if (comp[b] != comp[a]) classes[comp[a]].closed = false;
  std::sort(classes.begin(), classes.end(),
            [](const CommunicatingClass& x, const CommunicatingClass& y) {
              return x.members.front() < y.members.front();
            });
  return classes;
}

AbsorptionProbability absorption_probability(const Game& game,
                                             const ChainKernel& kernel,
                                             FlatIndex start) {
  const FlatIndex P = game.num_profiles();
  if (start < 0 || start >= P) throw InputError("start profile out of range");

  std::vector<char> nash(P, 0);
  for (FlatIndex a = 0; a < P; ++a) nash[a] = game.is_pure_nash(a) ? 1 : 0;

  auto radj = reverse_support(kernel);
  // Probability-0 states: cannot reach the Nash set at all.
  std::vector<char> can_reach_nash = reverse_reachable(radj, nash);
  // Probability-1 states: cannot reach a probability-0 state.
  std::vector<char> prob0(P, 0);
  for (FlatIndex a = 0; a < P; ++a) prob0[a] = can_reach_nash[a] ? 0 : 1;
  std::vector<char> can_reach_prob0 = reverse_reachable(radj, prob0);

  if (prob0[start]) return {0.0, true, 0.0};
  if (!can_reach_prob0[start]) return {1.0, true, 0.0};

  // Remaining states are genuinely in (0,1); solve the transient system.
  std::vector<char> is_known(P, 0);
  std::vector<double> known_value(P, 0.0);
  std::vector<FlatIndex> unknown;
  for (FlatIndex a = 0; a < P; ++a) {
    if (prob0[a]) {
      is_known[a] = 1;
      known_value[a] = 0.0;
    } else if (!can_reach_prob0[a]) {
      is_known[a] = 1;
      known_value[a] = 1.0;
    } else {
      unknown.push_back(a);
    }
  }
  auto [values, residual] = solve_transient(kernel, unknown, known_value, is_known);
  for (std::size_t k = 0; k < unknown.size(); ++k)
    if (unknown[k] == start)
      return {std::clamp(values[k], 0.0, 1.0), false, residual};
  throw NumericalError("absorption solve lost the start state");
}

std::optional<double> expected_hitting_time(const Game& game,
                                            const ChainKernel& kernel,
                                            FlatIndex start) {
  AbsorptionProbability p = absorption_probability(game, kernel, start);
  if (p.value < 1.0 || !p.exact) return std::nullopt;
  if (game.is_pure_nash(start)) return 0.0;

  const FlatIndex P = game.num_profiles();
  // All states on paths from start are absorbed almost surely; the expected
  // time system is over the non-Nash states reachable from start.
  std::vector<char> seen(P, 0);
  std::deque<FlatIndex> queue{start};
  seen[start] = 1;
  while (!queue.empty()) {
    FlatIndex a = queue.front();
    queue.pop_front();
    if (game.is_pure_nash(a)) continue;
    for (const auto& [b, prob] : kernel.rows[a])
      if (!seen[b]) {
        seen[b] = 1;
        queue.push_back(b);
      }
  }
  std::vector<FlatIndex> unknown;
  std::vector<char> is_known(P, 0);
  std::vector<double> known_value(P, 0.0);
  for (FlatIndex a = 0; a < P; ++a) {
    if (!seen[a] || game.is_pure_nash(a)) {
      is_known[a] = 1;
      known_value[a] = 0.0;
    } else {
      unknown.push_back(a);
    }
  }
  // t(a) = 1 + sum_b P(a,b) t(b): fold the constant into b by shifting.
  const int m = static_cast<int>(unknown.size());
  std::unordered_map<FlatIndex, int> pos;
  for (int k = 0; k < m; ++k) pos[unknown[k]] = k;
  Eigen::SparseMatrix<double> A(m, m);
  Eigen::VectorXd b = Eigen::VectorXd::Ones(m);
  std::vector<Eigen::Triplet<double>> triplets;
  for (int k = 0; k < m; ++k) {
    triplets.emplace_back(k, k, 1.0);
    for (const auto& [succ, prob] : kernel.rows[unknown[k]])
      if (!is_known[succ])
        triplets.emplace_back(k, pos.at(succ), -rational_to_double(prob));
  }
  A.setFromTriplets(triplets.begin(), triplets.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> solver;
  solver.compute(A);
  if (solver.info() != Eigen::Success)
    throw NumericalError("hitting-time system factorization failed");
  Eigen::VectorXd x = solver.solve(b);
  double residual = (A * x - b).cwiseAbs().maxCoeff();
  if (residual > kResidualLimit)
    throw NumericalError("hitting-time residual exceeds 1e-12");
  return x[pos.at(start)];
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_trajectory_seed(std::uint64_t seed, std::uint64_t index) {
  return seed ^ (0x9E3779B97F4A7C15ULL * (index + 1));
}

Trajectory simulate(const Game& game, FlatIndex start, int steps,
                    std::uint64_t seed) {
  if (start < 0 || start >= game.num_profiles())
    throw InputError("start profile out of range");
  if (steps < 0) throw InputError("steps must be nonnegative");
  Trajectory traj;
  traj.seed = seed;
  traj.profiles.reserve(steps + 1);
  traj.profiles.push_back(start);
  std::mt19937_64 rng(splitmix64(seed));
  FlatIndex cur = start;
  for (int t = 0; t < steps; ++t) {
    auto unsat = game.unsatisfied_set_flat(cur);
    if (!unsat.empty()) {
      ActionProfile profile = game.profile_at(cur);
      for (int i : unsat)
        profile[i] = static_cast<int>(rng() % game.action_counts()[i]);
      cur = game.flat_index(profile);
    }
    traj.profiles.push_back(cur);
  }
  return traj;
}

FlatIndex inertial_better_response_step(const Game& game, FlatIndex flat,
                                        std::mt19937_64& rng) {
  auto unsat = game.unsatisfied_set_flat(flat);
  if (unsat.empty()) return flat;
  const ActionProfile current = game.profile_at(flat);
  ActionProfile next = current;
  for (int i : unsat) {
    // Better^i(a) ∪ {a^i}: the union is Better^i(a) itself under the weak
    // inequality, kept as written. All draws condition on the profile at
    // the start of the step.
    auto choices = game.better_responses(i, current);
    int pick = static_cast<int>(rng() % choices.size());
    next[i] = choices[pick];
  }
  return game.flat_index(next);
}

nlohmann::ordered_json Trajectory::to_json(const Game& game) const {
  nlohmann::ordered_json j;
  j["rng"] = kRngName;
  j["seed"] = seed;
  j["profiles"] = profiles;
  nlohmann::ordered_json labels = nlohmann::ordered_json::array();
  for (FlatIndex f : profiles) labels.push_back(game.profile_label(f));
  j["labels"] = labels;
  return j;
}

}  // namespace genwag
