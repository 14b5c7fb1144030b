#include "genwag/search.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <thread>

#include "genwag/chain.hpp"
#include "genwag/conditions.hpp"
#include "genwag/errors.hpp"
#include "genwag/graphs.hpp"

namespace genwag {

namespace {

std::string mode_name(GeneratorMode m) {
  switch (m) {
    case GeneratorMode::Exhaustive: return "exhaustive";
    case GeneratorMode::Random: return "random";
    case GeneratorMode::Named: return "named";
  }
  return "?";
}

GeneratorMode parse_mode(const std::string& s) {
  if (s == "exhaustive") return GeneratorMode::Exhaustive;
  if (s == "random") return GeneratorMode::Random;
  if (s == "named") return GeneratorMode::Named;
  throw InputError("unknown generator mode '" + s + "'");
}

long long payoff_cells(const std::vector<int>& counts) {
  long long profiles = 1;
  for (int c : counts) profiles *= c;
  return profiles * static_cast<long long>(counts.size());
}

// |alphabet|^cells, or nullopt when it exceeds 2^62.
std::optional<long long> exhaustive_total(long long base, long long cells) {
  long long total = 1;
  for (long long i = 0; i < cells; ++i) {
    if (total > (1LL << 62) / base) return std::nullopt;
    total *= base;
  }
  return total;
}

CensusBucket bucket_of(const ClassificationReport& report) {
  if (report.pure_nash.empty()) {
    // Weak acyclicity without a pure Nash equilibrium is impossible.
    if (report.is_weakly_acyclic || report.is_genwag)
      throw ConsistencyError("classifier reported acyclicity without pure Nash");
    return CensusBucket::NoPureNash;
  }
  if (report.is_weakly_acyclic) return CensusBucket::WeaklyAcyclic;
  if (report.is_genwag) return CensusBucket::GenWagNotWag;
  return CensusBucket::PureNashNotGenWag;
}

struct Checkpoint {
  std::uint64_t spec_hash = 0;
  long long next_index = 0;
  long long examined = 0;
  long long tallies[4] = {0, 0, 0, 0};
  std::vector<nlohmann::ordered_json> counterexamples;
};

void write_checkpoint(const std::string& path, const Checkpoint& cp) {
  nlohmann::ordered_json j;
  j["spec_hash"] = cp.spec_hash;
  j["next_index"] = cp.next_index;
  j["examined"] = cp.examined;
  j["tallies"] = {cp.tallies[0], cp.tallies[1], cp.tallies[2], cp.tallies[3]};
  j["counterexamples"] = cp.counterexamples;
  std::ofstream out(path + ".tmp");
  out << j.dump(2) << "\n";
  out.close();
  std::rename((path + ".tmp").c_str(), path.c_str());
}

std::optional<Checkpoint> read_checkpoint(const std::string& path,
                                          std::uint64_t spec_hash) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error&) {
    throw InputError("checkpoint file '" + path + "' is not valid JSON");
  }
  Checkpoint cp;
  cp.spec_hash = j.at("spec_hash").get<std::uint64_t>();
  if (cp.spec_hash != spec_hash)
    throw InputError("checkpoint file '" + path +
                     "' belongs to a different generator spec");
  cp.next_index = j.at("next_index").get<long long>();
  cp.examined = j.at("examined").get<long long>();
  for (int k = 0; k < 4; ++k) cp.tallies[k] = j.at("tallies")[k].get<long long>();
  for (const auto& c : j.at("counterexamples"))
    cp.counterexamples.push_back(c);
  return cp;
}

struct GameVerdict {
  CensusBucket bucket;
  bool counterexample = false;
};

// Runs `evaluate` over stream indices [from, to), workers processing
// indices round-robin. Tally reduction is associative and counterexamples
// are reassembled in index order, so results are scheduling-independent.
void run_block(const GeneratorSpec& spec, long long from, long long to,
               int workers,
               const std::function<GameVerdict(const Game&)>& evaluate,
               Checkpoint& cp) {
  workers = std::max(1, workers);
  struct Local {
    long long tallies[4] = {0, 0, 0, 0};
    std::vector<long long> hits;
    std::exception_ptr error;
  };
  std::vector<Local> locals(workers);
  auto work = [&](int w) {
    try {
      for (long long j = from + w; j < to; j += workers) {
        Game game = spec.game_at(j);
        GameVerdict v = evaluate(game);
        ++locals[w].tallies[static_cast<int>(v.bucket)];
        if (v.counterexample) locals[w].hits.push_back(j);
      }
    } catch (...) {
      locals[w].error = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(work, w);
    for (auto& t : threads) t.join();
  }
  std::vector<long long> hits;
  for (auto& local : locals) {
    if (local.error) std::rethrow_exception(local.error);
    for (int k = 0; k < 4; ++k) cp.tallies[k] += local.tallies[k];
    hits.insert(hits.end(), local.hits.begin(), local.hits.end());
  }
  std::sort(hits.begin(), hits.end());
  for (long long j : hits) {
    // Re-verify from scratch, single-threaded, before reporting.
    Game game = spec.game_at(j);
    if (!evaluate(game).counterexample)
      throw ConsistencyError("counterexample at index " + std::to_string(j) +
                             " failed re-verification");
    nlohmann::ordered_json entry;
    entry["index"] = j;
    entry["game"] = game.to_json();
    cp.counterexamples.push_back(entry);
  }
  cp.examined += to - from;
  cp.next_index = to;
}

SearchReport run_search(const GeneratorSpec& spec, const SearchOptions& opts,
                        const std::string& predicate,
                        const std::function<GameVerdict(const Game&)>& evaluate) {
  auto t0 = std::chrono::steady_clock::now();
  const long long total = spec.num_games();

  Checkpoint cp;
  cp.spec_hash = spec.hash();
  if (!opts.checkpoint_path.empty())
    if (auto resumed = read_checkpoint(opts.checkpoint_path, cp.spec_hash))
      cp = *resumed;

  long long limit_end = total;
  if (opts.limit > 0) limit_end = std::min(total, cp.next_index + opts.limit);
  long long every = opts.checkpoint_every > 0 ? opts.checkpoint_every : total;

  while (cp.next_index < limit_end) {
    long long block_end = std::min(limit_end, cp.next_index + every);
    run_block(spec, cp.next_index, block_end, opts.workers, evaluate, cp);
    if (!opts.checkpoint_path.empty()) write_checkpoint(opts.checkpoint_path, cp);
  }

  SearchReport report;
  report.predicate = predicate;
  report.examined = cp.examined;
  for (int k = 0; k < 4; ++k) report.tallies[k] = cp.tallies[k];
  report.counterexamples = cp.counterexamples;
  report.spec_echo = spec.to_json();
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace

nlohmann::ordered_json GeneratorSpec::to_json() const {
  nlohmann::ordered_json j;
  j["mode"] = mode_name(mode);
  j["action_counts"] = action_counts;
  nlohmann::ordered_json alpha = nlohmann::ordered_json::array();
  for (const auto& r : alphabet) alpha.push_back(rational_to_string(r));
  j["alphabet"] = alpha;
  if (int_range)
    j["int_range"] = {int_range->first, int_range->second};
  else
    j["int_range"] = nullptr;
  j["seed"] = seed;
  j["count"] = count;
  j["names"] = names;
  j["slice_start"] = slice_start ? nlohmann::ordered_json(*slice_start)
                                 : nlohmann::ordered_json(nullptr);
  j["slice_stride"] = slice_stride ? nlohmann::ordered_json(*slice_stride)
                                   : nlohmann::ordered_json(nullptr);
  j["budget"] = budget;
  return j;
}

GeneratorSpec GeneratorSpec::from_json(const nlohmann::json& j) {
  GeneratorSpec spec;
  spec.mode = parse_mode(j.at("mode").get<std::string>());
  if (j.contains("action_counts"))
    spec.action_counts = j.at("action_counts").get<std::vector<int>>();
  if (j.contains("alphabet"))
    for (const auto& a : j.at("alphabet"))
      spec.alphabet.push_back(a.is_string() ? parse_rational(a.get<std::string>())
                                            : Rational(a.get<long long>()));
  if (j.contains("int_range") && !j.at("int_range").is_null())
    spec.int_range = {j.at("int_range")[0].get<long long>(),
                      j.at("int_range")[1].get<long long>()};
  if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("count")) spec.count = j.at("count").get<long long>();
  if (j.contains("names"))
    spec.names = j.at("names").get<std::vector<std::string>>();
  if (j.contains("slice_start") && !j.at("slice_start").is_null())
    spec.slice_start = j.at("slice_start").get<long long>();
  if (j.contains("slice_stride") && !j.at("slice_stride").is_null())
    spec.slice_stride = j.at("slice_stride").get<long long>();
  if (j.contains("budget")) spec.budget = j.at("budget").get<long long>();
  return spec;
}

std::uint64_t GeneratorSpec::hash() const {
  // FNV-1a over the canonical JSON encoding.
  std::string text = to_json().dump();
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

long long GeneratorSpec::num_games() const {
  switch (mode) {
    case GeneratorMode::Named:
      return static_cast<long long>(names.size());
    case GeneratorMode::Random:
      if (count <= 0) throw InputError("random mode requires a positive count");
      return count;
    case GeneratorMode::Exhaustive: {
      if (action_counts.empty())
        throw InputError("exhaustive mode requires action_counts");
      if (alphabet.empty())
        throw InputError("exhaustive mode requires a payoff alphabet");
      auto total = exhaustive_total(static_cast<long long>(alphabet.size()),
                                    payoff_cells(action_counts));
      if (slice_start || slice_stride) {
        if (!slice_start || !slice_stride || *slice_stride <= 0)
          throw InputError("a slice needs both slice_start and slice_stride > 0");
        if (!total)
          throw ResourceError("exhaustive total exceeds 2^62; unsupported");
        if (*slice_start >= *total) return 0;
        return (*total - *slice_start + *slice_stride - 1) / *slice_stride;
      }
      if (!total || *total > budget)
        throw ResourceError(
            "exhaustive game count exceeds budget; give a (start, stride) slice");
      return *total;
    }
  }
  throw InputError("bad generator mode");
}

Game GeneratorSpec::game_at(long long j) const {
  switch (mode) {
    case GeneratorMode::Named:
      return named_example(names.at(j));
    case GeneratorMode::Random: {
      const long long cells = payoff_cells(action_counts);
      const long long profiles = cells / static_cast<long long>(action_counts.size());
      std::mt19937_64 rng(splitmix64(seed ^ (0x9E3779B97F4A7C15ULL * (j + 1))));
      std::vector<std::vector<Rational>> payoffs(action_counts.size());
      for (auto& tensor : payoffs) {
        tensor.reserve(profiles);
        for (long long c = 0; c < profiles; ++c) {
          if (int_range) {
            auto [lo, hi] = *int_range;
            tensor.push_back(Rational(
                lo + static_cast<long long>(rng() % static_cast<std::uint64_t>(
                                                        hi - lo + 1))));
          } else {
            if (alphabet.empty())
              throw InputError("random mode needs an alphabet or int_range");
            tensor.push_back(alphabet[rng() % alphabet.size()]);
          }
        }
      }
      return Game(action_counts, std::move(payoffs));
    }
    case GeneratorMode::Exhaustive: {
      long long index = j;
      if (slice_start) index = *slice_start + j * *slice_stride;
      const long long base = static_cast<long long>(alphabet.size());
      const long long cells = payoff_cells(action_counts);
      const long long profiles = cells / static_cast<long long>(action_counts.size());
      // Digits base |alphabet|, first cell (player 0, profile 0) most
      // significant; cell order is player-major then flat profile index.
      std::vector<int> digits(cells, 0);
      long long rem = index;
      for (long long c = cells - 1; c >= 0; --c) {
        digits[c] = static_cast<int>(rem % base);
        rem /= base;
      }
      if (rem != 0) throw InputError("exhaustive index out of range");
      std::vector<std::vector<Rational>> payoffs(action_counts.size());
      for (std::size_t i = 0; i < action_counts.size(); ++i) {
        payoffs[i].reserve(profiles);
        for (long long c = 0; c < profiles; ++c)
          payoffs[i].push_back(alphabet[digits[i * profiles + c]]);
      }
      return Game(action_counts, std::move(payoffs));
    }
  }
  throw InputError("bad generator mode");
}

nlohmann::ordered_json SearchReport::to_json() const {
  nlohmann::ordered_json j;
  j["predicate"] = predicate;
  j["examined"] = examined;
  j["tallies"] = {{"no_pure_nash", tallies[0]},
                  {"weakly_acyclic", tallies[1]},
                  {"genwag_not_wag", tallies[2]},
                  {"pure_nash_not_genwag", tallies[3]}};
  j["counterexamples"] = counterexamples;
  j["spec"] = spec_echo;
  return j;
}

TheoremId parse_theorem_id(const std::string& name) {
  if (name == "theorem1") return TheoremId::Theorem1;
  if (name == "theorem2") return TheoremId::Theorem2;
  if (name == "theorem3") return TheoremId::Theorem3;
  if (name == "lemma2") return TheoremId::Lemma2;
  if (name == "eq1") return TheoremId::Eq1;
  throw InputError("unknown sweep '" + name +
                   "' (theorem1, theorem2, theorem3, lemma2, eq1)");
}

std::string theorem_id_name(TheoremId id) {
  switch (id) {
    case TheoremId::Theorem1: return "theorem1";
    case TheoremId::Theorem2: return "theorem2";
    case TheoremId::Theorem3: return "theorem3";
    case TheoremId::Lemma2: return "lemma2";
    case TheoremId::Eq1: return "eq1";
  }
  return "?";
}

SearchReport census(const GeneratorSpec& spec, const SearchOptions& opts) {
  return run_search(spec, opts, "census", [](const Game& game) {
    return GameVerdict{bucket_of(classify(game)), false};
  });
}

SearchReport hunt_conjecture(const GeneratorSpec& spec,
                             const SearchOptions& opts) {
  return run_search(spec, opts, "conjecture", [](const Game& game) {
    ClassificationReport report = classify(game);
    GameVerdict v{bucket_of(report), false};
    if (!report.is_genwag && check_conjecture_hypothesis(game).holds)
      v.counterexample = true;
    return v;
  });
}

namespace {

bool subset(const std::vector<std::vector<FlatIndex>>& a,
            const std::vector<std::vector<FlatIndex>>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!std::includes(b[i].begin(), b[i].end(), a[i].begin(), a[i].end()))
      return false;
  return true;
}

void check_theorem(const Game& game, TheoremId which) {
  auto fail = [&](const std::string& what) {
    throw ConsistencyError("sweep " + theorem_id_name(which) + " violated (" +
                           what + ") on game: " + game.to_json().dump());
  };
  switch (which) {
    case TheoremId::Eq1: {
      auto best = build_graph(game, GraphKind::Best);
      auto better = build_graph(game, GraphKind::Better);
      auto sat = build_graph(game, GraphKind::Sat);
      if (!subset(best.adj, better.adj)) fail("best edges not within better");
      if (!subset(better.adj, sat.adj)) fail("better edges not within sat");
      break;
    }
    case TheoremId::Lemma2: {
      ChainKernel kernel = build_kernel(game);
      if (absorbing_states(kernel) != game.enumerate_pure_nash())
        fail("absorbing set differs from pure Nash set");
      break;
    }
    case TheoremId::Theorem1: {
      bool genwag = classify(game).is_genwag;
      ChainKernel kernel = build_kernel(game);
      bool all_closed_have_nash = true;
      for (const auto& cls : communicating_classes(kernel)) {
        if (!cls.closed) continue;
        bool has_nash = false;
        for (FlatIndex a : cls.members)
          if (game.is_pure_nash(a)) has_nash = true;
        if (!has_nash) all_closed_have_nash = false;
      }
      bool all_absorb = true;
      for (FlatIndex a = 0; a < game.num_profiles(); ++a) {
        AbsorptionProbability p = absorption_probability(game, kernel, a);
        if (!(p.exact && p.value == 1.0)) all_absorb = false;
      }
      if (genwag != all_closed_have_nash)
        fail("genwag vs closed-class criterion");
      if (genwag != all_absorb) fail("genwag vs absorption probability 1");
      break;
    }
    case TheoremId::Theorem2: {
      if (game.num_players() == 2 && check_theorem2(game).holds &&
          !classify(game).is_genwag)
        fail("strict NE in a two-player game that is not GenWAG");
      break;
    }
    case TheoremId::Theorem3: {
      if (check_isp(game).holds && !classify(game).is_genwag)
        fail("ISP game that is not GenWAG");
      break;
    }
  }
}

}  // namespace

SearchReport hunt_theorem_violations(const GeneratorSpec& spec, TheoremId which,
                                     const SearchOptions& opts) {
  return run_search(spec, opts, "sweep_" + theorem_id_name(which),
                    [which](const Game& game) {
                      check_theorem(game, which);
                      return GameVerdict{bucket_of(classify(game)), false};
                    });
}

}  // namespace genwag
