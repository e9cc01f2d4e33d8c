// Monte Carlo play of the detective-free mafia game under uniform randomized
// strategies, for statistical cross-checks of the exact recursion.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "core.hpp"
#include "parallel.hpp"

namespace mafia {

enum class Fidelity { state_level, vote_level };
enum class Winner { mafia, civilians };

inline const char* to_string(Fidelity f) { return f == Fidelity::state_level ? "state" : "vote"; }

struct SimConfig {
  std::int64_t trials = 1;
  std::uint64_t seed = 0;
  Fidelity fidelity = Fidelity::state_level;
  RoundStructure rounds{};
};

struct SimResult {
  std::int64_t wins = 0;
  std::int64_t trials = 0;
  double estimate = 0.0;
  double std_error = 0.0;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

using rng_type = std::mt19937_64;

/// Independent stream for trial `index` of a run seeded with `seed`.
inline rng_type trial_stream(std::uint64_t seed, std::uint64_t index) {
  return rng_type(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
}

namespace detail {

inline std::int64_t uniform_index(rng_type& rng, std::int64_t count) {
  return std::uniform_int_distribution<std::int64_t>(0, count - 1)(rng);
}

/// One day vote among `alive` players: everyone votes for a uniformly random
/// other player, the top-voted player is eliminated with ties broken
/// uniformly. Returns the eliminated seat.
inline std::int64_t day_vote(std::int64_t alive, rng_type& rng, std::vector<std::int64_t>& votes,
                             std::vector<std::int64_t>& leaders) {
  if (alive == 1) return 0;
  votes.assign(static_cast<std::size_t>(alive), 0);
  for (std::int64_t voter = 0; voter < alive; ++voter) {
    std::int64_t target = uniform_index(rng, alive - 1);
    if (target >= voter) ++target;
    ++votes[target];
  }
  const std::int64_t top = *std::max_element(votes.begin(), votes.end());
  leaders.clear();
  for (std::int64_t seat = 0; seat < alive; ++seat)
    if (votes[seat] == top) leaders.push_back(seat);
  return leaders[uniform_index(rng, static_cast<std::int64_t>(leaders.size()))];
}

}  // namespace detail

/// Plays one game to absorption. Vote-level fidelity needs the classic
/// (2,1) rounds; generalized rounds use the compound block step.
inline Winner play_game(GameState state, const SimConfig& config, rng_type& rng) {
  require_user_state(state);
  if (config.fidelity == Fidelity::vote_level && !config.rounds.is_classic())
    throw error(error_kind::invalid_params, "vote-level simulation supports only (2,1) rounds");

  auto absorbed = [](GameState s, Winner& w) {
    if (s.m <= 0) return w = Winner::civilians, true;
    if (s.n < s.m) return w = Winner::mafia, true;
    return false;
  };

  Winner winner{};
  std::int64_t steps = 0;
  const std::int64_t step_limit = state.population() + 1;

  if (!config.rounds.is_classic()) {
    const std::int64_t r = config.rounds.rounds(), d = config.rounds.days();
    while (!absorbed(state, winner)) {
      if (++steps > step_limit) throw error(error_kind::invalid_state, "simulation failed to absorb");
      if (detail::uniform_index(rng, state.population()) < state.n) {
        state.n -= r;
      } else {
        state.m -= d;
        state.n -= r - d;
      }
    }
    return winner;
  }

  std::vector<std::int64_t> votes, leaders;
  while (!absorbed(state, winner)) {
    if (++steps > step_limit) throw error(error_kind::invalid_state, "simulation failed to absorb");
    // Day. Seats [0, n) are civilians, [n, n+m) mafias.
    const std::int64_t seat = config.fidelity == Fidelity::state_level
                                  ? detail::uniform_index(rng, state.population())
                                  : detail::day_vote(state.population(), rng, votes, leaders);
    if (seat < state.n)
      --state.n;
    else
      --state.m;
    if (absorbed(state, winner)) break;
    // Night: the mafia kills one civilian; which one does not affect counts.
    --state.n;
  }
  return winner;
}

/// Runs config.trials independent games, trial i on trial_stream(seed, i).
/// Deterministic regardless of the worker count.
inline SimResult estimate(GameState state, const SimConfig& config) {
  require_user_state(state);
  if (config.trials < 1) throw error(error_kind::invalid_params, "trials must be >= 1");

  const unsigned chunks = std::min<unsigned>(worker_count(), static_cast<unsigned>(std::max<std::int64_t>(config.trials / 1024, 1)));
  std::vector<std::int64_t> wins(chunks, 0);
  parallel_chunks(config.trials, chunks, [&](unsigned c, std::int64_t begin, std::int64_t end) {
    std::int64_t local = 0;
    for (std::int64_t i = begin; i < end; ++i) {
      auto rng = trial_stream(config.seed, static_cast<std::uint64_t>(i));
      if (play_game(state, config, rng) == Winner::mafia) ++local;
    }
    wins[c] = local;
  });

  SimResult res;
  res.trials = config.trials;
  res.wins = std::accumulate(wins.begin(), wins.end(), std::int64_t{0});
  res.estimate = static_cast<double>(res.wins) / static_cast<double>(res.trials);
  res.std_error = std::sqrt(res.estimate * (1.0 - res.estimate) / static_cast<double>(res.trials));
  return res;
}

struct EliminationStats {
  std::vector<std::int64_t> counts;
  std::vector<double> frequency;
  double chi_square = 0.0;
  int degrees_of_freedom = 0;
};

/// Elimination frequency of each seat in a single vote-level day round among
/// symmetric players, with Pearson's chi-square against uniform.
inline EliminationStats elimination_distribution(std::int64_t players, std::int64_t trials, std::uint64_t seed) {
  if (players < 2) throw error(error_kind::invalid_params, "need at least two players");
  if (trials < 1) throw error(error_kind::invalid_params, "trials must be >= 1");
  EliminationStats st;
  st.counts.assign(static_cast<std::size_t>(players), 0);
  std::vector<std::int64_t> votes, leaders;
  for (std::int64_t i = 0; i < trials; ++i) {
    auto rng = trial_stream(seed, static_cast<std::uint64_t>(i));
    ++st.counts[detail::day_vote(players, rng, votes, leaders)];
  }
  const double expected = static_cast<double>(trials) / static_cast<double>(players);
  for (const auto c : st.counts) {
    st.frequency.push_back(static_cast<double>(c) / static_cast<double>(trials));
    const double diff = static_cast<double>(c) - expected;
    st.chi_square += diff * diff / expected;
  }
  st.degrees_of_freedom = static_cast<int>(players - 1);
  return st;
}

}  // namespace mafia
