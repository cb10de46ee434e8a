// Copyright 2026 The Cheaptalk Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// The mediated game: a trusted mediator samples a joint recommendation from
// a known distribution and tells each player only their own coordinate;
// players then act by policy.

#include <cstdint>
#include <vector>

#include "cheaptalk/game.hpp"
#include "cheaptalk/policy.hpp"
#include "cheaptalk/simulation.hpp"

namespace cheaptalk {

struct MediatedRunResult {
  std::uint64_t rounds = 0;
  std::vector<double> empirical_payoffs;
  std::vector<double> payoff_std_errors;
  // Indexed by outcome index; sums to `rounds`.
  std::vector<std::uint64_t> recommendation_counts;
  Digest transcript_digest = 0;
  // Populated only with RunOptions::record_rounds.
  std::vector<RoundRecord> records;
};

template <Scalar T>
MediatedRunResult RunMediated(const NormalFormGame<T>& game,
                              const OutcomeDistribution<T>& dist,
                              const std::vector<PlayerPolicy>& policies,
                              Seed seed, std::uint64_t rounds,
                              const RunOptions& options = {}) {
  const std::size_t n = game.player_count();
  internal::DeliveryModel everyone{std::vector<bool>(n, false),
                                   std::vector<double>(n, 0.0)};
  auto r = internal::RunEngine(game, dist, policies, everyone, seed, rounds,
                               options, /*keep_delivery_masks=*/false);
  return MediatedRunResult{r.rounds, std::move(r.empirical_payoffs),
                           std::move(r.payoff_std_errors),
                           std::move(r.recommendation_counts),
                           r.transcript_digest, std::move(r.records)};
}

// For each recommendation the player can receive, the action maximizing
// their conditional expected utility. The recommendation itself is kept
// whenever it is among the maximizers; otherwise the smallest maximizing
// index wins. Recommendations with zero marginal map to themselves.
template <Scalar T>
PlayerPolicy BestConditionalDeviation(const NormalFormGame<T>& game,
                                      const OutcomeDistribution<T>& dist,
                                      PlayerIndex player) {
  CheckCompatible(game, dist);
  if (player >= game.player_count()) throw GameError("player out of range");
  const GameShape& shape = game.shape();
  const std::size_t k = game.strategy_count(player);
  // value[s][a]: mass-weighted utility of playing a when told s.
  std::vector<std::vector<T>> value(k, std::vector<T>(k, T(0)));
  std::vector<bool> seen(k, false);
  for (const auto& [index, mass] : dist.entries()) {
    const StrategyIndex s = shape.ActionOf(index, player);
    seen[s] = true;
    for (StrategyIndex a = 0; a < k; ++a) {
      value[s][a] +=
          mass * game.Utility(shape.WithAction(index, player, a), player);
    }
  }
  auto strictly_better = [](const T& a, const T& b) {
    if constexpr (kIsExact<T>) {
      return a > b;
    } else {
      return a > b + kFloatTolerance;
    }
  };
  std::vector<StrategyIndex> table(k);
  for (StrategyIndex s = 0; s < k; ++s) {
    table[s] = s;
    if (!seen[s]) continue;
    StrategyIndex best = 0;
    for (StrategyIndex a = 1; a < k; ++a) {
      if (strictly_better(value[s][a], value[s][best])) best = a;
    }
    if (strictly_better(value[s][best], value[s][s])) table[s] = best;
  }
  return PlayerPolicy::Mapped(std::move(table));
}

}  // namespace cheaptalk
