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

// Cheap talk: the players replace the mediator by a protocol they run among
// themselves.
//
// The protocol is modeled as an ideal functionality. It samples the joint
// recommendation exactly as a mediator would and hands each participant
// their own coordinate over a private channel. Two things can go wrong:
//
//  * A player aborts by refusing to provide input. It receives nothing;
//    the functionality still serves everyone else.
//  * A channel adversary blocks delivery to a player (independently each
//    round, with a per-player probability). The adversary never reads or
//    alters recommendations, so the protocol stays secure but is unfair.
//
// A player left without output acts through its policy's no-output branch.
// For two players, the classic remedy has the unserved player punish with
// the pure minimax profile against the served one.

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cheaptalk/equilibria.hpp"
#include "cheaptalk/game.hpp"
#include "cheaptalk/policy.hpp"
#include "cheaptalk/simulation.hpp"

namespace cheaptalk {

template <Scalar T>
struct ProtocolConfig {
  // Carried through to results; has no computational role in the ideal
  // functionality.
  std::uint64_t security_parameter = 128;
  OutcomeDistribution<T> distribution;
  std::set<PlayerIndex> abort_set;
};

struct AdversaryModel {
  // Probability that each player's output is blocked in a round.
  std::vector<double> block_probability;

  static AdversaryModel Fair(std::size_t players) {
    return {std::vector<double>(players, 0.0)};
  }
  static AdversaryModel AlwaysBlock(std::size_t players, PlayerIndex victim) {
    AdversaryModel m = Fair(players);
    m.block_probability.at(victim) = 1.0;
    return m;
  }

  void Validate(std::size_t players) const {
    if (block_probability.size() != players) {
      throw std::invalid_argument("adversary needs one blocking probability per player");
    }
    for (double p : block_probability) {
      if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("blocking probability outside [0,1]");
      }
    }
  }
};

struct CheapTalkResult {
  std::uint64_t rounds = 0;
  std::uint64_t security_parameter = 0;
  // Bit i of entry r is set when player i received output in round r.
  std::vector<std::uint64_t> delivery_masks;
  std::vector<double> empirical_payoffs;
  std::vector<double> payoff_std_errors;
  std::vector<std::uint64_t> recommendation_counts;
  // Per player: refused to provide input.
  std::vector<bool> abort_occurred;
  Digest transcript_digest = 0;
  std::vector<RoundRecord> records;

  std::uint64_t DeliveredCount(PlayerIndex player) const {
    std::uint64_t count = 0;
    for (auto mask : delivery_masks) count += (mask >> player) & 1u;
    return count;
  }
};

template <Scalar T>
CheapTalkResult RunCheapTalk(const NormalFormGame<T>& game,
                             const ProtocolConfig<T>& config,
                             const AdversaryModel& adversary,
                             const std::vector<PlayerPolicy>& policies,
                             Seed seed, std::uint64_t rounds,
                             const RunOptions& options = {}) {
  const std::size_t n = game.player_count();
  adversary.Validate(n);
  ValidatePolicies(game, policies);
  std::vector<bool> aborted(n, false);
  for (PlayerIndex i : config.abort_set) {
    if (i >= n) throw std::invalid_argument("abort set names an unknown player");
    aborted[i] = true;
  }
  for (PlayerIndex i = 0; i < n; ++i) {
    const bool can_miss = aborted[i] || adversary.block_probability[i] > 0.0;
    if (can_miss && !policies[i].HandlesNoOutput()) {
      throw PolicyError(
          "player " + game.player_names()[i] +
          (aborted[i] ? " aborts" : " can be blocked") +
          " but its policy has no no_output_branch; give it an action to "
          "play when no recommendation arrives");
    }
  }
  internal::DeliveryModel delivery{aborted, adversary.block_probability};
  auto r = internal::RunEngine(game, config.distribution, policies, delivery,
                               seed, rounds, options,
                               /*keep_delivery_masks=*/true);
  CheapTalkResult result;
  result.rounds = r.rounds;
  result.security_parameter = config.security_parameter;
  result.delivery_masks = std::move(r.delivery_masks);
  result.empirical_payoffs = std::move(r.empirical_payoffs);
  result.payoff_std_errors = std::move(r.payoff_std_errors);
  result.recommendation_counts = std::move(r.recommendation_counts);
  result.abort_occurred = std::move(aborted);
  result.transcript_digest = r.transcript_digest;
  result.records = std::move(r.records);
  return result;
}

// Raised when a distribution that must be a correlated equilibrium is not.
template <Scalar T>
class NotCorrelatedError : public std::invalid_argument {
 public:
  explicit NotCorrelatedError(CeReport<T> report)
      : std::invalid_argument(
            "distribution is not a correlated equilibrium (worst gain " +
            FormatScalar(report.worst_violation) + ")"),
        report_(std::move(report)) {}
  const CeReport<T>& report() const { return report_; }

 private:
  CeReport<T> report_;
};

template <Scalar T>
struct PunishmentProfile {
  PlayerIndex served = 0;
  PlayerIndex unserved = 1;
  // Minimax profile against the served player; its single entry is the
  // unserved player's punishing action.
  MinimaxResult<T> minimax;

  StrategyIndex unserved_action() const { return minimax.profile.at(0); }

  // Served player obeys; unserved player obeys if served, otherwise
  // punishes.
  std::vector<PlayerPolicy> Policies() const {
    std::vector<PlayerPolicy> p(2, PlayerPolicy::Obedient());
    p[unserved] = PlayerPolicy::NoOutputBranch(unserved_action());
    return p;
  }
};

namespace internal {
template <Scalar T>
void CheckPunishmentInputs(const NormalFormGame<T>& game,
                           const OutcomeDistribution<T>& ce,
                           PlayerIndex served, PlayerIndex unserved) {
  if (game.player_count() != 2) throw GameError("two players only");
  if (served > 1 || unserved > 1 || served == unserved) {
    throw GameError("served and unserved must be the two distinct players");
  }
  CeReport<T> report = VerifyCorrelated(game, ce);
  if (!report.verdict) throw NotCorrelatedError<T>(std::move(report));
}
}  // namespace internal

template <Scalar T>
PunishmentProfile<T> MakePunishmentProfile(const NormalFormGame<T>& game,
                                           const OutcomeDistribution<T>& ce,
                                           PlayerIndex served,
                                           PlayerIndex unserved) {
  internal::CheckPunishmentInputs(game, ce, served, unserved);
  return PunishmentProfile<T>{served, unserved, MinimaxProfile(game, served)};
}

template <Scalar T>
struct PunishmentDeviation {
  PlayerIndex player = 0;
  // Recommendation conditioned on (served player only).
  std::optional<StrategyIndex> recommendation;
  StrategyIndex from = 0;
  StrategyIndex to = 0;
  T gain = 0;
};

template <Scalar T>
struct PunishmentReport {
  PunishmentProfile<T> profile;
  bool verdict = true;
  T worst_gain = 0;
  std::vector<PunishmentDeviation<T>> deviations;
  // Expected payoffs, in player order, under the blocked scenario.
  PayoffVector<T> payoffs;
};

// Distribution of play when the served player follows `ce`'s marginal and
// the unserved player always plays `action`.
template <Scalar T>
OutcomeDistribution<T> BlockedPlayDistribution(const NormalFormGame<T>& game,
                                               const OutcomeDistribution<T>& ce,
                                               PlayerIndex served,
                                               PlayerIndex unserved,
                                               StrategyIndex action) {
  std::vector<typename OutcomeDistribution<T>::Entry> entries;
  const auto marginal = ce.Marginals(served);
  for (StrategyIndex r = 0; r < marginal.size(); ++r) {
    if (marginal[r] == 0) continue;
    Outcome o(std::vector<StrategyIndex>(2, 0));
    o[served] = r;
    o[unserved] = action;
    entries.emplace_back(game.Encode(o), marginal[r]);
  }
  return OutcomeDistribution<T>(game.shape(), std::move(entries));
}

// Exhaustive pure-deviation check of the blocked scenario: the served
// player receives r ~ marginal of `ce` and obeys, the unserved player gets
// nothing and plays the minimax action against the served player.
//
//  (a) every alternative action of the unserved player, in expectation
//      over the served player's marginal;
//  (b) every (recommendation, alternative) pair of the served player,
//      mass-weighted, against the fixed minimax action.
//
// The verdict is true iff no gain is positive (beyond tolerance in float
// mode).
template <Scalar T>
PunishmentReport<T> VerifyPunishmentEquilibrium(
    const NormalFormGame<T>& game, const OutcomeDistribution<T>& ce,
    PlayerIndex served, PlayerIndex unserved) {
  PunishmentReport<T> report;
  report.profile = MakePunishmentProfile(game, ce, served, unserved);
  const StrategyIndex m = report.profile.unserved_action();
  const auto marginal = ce.Marginals(served);

  auto outcome = [&](StrategyIndex served_action, StrategyIndex unserved_action) {
    Outcome o(std::vector<StrategyIndex>(2, 0));
    o[served] = served_action;
    o[unserved] = unserved_action;
    return o;
  };
  auto exceeds = [](const T& gain) {
    if constexpr (kIsExact<T>) {
      return gain > 0;
    } else {
      return gain > kFloatTolerance;
    }
  };
  bool first = true;
  auto add = [&](PunishmentDeviation<T> d) {
    if (first || d.gain > report.worst_gain) report.worst_gain = d.gain;
    first = false;
    if (exceeds(d.gain)) report.verdict = false;
    report.deviations.push_back(std::move(d));
  };

  // (a) unserved player.
  for (StrategyIndex alt = 0; alt < game.strategy_count(unserved); ++alt) {
    if (alt == m) continue;
    T gain = 0;
    for (StrategyIndex r = 0; r < marginal.size(); ++r) {
      if (marginal[r] == 0) continue;
      gain += marginal[r] * (game.Utility(outcome(r, alt), unserved) -
                             game.Utility(outcome(r, m), unserved));
    }
    add({unserved, std::nullopt, m, alt, gain});
  }
  // (b) served player.
  for (StrategyIndex r = 0; r < marginal.size(); ++r) {
    if (marginal[r] == 0) continue;
    for (StrategyIndex alt = 0; alt < game.strategy_count(served); ++alt) {
      if (alt == r) continue;
      T gain = marginal[r] * (game.Utility(outcome(alt, m), served) -
                              game.Utility(outcome(r, m), served));
      add({served, r, r, alt, gain});
    }
  }

  const auto played = BlockedPlayDistribution(game, ce, served, unserved, m);
  report.payoffs = ExpectedPayoffs(game, played);
  return report;
}

}  // namespace cheaptalk
