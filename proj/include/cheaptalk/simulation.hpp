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

// Round engine shared by the mediated and cheap-talk simulators.
//
// Randomness comes from std::mt19937_64, whose output sequence is fixed by
// the C++ standard (the 10000th draw from the default seed is
// 9981545732273789042), so transcripts are identical across platforms.
// Uniform variates are built from the top 53 bits of each draw rather than
// through std::uniform_real_distribution, whose algorithm is unspecified.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "cheaptalk/game.hpp"
#include "cheaptalk/policy.hpp"

namespace cheaptalk {

using Seed = std::uint64_t;
using Digest = std::uint64_t;

inline constexpr OutcomeIndex kNoRecommendation =
    static_cast<OutcomeIndex>(-1);

// 64-bit FNV-1a over little-endian words.
class Fnv1a {
 public:
  void Update(std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
      state_ ^= (word >> (8 * i)) & 0xffu;
      state_ *= 0x100000001b3ull;
    }
  }
  void Update(std::string_view bytes) {
    for (unsigned char c : bytes) {
      state_ ^= c;
      state_ *= 0x100000001b3ull;
    }
  }
  Digest value() const { return state_; }

 private:
  Digest state_ = 0xcbf29ce484222325ull;
};

class UniformSource {
 public:
  explicit UniformSource(Seed seed) : engine_(seed) {}
  // Uniform on [0, 1) with 53 bits of resolution.
  double Next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

// Inverse-CDF sampler over a sparse distribution in outcome-index order.
class OutcomeSampler {
 public:
  template <Scalar T>
  explicit OutcomeSampler(const OutcomeDistribution<T>& dist) {
    T running = 0;
    for (const auto& [index, mass] : dist.entries()) {
      running += mass;
      outcomes_.push_back(index);
      cumulative_.push_back(ToDouble(running));
    }
    if (outcomes_.empty()) throw DistributionError("empty distribution");
  }

  OutcomeIndex Sample(double u) const {
    for (std::size_t k = 0; k < cumulative_.size(); ++k) {
      if (u < cumulative_[k]) return outcomes_[k];
    }
    return outcomes_.back();
  }

 private:
  std::vector<OutcomeIndex> outcomes_;
  std::vector<double> cumulative_;
};

struct RoundRecord {
  OutcomeIndex recommendation = kNoRecommendation;
  std::uint64_t delivered_mask = 0;
  Outcome actions;
  std::vector<double> payoffs;
};

// Called once per player per round with exactly what that player's policy
// is shown.
using PolicyViewObserver =
    std::function<void(PlayerIndex, std::optional<StrategyIndex>)>;

struct RunOptions {
  bool record_rounds = false;
  PolicyViewObserver observer;
};

// Running mean and variance (Welford).
class RunningStats {
 public:
  void Add(double x) {
    ++count_;
    double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
  }
  double mean() const { return mean_; }
  double StandardError() const {
    if (count_ < 2) return 0.0;
    double variance = m2_ / static_cast<double>(count_ - 1);
    return std::sqrt(variance / static_cast<double>(count_));
  }

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0;
  double m2_ = 0;
};

namespace internal {

struct DeliveryModel {
  std::vector<bool> aborted;
  std::vector<double> block_probability;
};

struct EngineResult {
  std::uint64_t rounds = 0;
  std::vector<double> empirical_payoffs;
  std::vector<double> payoff_std_errors;
  std::vector<std::uint64_t> recommendation_counts;
  std::vector<std::uint64_t> delivery_masks;
  Digest transcript_digest = 0;
  std::vector<RoundRecord> records;
};

// Per round: sample a recommendation vector (unless every player aborted),
// decide delivery per player, query each policy with its own coordinate,
// and score the joint action.
template <Scalar T>
EngineResult RunEngine(const NormalFormGame<T>& game,
                       const OutcomeDistribution<T>& dist,
                       const std::vector<PlayerPolicy>& policies,
                       const DeliveryModel& delivery, Seed seed,
                       std::uint64_t rounds, const RunOptions& options,
                       bool keep_delivery_masks) {
  CheckCompatible(game, dist);
  ValidatePolicies(game, policies);
  if (rounds < 1) throw std::invalid_argument("rounds must be at least 1");
  const std::size_t n = game.player_count();
  if (n > 64) throw std::invalid_argument("at most 64 players supported");

  bool anyone_participates = false;
  for (PlayerIndex i = 0; i < n; ++i) {
    if (!delivery.aborted[i]) anyone_participates = true;
  }

  std::vector<double> utilities;
  utilities.reserve(game.utility_table().size());
  for (const auto& u : game.utility_table()) utilities.push_back(ToDouble(u));

  const OutcomeSampler sampler(dist);
  UniformSource uniform(seed);
  Fnv1a digest;
  std::vector<RunningStats> stats(n);

  EngineResult result;
  result.rounds = rounds;
  result.recommendation_counts.assign(game.outcome_count(), 0);
  if (keep_delivery_masks) result.delivery_masks.reserve(rounds);

  Outcome actions(std::vector<StrategyIndex>(n, 0));
  for (std::uint64_t round = 0; round < rounds; ++round) {
    OutcomeIndex recommendation = kNoRecommendation;
    if (anyone_participates) {
      recommendation = sampler.Sample(uniform.Next());
      ++result.recommendation_counts[recommendation];
    }
    std::uint64_t mask = 0;
    for (PlayerIndex i = 0; i < n; ++i) {
      bool delivered = anyone_participates && !delivery.aborted[i];
      const double p = delivery.block_probability[i];
      if (delivered && p >= 1.0) {
        delivered = false;
      } else if (delivered && p > 0.0) {
        delivered = !(uniform.Next() < p);
      }
      std::optional<StrategyIndex> view;
      if (delivered) {
        mask |= std::uint64_t{1} << i;
        view = game.shape().ActionOf(recommendation, i);
      }
      if (options.observer) options.observer(i, view);
      actions[i] = policies[i].Act(view);
    }
    const OutcomeIndex played = game.Encode(actions);
    digest.Update(recommendation);
    digest.Update(mask);
    digest.Update(played);
    for (PlayerIndex i = 0; i < n; ++i) {
      stats[i].Add(utilities[played * n + i]);
    }
    if (keep_delivery_masks) result.delivery_masks.push_back(mask);
    if (options.record_rounds) {
      RoundRecord record{recommendation, mask, actions, {}};
      for (PlayerIndex i = 0; i < n; ++i) {
        record.payoffs.push_back(utilities[played * n + i]);
      }
      result.records.push_back(std::move(record));
    }
  }
  for (const auto& s : stats) {
    result.empirical_payoffs.push_back(s.mean());
    result.payoff_std_errors.push_back(s.StandardError());
  }
  result.transcript_digest = digest.value();
  return result;
}

}  // namespace internal

// Expected payoffs when the recommendation vector is drawn from `dist`,
// each player i receives it with probability `delivery[i]`, and acts by
// policy. Exact enumeration; the analytic counterpart of the simulators.
template <Scalar T>
PayoffVector<T> AnalyticPolicyPayoffs(
    const NormalFormGame<T>& game, const OutcomeDistribution<T>& dist,
    const std::vector<PlayerPolicy>& policies,
    const std::vector<T>& delivery_probability) {
  CheckCompatible(game, dist);
  ValidatePolicies(game, policies);
  const std::size_t n = game.player_count();
  if (delivery_probability.size() != n) {
    throw std::invalid_argument("one delivery probability per player");
  }
  PayoffVector<T> expected(n, T(0));
  for (const auto& [index, mass] : dist.entries()) {
    // Enumerate delivery patterns.
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      T weight = mass;
      Outcome actions(std::vector<StrategyIndex>(n, 0));
      for (PlayerIndex i = 0; i < n && weight != 0; ++i) {
        const bool delivered = (mask >> i) & 1u;
        weight *= delivered ? delivery_probability[i]
                            : T(T(1) - delivery_probability[i]);
        if (weight == 0) break;
        std::optional<StrategyIndex> view;
        if (delivered) view = game.shape().ActionOf(index, i);
        actions[i] = policies[i].Act(view);
      }
      if (weight == 0) continue;
      for (PlayerIndex i = 0; i < n; ++i) {
        expected[i] += weight * game.Utility(actions, i);
      }
    }
  }
  return expected;
}

}  // namespace cheaptalk
