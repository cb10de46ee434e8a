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

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cheaptalk/game.hpp"

namespace cheaptalk {

class PolicyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Stage-two action rule of a single player.
//
// `Act` is the only way the simulators consult a policy, and it receives
// nothing but the player's own recommendation (or nothing, when no output
// was delivered). A policy therefore cannot observe the joint outcome, the
// distribution, or other players' recommendations.
class PlayerPolicy {
 public:
  enum class Kind { kObedient, kFixed, kMapped };

  static PlayerPolicy Obedient() { return PlayerPolicy(Kind::kObedient); }

  static PlayerPolicy Fixed(StrategyIndex action) {
    PlayerPolicy p(Kind::kFixed);
    p.fixed_ = action;
    return p;
  }

  // `table[s]` is played when recommended s.
  static PlayerPolicy Mapped(std::vector<StrategyIndex> table) {
    PlayerPolicy p(Kind::kMapped);
    p.table_ = std::move(table);
    return p;
  }

  // Obedient when served; plays `action` when no recommendation arrives.
  static PlayerPolicy NoOutputBranch(StrategyIndex action) {
    return Obedient().WithNoOutput(action);
  }

  PlayerPolicy WithNoOutput(StrategyIndex action) const {
    PlayerPolicy p = *this;
    p.no_output_ = action;
    return p;
  }

  Kind kind() const { return kind_; }
  StrategyIndex fixed_action() const { return fixed_; }
  const std::vector<StrategyIndex>& table() const { return table_; }
  std::optional<StrategyIndex> no_output_action() const { return no_output_; }

  // True when the policy defines an action for rounds without output.
  bool HandlesNoOutput() const {
    return no_output_.has_value() || kind_ == Kind::kFixed;
  }

  StrategyIndex Act(std::optional<StrategyIndex> recommendation) const {
    if (!recommendation) {
      if (no_output_) return *no_output_;
      if (kind_ == Kind::kFixed) return fixed_;
      throw PolicyError("policy has no no_output_branch");
    }
    switch (kind_) {
      case Kind::kObedient: return *recommendation;
      case Kind::kFixed: return fixed_;
      case Kind::kMapped: return table_.at(*recommendation);
    }
    return *recommendation;
  }

  void Validate(std::size_t strategy_count) const {
    auto check = [&](StrategyIndex a, const char* what) {
      if (a >= strategy_count) {
        throw PolicyError(std::string(what) + " action " + std::to_string(a) +
                          " out of range");
      }
    };
    if (kind_ == Kind::kFixed) check(fixed_, "fixed");
    if (kind_ == Kind::kMapped) {
      if (table_.size() != strategy_count) {
        throw PolicyError("mapped policy must cover every recommendation (" +
                          std::to_string(table_.size()) + " of " +
                          std::to_string(strategy_count) + ")");
      }
      for (auto a : table_) check(a, "mapped");
    }
    if (no_output_) check(*no_output_, "no_output_branch");
  }

  friend bool operator==(const PlayerPolicy&, const PlayerPolicy&) = default;

 private:
  explicit PlayerPolicy(Kind kind) : kind_(kind) {}

  Kind kind_;
  StrategyIndex fixed_ = 0;
  std::vector<StrategyIndex> table_;
  std::optional<StrategyIndex> no_output_;
};

template <Scalar T>
void ValidatePolicies(const NormalFormGame<T>& game,
                      const std::vector<PlayerPolicy>& policies) {
  if (policies.size() != game.player_count()) {
    throw PolicyError("expected one policy per player");
  }
  for (PlayerIndex i = 0; i < policies.size(); ++i) {
    policies[i].Validate(game.strategy_count(i));
  }
}

}  // namespace cheaptalk
