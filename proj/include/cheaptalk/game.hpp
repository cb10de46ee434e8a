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

// Finite n-player normal-form games, joint outcomes, outcome distributions
// and mixed profiles.
//
// Outcomes are addressed by a mixed-radix index, row-major over players in
// order: player 0 is the most significant digit. Iterating indices 0..N-1
// therefore visits outcomes in lexicographic order, which every tie-breaking
// rule in the library relies on.

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cheaptalk/scalar.hpp"

namespace cheaptalk {

using StrategyIndex = std::size_t;
using PlayerIndex = std::size_t;
using OutcomeIndex = std::size_t;

class GameError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DistributionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A joint pure outcome: one strategy index per player.
struct Outcome {
  std::vector<StrategyIndex> actions;

  Outcome() = default;
  explicit Outcome(std::vector<StrategyIndex> a) : actions(std::move(a)) {}
  Outcome(std::initializer_list<StrategyIndex> a) : actions(a) {}

  std::size_t size() const { return actions.size(); }
  StrategyIndex operator[](PlayerIndex i) const { return actions[i]; }
  StrategyIndex& operator[](PlayerIndex i) { return actions[i]; }

  friend auto operator<=>(const Outcome&, const Outcome&) = default;
  friend bool operator==(const Outcome&, const Outcome&) = default;
};

template <Scalar T>
using PayoffVector = std::vector<T>;

// Shape of a game: the number of strategies of each player. Shared by
// games and distributions so that mismatches can be detected.
class GameShape {
 public:
  GameShape() = default;
  explicit GameShape(std::vector<std::size_t> strategy_counts)
      : counts_(std::move(strategy_counts)) {
    if (counts_.size() < 2) throw GameError("need at least two players");
    outcome_count_ = 1;
    for (std::size_t k : counts_) {
      if (k == 0) throw GameError("every player needs at least one strategy");
      outcome_count_ *= k;
    }
  }

  std::size_t player_count() const { return counts_.size(); }
  std::size_t strategy_count(PlayerIndex i) const { return counts_.at(i); }
  const std::vector<std::size_t>& strategy_counts() const { return counts_; }
  std::size_t outcome_count() const { return outcome_count_; }

  bool IsValid(const Outcome& o) const {
    if (o.size() != counts_.size()) return false;
    for (std::size_t i = 0; i < counts_.size(); ++i) {
      if (o[i] >= counts_[i]) return false;
    }
    return true;
  }

  OutcomeIndex Encode(const Outcome& o) const {
    if (!IsValid(o)) throw GameError("outcome out of range");
    OutcomeIndex index = 0;
    for (std::size_t i = 0; i < counts_.size(); ++i) {
      index = index * counts_[i] + o[i];
    }
    return index;
  }

  Outcome Decode(OutcomeIndex index) const {
    if (index >= outcome_count_) throw GameError("outcome index out of range");
    Outcome o(std::vector<StrategyIndex>(counts_.size()));
    for (std::size_t i = counts_.size(); i-- > 0;) {
      o[i] = index % counts_[i];
      index /= counts_[i];
    }
    return o;
  }

  // Strategy of `player` in the outcome with the given index.
  StrategyIndex ActionOf(OutcomeIndex index, PlayerIndex player) const {
    for (std::size_t i = counts_.size(); i-- > player + 1;) {
      index /= counts_[i];
    }
    return index % counts_[player];
  }

  // Index of the outcome that equals `index` except that `player` plays
  // `action`.
  OutcomeIndex WithAction(OutcomeIndex index, PlayerIndex player,
                          StrategyIndex action) const {
    std::size_t stride = 1;
    for (std::size_t i = counts_.size(); i-- > player + 1;) {
      stride *= counts_[i];
    }
    StrategyIndex current = (index / stride) % counts_[player];
    return index - current * stride + action * stride;
  }

  friend bool operator==(const GameShape&, const GameShape&) = default;

 private:
  std::vector<std::size_t> counts_;
  std::size_t outcome_count_ = 0;
};

// A finite normal-form game with a dense utility table.
template <Scalar T>
class NormalFormGame {
 public:
  NormalFormGame() = default;

  // Dense constructor: `utilities` holds outcome_count * player_count
  // entries, outcome-major (all payoffs of outcome 0 first).
  NormalFormGame(std::vector<std::string> player_names,
                 std::vector<std::vector<std::string>> strategy_labels,
                 std::vector<T> utilities)
      : names_(std::move(player_names)),
        labels_(std::move(strategy_labels)),
        utilities_(std::move(utilities)) {
    if (labels_.size() < 2) throw GameError("need at least two players");
    if (names_.empty()) {
      for (std::size_t i = 0; i < labels_.size(); ++i) {
        names_.push_back("P" + std::to_string(i + 1));
      }
    }
    if (names_.size() != labels_.size()) {
      throw GameError("dimension mismatch: player names vs strategy sets");
    }
    CheckUnique(names_, "player name");
    std::vector<std::size_t> counts;
    for (const auto& player_labels : labels_) {
      CheckUnique(player_labels, "strategy label");
      counts.push_back(player_labels.size());
    }
    shape_ = GameShape(std::move(counts));
    if (utilities_.size() != shape_.outcome_count() * player_count()) {
      throw GameError("dimension mismatch: utility table has " +
                      std::to_string(utilities_.size()) + " entries, expected " +
                      std::to_string(shape_.outcome_count() * player_count()));
    }
  }

  std::size_t player_count() const { return labels_.size(); }
  std::size_t strategy_count(PlayerIndex i) const {
    return shape_.strategy_count(i);
  }
  std::size_t outcome_count() const { return shape_.outcome_count(); }
  const GameShape& shape() const { return shape_; }
  const std::vector<std::string>& player_names() const { return names_; }
  const std::vector<std::vector<std::string>>& strategy_labels() const {
    return labels_;
  }
  const std::string& label(PlayerIndex player, StrategyIndex s) const {
    return labels_.at(player).at(s);
  }

  StrategyIndex StrategyByLabel(PlayerIndex player,
                                std::string_view label) const {
    const auto& ls = labels_.at(player);
    auto it = std::find(ls.begin(), ls.end(), label);
    if (it == ls.end()) {
      throw GameError("unknown strategy '" + std::string(label) +
                      "' for player " + names_[player]);
    }
    return static_cast<StrategyIndex>(it - ls.begin());
  }

  PlayerIndex PlayerByName(std::string_view name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) {
      throw GameError("unknown player '" + std::string(name) + "'");
    }
    return static_cast<PlayerIndex>(it - names_.begin());
  }

  OutcomeIndex Encode(const Outcome& o) const { return shape_.Encode(o); }
  Outcome Decode(OutcomeIndex index) const { return shape_.Decode(index); }

  const T& Utility(OutcomeIndex index, PlayerIndex player) const {
    if (index >= outcome_count() || player >= player_count()) {
      throw GameError("utility lookup out of range");
    }
    return utilities_[index * player_count() + player];
  }

  const T& Utility(const Outcome& o, PlayerIndex player) const {
    return Utility(Encode(o), player);
  }

  std::span<const T> Payoffs(OutcomeIndex index) const {
    return std::span<const T>(utilities_).subspan(index * player_count(),
                                                  player_count());
  }

  const std::vector<T>& utility_table() const { return utilities_; }

  // "C,D" style key used by the JSON format.
  std::string OutcomeKey(const Outcome& o) const {
    std::string key;
    for (std::size_t i = 0; i < o.size(); ++i) {
      if (i) key += ',';
      key += label(i, o[i]);
    }
    return key;
  }

 private:
  static void CheckUnique(const std::vector<std::string>& items,
                          const char* what) {
    std::set<std::string> seen;
    for (const auto& item : items) {
      if (!seen.insert(item).second) {
        throw GameError(std::string("duplicate ") + what + " '" + item + "'");
      }
    }
  }

  std::vector<std::string> names_;
  std::vector<std::vector<std::string>> labels_;
  GameShape shape_;
  std::vector<T> utilities_;
};

// Builds a game from an outcome -> payoff-vector table. Every joint outcome
// must be present exactly once.
template <Scalar T>
NormalFormGame<T> NewGame(std::vector<std::string> player_names,
                          std::vector<std::vector<std::string>> strategy_labels,
                          const std::map<Outcome, PayoffVector<T>>& table) {
  if (strategy_labels.size() < 2) throw GameError("need at least two players");
  std::vector<std::size_t> counts;
  for (const auto& ls : strategy_labels) counts.push_back(ls.size());
  GameShape shape(counts);
  const std::size_t n = strategy_labels.size();
  std::vector<T> dense(shape.outcome_count() * n);
  std::vector<bool> present(shape.outcome_count(), false);
  for (const auto& [outcome, payoffs] : table) {
    if (!shape.IsValid(outcome)) throw GameError("dimension mismatch: outcome out of range");
    if (payoffs.size() != n) {
      throw GameError("dimension mismatch: payoff vector length " +
                      std::to_string(payoffs.size()) + ", expected " +
                      std::to_string(n));
    }
    OutcomeIndex index = shape.Encode(outcome);
    present[index] = true;
    std::copy(payoffs.begin(), payoffs.end(), dense.begin() + index * n);
  }
  for (OutcomeIndex index = 0; index < shape.outcome_count(); ++index) {
    if (!present[index]) {
      std::string key;
      Outcome o = shape.Decode(index);
      for (std::size_t i = 0; i < n; ++i) {
        if (i) key += ',';
        key += strategy_labels[i][o[i]];
      }
      throw GameError("missing outcome (" + key + ")");
    }
  }
  return NormalFormGame<T>(std::move(player_names), std::move(strategy_labels),
                           std::move(dense));
}

// Re-expresses a game over another scalar backend.
template <Scalar To, Scalar From>
NormalFormGame<To> ConvertGame(const NormalFormGame<From>& game) {
  std::vector<To> table;
  table.reserve(game.utility_table().size());
  for (const auto& u : game.utility_table()) table.push_back(Convert<To>(u));
  return NormalFormGame<To>(game.player_names(), game.strategy_labels(),
                            std::move(table));
}

// Probability mass over joint outcomes, stored sparsely (positive masses
// only) and ordered by outcome index.
template <Scalar T>
class OutcomeDistribution {
 public:
  using Entry = std::pair<OutcomeIndex, T>;

  OutcomeDistribution() = default;

  // Validates and normalizes the storage: repeated outcomes are summed,
  // zero masses dropped. Throws DistributionError on negative masses or a
  // total different from one.
  OutcomeDistribution(GameShape shape, std::vector<Entry> entries)
      : shape_(std::move(shape)) {
    std::map<OutcomeIndex, T> merged;
    for (auto& [index, mass] : entries) {
      if (index >= shape_.outcome_count()) {
        throw DistributionError("outcome index out of range");
      }
      if (mass < 0) throw DistributionError("negative probability mass");
      merged[index] += mass;
    }
    T total = 0;
    for (auto& [index, mass] : merged) {
      total += mass;
      if (mass != 0) entries_.emplace_back(index, std::move(mass));
    }
    bool sums_to_one;
    if constexpr (kIsExact<T>) {
      sums_to_one = total == 1;
    } else {
      sums_to_one = std::abs(total - 1.0) <= kMassTolerance;
    }
    if (!sums_to_one) {
      throw DistributionError("distribution mass ≠ 1 (total " +
                              FormatScalar(total) + ")");
    }
  }

  static OutcomeDistribution PointMass(const GameShape& shape,
                                       const Outcome& o) {
    return OutcomeDistribution(shape, {{shape.Encode(o), T(1)}});
  }

  static OutcomeDistribution Uniform(const GameShape& shape,
                                     const std::vector<Outcome>& support) {
    if (support.empty()) throw DistributionError("empty support");
    std::vector<Entry> entries;
    for (const auto& o : support) {
      entries.emplace_back(shape.Encode(o), T(1) / T(support.size()));
    }
    return OutcomeDistribution(shape, std::move(entries));
  }

  const GameShape& shape() const { return shape_; }
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t support_size() const { return entries_.size(); }

  T Mass(OutcomeIndex index) const {
    auto it = std::lower_bound(
        entries_.begin(), entries_.end(), index,
        [](const Entry& e, OutcomeIndex i) { return e.first < i; });
    if (it != entries_.end() && it->first == index) return it->second;
    return T(0);
  }

  T Mass(const Outcome& o) const { return Mass(shape_.Encode(o)); }

  // Marginal probability that `player` is recommended `strategy`.
  T Marginal(PlayerIndex player, StrategyIndex strategy) const {
    T total = 0;
    for (const auto& [index, mass] : entries_) {
      if (shape_.ActionOf(index, player) == strategy) total += mass;
    }
    return total;
  }

  std::vector<T> Marginals(PlayerIndex player) const {
    std::vector<T> result(shape_.strategy_count(player), T(0));
    for (const auto& [index, mass] : entries_) {
      result[shape_.ActionOf(index, player)] += mass;
    }
    return result;
  }

  friend bool operator==(const OutcomeDistribution&,
                         const OutcomeDistribution&) = default;

 private:
  GameShape shape_;
  std::vector<Entry> entries_;
};

template <Scalar To, Scalar From>
OutcomeDistribution<To> ConvertDistribution(
    const OutcomeDistribution<From>& dist) {
  std::vector<typename OutcomeDistribution<To>::Entry> entries;
  for (const auto& [index, mass] : dist.entries()) {
    entries.emplace_back(index, Convert<To>(mass));
  }
  return OutcomeDistribution<To>(dist.shape(), std::move(entries));
}

// One probability vector per player.
template <Scalar T>
class MixedProfile {
 public:
  MixedProfile() = default;
  explicit MixedProfile(std::vector<std::vector<T>> strategies)
      : strategies_(std::move(strategies)) {
    for (const auto& p : strategies_) {
      T total = 0;
      for (const auto& x : p) {
        if (x < 0) throw DistributionError("negative strategy probability");
        total += x;
      }
      bool ok;
      if constexpr (kIsExact<T>) {
        ok = total == 1;
      } else {
        ok = std::abs(total - 1.0) <= kMassTolerance;
      }
      if (!ok) throw DistributionError("mixed strategy does not sum to 1");
    }
  }

  static MixedProfile Pure(const GameShape& shape, const Outcome& o) {
    std::vector<std::vector<T>> s;
    for (std::size_t i = 0; i < shape.player_count(); ++i) {
      std::vector<T> p(shape.strategy_count(i), T(0));
      p.at(o[i]) = 1;
      s.push_back(std::move(p));
    }
    return MixedProfile(std::move(s));
  }

  std::size_t player_count() const { return strategies_.size(); }
  const std::vector<T>& operator[](PlayerIndex i) const {
    return strategies_[i];
  }
  const std::vector<std::vector<T>>& strategies() const { return strategies_; }

  friend bool operator==(const MixedProfile&, const MixedProfile&) = default;

 private:
  std::vector<std::vector<T>> strategies_;
};

template <Scalar T>
const T& Utility(const NormalFormGame<T>& game, const Outcome& outcome,
                 PlayerIndex player) {
  return game.Utility(outcome, player);
}

template <Scalar T>
void CheckCompatible(const NormalFormGame<T>& game,
                     const OutcomeDistribution<T>& dist) {
  if (!(game.shape() == dist.shape())) {
    throw DistributionError("distribution does not match the game's shape");
  }
}

// Sum over outcomes of mass * u_player.
template <Scalar T>
T ExpectedUtility(const NormalFormGame<T>& game,
                  const OutcomeDistribution<T>& dist, PlayerIndex player) {
  CheckCompatible(game, dist);
  if (player >= game.player_count()) throw GameError("player out of range");
  T total = 0;
  for (const auto& [index, mass] : dist.entries()) {
    total += mass * game.Utility(index, player);
  }
  return total;
}

template <Scalar T>
PayoffVector<T> ExpectedPayoffs(const NormalFormGame<T>& game,
                                const OutcomeDistribution<T>& dist) {
  PayoffVector<T> payoffs;
  for (PlayerIndex i = 0; i < game.player_count(); ++i) {
    payoffs.push_back(ExpectedUtility(game, dist, i));
  }
  return payoffs;
}

template <Scalar T>
T Welfare(const NormalFormGame<T>& game, const OutcomeDistribution<T>& dist) {
  T total = 0;
  for (const auto& u : ExpectedPayoffs(game, dist)) total += u;
  return total;
}

// Independent product measure of a mixed profile.
template <Scalar T>
OutcomeDistribution<T> ProductDistribution(const NormalFormGame<T>& game,
                                           const MixedProfile<T>& profile) {
  if (profile.player_count() != game.player_count()) {
    throw GameError("dimension mismatch: profile player count");
  }
  for (PlayerIndex i = 0; i < game.player_count(); ++i) {
    if (profile[i].size() != game.strategy_count(i)) {
      throw GameError("dimension mismatch: profile strategy count");
    }
  }
  std::vector<typename OutcomeDistribution<T>::Entry> entries;
  for (OutcomeIndex index = 0; index < game.outcome_count(); ++index) {
    T mass = 1;
    for (PlayerIndex i = 0; i < game.player_count() && mass != 0; ++i) {
      mass *= profile[i][game.shape().ActionOf(index, i)];
    }
    if (mass != 0) entries.emplace_back(index, std::move(mass));
  }
  return OutcomeDistribution<T>(game.shape(), std::move(entries));
}

}  // namespace cheaptalk
