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

// Correlated equilibria: verification, computation by linear programming,
// two-player Nash equilibria by support enumeration, and pure minimax
// profiles.
//
// A distribution D is a correlated equilibrium iff for every player i and
// every pair of strategies (s, s') the mass-weighted deviation gain
//
//   gain_i(s -> s') = sum_{t : t_i = s} D(t) * (u_i(s', t_-i) - u_i(t))
//
// is at most zero. Dividing by the marginal D_i(s) gives the conditional
// form; the weighted form avoids division and is trivially satisfied by
// recommendations that are never made.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cheaptalk/game.hpp"
#include "cheaptalk/linprog.hpp"

namespace cheaptalk {

// Raised when a gain is requested for a recommendation that has zero
// marginal probability, where the conditional expectation is undefined.
class ZeroMarginalError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

template <Scalar T>
struct CeEntry {
  PlayerIndex player = 0;
  StrategyIndex recommended = 0;
  StrategyIndex alternative = 0;
  T gain = 0;
};

template <Scalar T>
struct CeReport {
  bool verdict = true;
  // Largest gain over all entries (zero when there are none).
  T worst_violation = 0;
  std::vector<CeEntry<T>> entries;
  NumericMode mode = kIsExact<T> ? NumericMode::kExact : NumericMode::kFloat;
  double tolerance = kIsExact<T> ? 0.0 : kFloatTolerance;

  std::vector<CeEntry<T>> Violations() const {
    std::vector<CeEntry<T>> out;
    for (const auto& e : entries) {
      if (Exceeds(e.gain)) out.push_back(e);
    }
    return out;
  }

  bool Exceeds(const T& gain) const {
    if constexpr (kIsExact<T>) {
      return gain > 0;
    } else {
      return gain > tolerance;
    }
  }
};

// Mass-weighted gain of `player` switching from `recommended` to
// `alternative` whenever told `recommended`.
template <Scalar T>
T DeviationGain(const NormalFormGame<T>& game,
                const OutcomeDistribution<T>& dist, PlayerIndex player,
                StrategyIndex recommended, StrategyIndex alternative) {
  CheckCompatible(game, dist);
  if (player >= game.player_count() ||
      recommended >= game.strategy_count(player) ||
      alternative >= game.strategy_count(player)) {
    throw GameError("deviation out of range");
  }
  const GameShape& shape = game.shape();
  T gain = 0;
  bool positive_marginal = false;
  for (const auto& [index, mass] : dist.entries()) {
    if (shape.ActionOf(index, player) != recommended) continue;
    positive_marginal = true;
    OutcomeIndex deviated = shape.WithAction(index, player, alternative);
    gain += mass * (game.Utility(deviated, player) - game.Utility(index, player));
  }
  if (!positive_marginal) {
    throw ZeroMarginalError("recommendation " + game.label(player, recommended) +
                            " of player " + game.player_names()[player] +
                            " has zero marginal probability");
  }
  return gain;
}

// Checks every (player, recommendation, alternative) triple. In float mode
// a gain counts as a violation only above `tolerance`.
template <Scalar T>
CeReport<T> VerifyCorrelated(const NormalFormGame<T>& game,
                             const OutcomeDistribution<T>& dist,
                             double tolerance = kFloatTolerance) {
  CheckCompatible(game, dist);
  const GameShape& shape = game.shape();
  CeReport<T> report;
  if constexpr (!kIsExact<T>) report.tolerance = tolerance;

  bool any_entry = false;
  for (PlayerIndex i = 0; i < game.player_count(); ++i) {
    const std::size_t k = game.strategy_count(i);
    std::vector<std::vector<T>> gains(k, std::vector<T>(k, T(0)));
    std::vector<bool> recommended(k, false);
    for (const auto& [index, mass] : dist.entries()) {
      const StrategyIndex s = shape.ActionOf(index, i);
      recommended[s] = true;
      const T& base = game.Utility(index, i);
      for (StrategyIndex alt = 0; alt < k; ++alt) {
        if (alt == s) continue;
        gains[s][alt] +=
            mass * (game.Utility(shape.WithAction(index, i, alt), i) - base);
      }
    }
    for (StrategyIndex s = 0; s < k; ++s) {
      if (!recommended[s]) continue;
      for (StrategyIndex alt = 0; alt < k; ++alt) {
        if (alt == s) continue;
        CeEntry<T> entry{i, s, alt, gains[s][alt]};
        if (!any_entry || entry.gain > report.worst_violation) {
          report.worst_violation = entry.gain;
        }
        any_entry = true;
        if (report.Exceeds(entry.gain)) report.verdict = false;
        report.entries.push_back(std::move(entry));
      }
    }
  }
  return report;
}

struct CeObjective {
  enum class Kind { kFeasible, kMaxWelfare, kMaxPlayer };
  Kind kind = Kind::kFeasible;
  PlayerIndex player = 0;

  static CeObjective Feasible() { return {Kind::kFeasible, 0}; }
  static CeObjective MaxWelfare() { return {Kind::kMaxWelfare, 0}; }
  static CeObjective MaxPlayer(PlayerIndex i) { return {Kind::kMaxPlayer, i}; }
};

// The correlated-equilibrium polytope as a linear program: one variable per
// outcome, one "gain <= 0" row per (player, s, s'), and total mass one.
template <Scalar T>
LinearProgram<T> CorrelatedEquilibriumLp(const NormalFormGame<T>& game,
                                         const CeObjective& objective) {
  const GameShape& shape = game.shape();
  const std::size_t outcomes = game.outcome_count();
  LinearProgram<T> lp;
  lp.sense = Sense::kMaximize;
  lp.objective.assign(outcomes, T(0));
  for (OutcomeIndex index = 0; index < outcomes; ++index) {
    switch (objective.kind) {
      case CeObjective::Kind::kFeasible:
        break;
      case CeObjective::Kind::kMaxWelfare:
        for (PlayerIndex i = 0; i < game.player_count(); ++i) {
          lp.objective[index] += game.Utility(index, i);
        }
        break;
      case CeObjective::Kind::kMaxPlayer:
        lp.objective[index] = game.Utility(index, objective.player);
        break;
    }
  }
  for (PlayerIndex i = 0; i < game.player_count(); ++i) {
    for (StrategyIndex s = 0; s < game.strategy_count(i); ++s) {
      for (StrategyIndex alt = 0; alt < game.strategy_count(i); ++alt) {
        if (alt == s) continue;
        std::vector<T> row(outcomes, T(0));
        for (OutcomeIndex index = 0; index < outcomes; ++index) {
          if (shape.ActionOf(index, i) != s) continue;
          row[index] = game.Utility(shape.WithAction(index, i, alt), i) -
                       game.Utility(index, i);
        }
        lp.AddConstraint(std::move(row), Relation::kLessEqual, T(0));
      }
    }
  }
  lp.AddConstraint(std::vector<T>(outcomes, T(1)), Relation::kEqual, T(1));
  return lp;
}

// Computes a correlated equilibrium optimizing `objective`. The result is a
// vertex of the CE polytope. Never fails on a valid game; an LP failure
// means a bug and is raised as std::logic_error.
template <Scalar T>
OutcomeDistribution<T> SolveCe(const NormalFormGame<T>& game,
                               const CeObjective& objective,
                               const LpOptions& options = {}) {
  if (objective.kind == CeObjective::Kind::kMaxPlayer &&
      objective.player >= game.player_count()) {
    throw GameError("objective player out of range");
  }
  LinearProgram<T> lp = CorrelatedEquilibriumLp(game, objective);
  LpSolution<T> solution = SolveLp(lp, options);
  if (solution.status != LpStatus::kOptimal) {
    throw std::logic_error(std::string("internal error: CE program ") +
                           ToString(solution.status));
  }
  std::vector<typename OutcomeDistribution<T>::Entry> entries;
  T total = 0;
  for (OutcomeIndex index = 0; index < solution.values.size(); ++index) {
    T mass = solution.values[index];
    if constexpr (!kIsExact<T>) {
      if (mass < 1e-13) mass = 0;
    }
    total += mass;
    if (mass != 0) entries.emplace_back(index, mass);
  }
  if constexpr (!kIsExact<T>) {
    for (auto& entry : entries) entry.second /= total;
  }
  OutcomeDistribution<T> dist(game.shape(), std::move(entries));
  if (!VerifyCorrelated(game, dist).verdict) {
    throw std::logic_error("internal error: LP vertex is not a CE");
  }
  return dist;
}

// Pointwise lambda * d1 + (1 - lambda) * d2.
template <Scalar T>
OutcomeDistribution<T> MixDistributions(const OutcomeDistribution<T>& d1,
                                        const OutcomeDistribution<T>& d2,
                                        const T& lambda) {
  if (!(d1.shape() == d2.shape())) {
    throw DistributionError("mismatched games");
  }
  if (lambda < 0 || lambda > 1) throw DistributionError("lambda outside [0,1]");
  std::vector<typename OutcomeDistribution<T>::Entry> entries;
  const T rest = T(1) - lambda;
  for (const auto& [index, mass] : d1.entries()) {
    if (lambda != 0) entries.emplace_back(index, lambda * mass);
  }
  for (const auto& [index, mass] : d2.entries()) {
    if (rest != 0) entries.emplace_back(index, rest * mass);
  }
  return OutcomeDistribution<T>(d1.shape(), std::move(entries));
}

template <Scalar T>
struct MinimaxResult {
  PlayerIndex target = 0;
  // One action per non-target player, in player order.
  std::vector<StrategyIndex> profile;
  // Target's best-response payoff against `profile`.
  T value = 0;
  StrategyIndex best_response = 0;

  // Full outcome with the target playing `target_action`.
  Outcome Complete(StrategyIndex target_action) const {
    Outcome o;
    std::size_t next = 0;
    for (std::size_t i = 0; i <= profile.size(); ++i) {
      o.actions.push_back(i == target ? target_action : profile[next++]);
    }
    return o;
  }
};

// Pure joint action of the other players minimizing the target's
// best-response payoff. Ties go to the lexicographically smallest profile.
template <Scalar T>
MinimaxResult<T> MinimaxProfile(const NormalFormGame<T>& game,
                                PlayerIndex target) {
  if (target >= game.player_count()) throw GameError("player out of range");
  const std::size_t n = game.player_count();
  std::vector<PlayerIndex> others;
  for (PlayerIndex i = 0; i < n; ++i) {
    if (i != target) others.push_back(i);
  }
  Outcome outcome(std::vector<StrategyIndex>(n, 0));
  MinimaxResult<T> best;
  best.target = target;
  bool have_best = false;
  while (true) {
    // Best response of the target against the current joint action.
    StrategyIndex response = 0;
    T response_value = 0;
    for (StrategyIndex s = 0; s < game.strategy_count(target); ++s) {
      outcome[target] = s;
      const T& u = game.Utility(outcome, target);
      if (s == 0 || u > response_value) {
        response_value = u;
        response = s;
      }
    }
    if (!have_best || response_value < best.value) {
      have_best = true;
      best.value = response_value;
      best.best_response = response;
      best.profile.clear();
      for (PlayerIndex i : others) best.profile.push_back(outcome[i]);
    }
    // Advance the odometer over the other players, last player fastest.
    std::size_t pos = others.size();
    while (pos > 0) {
      PlayerIndex p = others[pos - 1];
      if (++outcome[p] < game.strategy_count(p)) break;
      outcome[p] = 0;
      --pos;
    }
    if (pos == 0) break;
  }
  return best;
}

template <Scalar T>
struct NashEquilibrium {
  MixedProfile<T> profile;
  PayoffVector<T> payoffs;
};

template <Scalar T>
struct NashList {
  std::vector<NashEquilibrium<T>> equilibria;
  // Set when some support pair produced a singular or underdetermined
  // indifference system; such pairs are skipped, so equilibria with those
  // supports may be missing.
  bool degenerate = false;
  std::vector<std::string> warnings;
};

namespace internal {

// Solves the square system `a x = b` by Gaussian elimination. Returns
// std::nullopt when the matrix is singular.
template <Scalar T>
std::optional<std::vector<T>> SolveSquare(std::vector<std::vector<T>> a,
                                          std::vector<T> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    if constexpr (kIsExact<T>) {
      while (pivot < n && a[pivot][col] == 0) ++pivot;
      if (pivot == n) return std::nullopt;
    } else {
      for (std::size_t r = col + 1; r < n; ++r) {
        if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
      }
      if (std::abs(a[pivot][col]) < 1e-12) return std::nullopt;
    }
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const T factor = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
      b[r] -= factor * b[col];
    }
  }
  std::vector<T> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

inline bool NextSubset(std::vector<std::size_t>& subset, std::size_t n) {
  const std::size_t k = subset.size();
  for (std::size_t i = k; i-- > 0;) {
    if (subset[i] < n - k + i) {
      ++subset[i];
      for (std::size_t j = i + 1; j < k; ++j) subset[j] = subset[j - 1] + 1;
      return true;
    }
  }
  return false;
}

// Finds the mix over `mixer_support` that makes the opponent indifferent
// across `opponent_support`. `payoff(o, m)` is the opponent's payoff when
// the opponent plays o and the mixer plays m. Returns the mix (one entry
// per mixer_support element) followed by the common value.
template <Scalar T, typename Payoff>
std::optional<std::vector<T>> Indifference(
    const std::vector<std::size_t>& opponent_support,
    const std::vector<std::size_t>& mixer_support, Payoff payoff) {
  const std::size_t s = mixer_support.size();
  std::vector<std::vector<T>> a(s + 1, std::vector<T>(s + 1, T(0)));
  std::vector<T> b(s + 1, T(0));
  for (std::size_t r = 0; r < s; ++r) {
    for (std::size_t c = 0; c < s; ++c) {
      a[r][c] = payoff(opponent_support[r], mixer_support[c]);
    }
    a[r][s] = -1;
  }
  for (std::size_t c = 0; c < s; ++c) a[s][c] = 1;
  b[s] = 1;
  return SolveSquare(std::move(a), std::move(b));
}

}  // namespace internal

// All Nash equilibria of a nondegenerate two-player game, by enumerating
// equal-size support pairs.
template <Scalar T>
NashList<T> NashTwoPlayer(const NormalFormGame<T>& game) {
  if (game.player_count() != 2) throw GameError("nash: two players only");
  const std::size_t rows = game.strategy_count(0);
  const std::size_t cols = game.strategy_count(1);
  auto row_payoff = [&](std::size_t i, std::size_t j) -> const T& {
    return game.Utility(Outcome{i, j}, 0);
  };
  auto col_payoff = [&](std::size_t i, std::size_t j) -> const T& {
    return game.Utility(Outcome{i, j}, 1);
  };
  auto positive = [](const T& x) {
    if constexpr (kIsExact<T>) {
      return x > 0;
    } else {
      return x > 1e-12;
    }
  };
  auto greater = [](const T& a, const T& b) {
    if constexpr (kIsExact<T>) {
      return a > b;
    } else {
      return a > b + kFloatTolerance;
    }
  };

  NashList<T> result;
  for (std::size_t size = 1; size <= std::min(rows, cols); ++size) {
    std::vector<std::size_t> support_rows(size);
    for (std::size_t i = 0; i < size; ++i) support_rows[i] = i;
    do {
      std::vector<std::size_t> support_cols(size);
      for (std::size_t i = 0; i < size; ++i) support_cols[i] = i;
      do {
        // Column mix makes the row player indifferent over support_rows.
        auto y = internal::Indifference<T>(support_rows, support_cols,
                                           row_payoff);
        auto x = internal::Indifference<T>(
            support_cols, support_rows,
            [&](std::size_t j, std::size_t i) -> const T& {
              return col_payoff(i, j);
            });
        if (!x || !y) {
          result.degenerate = true;
          std::string w = "singular support pair rows{";
          for (auto r : support_rows) w += game.label(0, r) + " ";
          w += "} cols{";
          for (auto c : support_cols) w += game.label(1, c) + " ";
          w += "}";
          result.warnings.push_back(std::move(w));
          continue;
        }
        bool valid = true;
        std::vector<T> row_mix(rows, T(0)), col_mix(cols, T(0));
        for (std::size_t k = 0; k < size && valid; ++k) {
          valid = positive((*x)[k]) && positive((*y)[k]);
          row_mix[support_rows[k]] = (*x)[k];
          col_mix[support_cols[k]] = (*y)[k];
        }
        if (!valid) continue;
        const T& row_value = (*y)[size];
        const T& col_value = (*x)[size];
        for (std::size_t i = 0; i < rows && valid; ++i) {
          T v = 0;
          for (std::size_t j = 0; j < cols; ++j) v += col_mix[j] * row_payoff(i, j);
          if (greater(v, row_value)) valid = false;
        }
        for (std::size_t j = 0; j < cols && valid; ++j) {
          T v = 0;
          for (std::size_t i = 0; i < rows; ++i) v += row_mix[i] * col_payoff(i, j);
          if (greater(v, col_value)) valid = false;
        }
        if (!valid) continue;
        if constexpr (!kIsExact<T>) {
          T rs = 0, cs = 0;
          for (auto& p : row_mix) rs += p;
          for (auto& p : col_mix) cs += p;
          for (auto& p : row_mix) p /= rs;
          for (auto& p : col_mix) p /= cs;
        }
        NashEquilibrium<T> eq{MixedProfile<T>({row_mix, col_mix}),
                              {row_value, col_value}};
        result.equilibria.push_back(std::move(eq));
      } while (internal::NextSubset(support_cols, cols));
    } while (internal::NextSubset(support_rows, rows));
  }
  return result;
}

}  // namespace cheaptalk
