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

// Dense two-phase tableau simplex.
//
// The solver is instantiated per scalar backend: with `Rational` every pivot
// is exact and Bland's rule is used throughout, so the returned vertex
// satisfies the constraints with no tolerance. With `double` the default is
// the largest-coefficient rule, falling back to Bland's rule once a run of
// degenerate pivots suggests stalling.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cheaptalk/scalar.hpp"

namespace cheaptalk {

class LpError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Relation { kLessEqual, kEqual, kGreaterEqual };
enum class Sense { kMaximize, kMinimize };
enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

inline const char* ToString(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kIterationLimit: return "iteration_limit";
  }
  return "?";
}

enum class PivotRule {
  // Bland in exact mode; largest coefficient with Bland fallback in float.
  kAutomatic,
  kBland,
  // Largest coefficient with no fallback. Can cycle; exposed for tests.
  kLargestCoefficient,
};

struct LpOptions {
  PivotRule rule = PivotRule::kAutomatic;
  std::size_t max_pivots = 200000;
  // Consecutive degenerate pivots tolerated before switching to Bland.
  std::size_t stall_limit = 50;
};

template <Scalar T>
struct LinearProgram {
  Sense sense = Sense::kMaximize;
  std::vector<T> objective;
  std::vector<std::vector<T>> rows;
  std::vector<Relation> relations;
  std::vector<T> rhs;
  // Per-variable lower bound; std::nullopt marks a free variable. Left
  // empty, every variable is bounded below by zero.
  std::vector<std::optional<T>> lower_bounds;

  std::size_t variable_count() const { return objective.size(); }
  std::size_t constraint_count() const { return rows.size(); }

  void AddConstraint(std::vector<T> row, Relation relation, T bound) {
    rows.push_back(std::move(row));
    relations.push_back(relation);
    rhs.push_back(std::move(bound));
  }

  void Validate() const {
    if (rows.size() != rhs.size() || rows.size() != relations.size()) {
      throw LpError("dimension mismatch: rows, bounds and relations differ");
    }
    for (const auto& row : rows) {
      if (row.size() != objective.size()) {
        throw LpError("dimension mismatch: constraint row has " +
                      std::to_string(row.size()) + " columns, expected " +
                      std::to_string(objective.size()));
      }
    }
    if (!lower_bounds.empty() && lower_bounds.size() != objective.size()) {
      throw LpError("dimension mismatch: lower bounds");
    }
  }

  std::optional<T> LowerBound(std::size_t j) const {
    if (lower_bounds.empty()) return T(0);
    return lower_bounds[j];
  }
};

template <Scalar T>
struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<T> values;
  T objective_value = 0;
  std::size_t pivots = 0;
};

namespace internal {

template <Scalar T>
class Tableau {
 public:
  Tableau(const LinearProgram<T>& lp, const LpOptions& options)
      : lp_(lp), options_(options) {
    Build();
  }

  LpSolution<T> Solve() {
    LpSolution<T> solution;
    if (artificial_count_ > 0) {
      LoadPhaseOneObjective();
      LpStatus s = Iterate(/*phase_one=*/true);
      solution.pivots = pivots_;
      if (s == LpStatus::kIterationLimit) {
        solution.status = s;
        return solution;
      }
      // Objective row rhs holds -(phase-one value) = sum of artificials.
      if (!IsZeroValue(objective_row_.back())) {
        solution.status = LpStatus::kInfeasible;
        return solution;
      }
      DriveOutArtificials();
    }
    LoadPhaseTwoObjective();
    LpStatus s = Iterate(/*phase_one=*/false);
    solution.pivots = pivots_;
    solution.status = s;
    if (s != LpStatus::kOptimal) return solution;
    solution.values = ExtractValues();
    T value = 0;
    for (std::size_t j = 0; j < lp_.variable_count(); ++j) {
      value += lp_.objective[j] * solution.values[j];
    }
    solution.objective_value = value;
    return solution;
  }

 private:
  enum class ColumnKind { kStructural, kSlack, kArtificial };
  struct Column {
    ColumnKind kind;
    std::size_t variable = 0;  // original variable for structural columns
    int sign = 1;              // -1 for the negative part of a free variable
  };

  static bool IsZeroValue(const T& x) {
    if constexpr (kIsExact<T>) {
      return x == 0;
    } else {
      return std::abs(x) <= 1e-9;
    }
  }
  static bool IsPositive(const T& x) {
    if constexpr (kIsExact<T>) {
      return x > 0;
    } else {
      return x > 1e-10;
    }
  }

  void Build() {
    const std::size_t n = lp_.variable_count();
    const std::size_t m = lp_.constraint_count();

    for (std::size_t j = 0; j < n; ++j) {
      columns_.push_back({ColumnKind::kStructural, j, 1});
      if (!lp_.LowerBound(j)) columns_.push_back({ColumnKind::kStructural, j, -1});
    }
    const std::size_t structural = columns_.size();

    // Shift by lower bounds and orient rows so every rhs is nonnegative.
    std::vector<std::vector<T>> a(m, std::vector<T>(structural, T(0)));
    std::vector<T> b(m);
    std::vector<Relation> rel(m);
    for (std::size_t i = 0; i < m; ++i) {
      b[i] = lp_.rhs[i];
      rel[i] = lp_.relations[i];
      for (std::size_t c = 0; c < structural; ++c) {
        const Column& col = columns_[c];
        a[i][c] = col.sign > 0 ? lp_.rows[i][col.variable]
                               : T(-lp_.rows[i][col.variable]);
      }
      for (std::size_t j = 0; j < n; ++j) {
        if (auto lb = lp_.LowerBound(j); lb && *lb != 0) {
          b[i] -= lp_.rows[i][j] * *lb;
        }
      }
      if (b[i] < 0) {
        b[i] = -b[i];
        for (auto& x : a[i]) x = -x;
        if (rel[i] == Relation::kLessEqual) {
          rel[i] = Relation::kGreaterEqual;
        } else if (rel[i] == Relation::kGreaterEqual) {
          rel[i] = Relation::kLessEqual;
        }
      }
    }

    std::vector<std::size_t> slack_of(m, kNone);
    for (std::size_t i = 0; i < m; ++i) {
      if (rel[i] != Relation::kEqual) {
        slack_of[i] = columns_.size();
        columns_.push_back({ColumnKind::kSlack});
      }
    }
    std::vector<std::size_t> artificial_of(m, kNone);
    for (std::size_t i = 0; i < m; ++i) {
      if (rel[i] != Relation::kLessEqual) {
        artificial_of[i] = columns_.size();
        columns_.push_back({ColumnKind::kArtificial});
        ++artificial_count_;
      }
    }

    const std::size_t width = columns_.size() + 1;
    tableau_.assign(m, std::vector<T>(width, T(0)));
    basis_.assign(m, kNone);
    for (std::size_t i = 0; i < m; ++i) {
      auto& row = tableau_[i];
      for (std::size_t c = 0; c < structural; ++c) row[c] = a[i][c];
      if (slack_of[i] != kNone) {
        row[slack_of[i]] = rel[i] == Relation::kLessEqual ? T(1) : T(-1);
      }
      if (artificial_of[i] != kNone) {
        row[artificial_of[i]] = 1;
        basis_[i] = artificial_of[i];
      } else {
        basis_[i] = slack_of[i];
      }
      row.back() = b[i];
    }
  }

  void LoadPhaseOneObjective() {
    // maximize -sum(artificials)
    objective_row_.assign(columns_.size() + 1, T(0));
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      if (columns_[c].kind == ColumnKind::kArtificial) objective_row_[c] = -1;
    }
    PriceOutBasis();
  }

  void LoadPhaseTwoObjective() {
    objective_row_.assign(columns_.size() + 1, T(0));
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      const Column& col = columns_[c];
      if (col.kind != ColumnKind::kStructural) continue;
      T coef = lp_.objective[col.variable];
      if (lp_.sense == Sense::kMinimize) coef = -coef;
      objective_row_[c] = col.sign > 0 ? coef : T(-coef);
    }
    PriceOutBasis();
  }

  // Makes reduced costs of basic columns zero.
  void PriceOutBasis() {
    for (std::size_t r = 0; r < tableau_.size(); ++r) {
      T coef = objective_row_[basis_[r]];
      if (coef == 0) continue;
      const auto& row = tableau_[r];
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (row[c] != 0) objective_row_[c] -= coef * row[c];
      }
    }
  }

  bool Eligible(std::size_t c, bool phase_one) const {
    return phase_one || columns_[c].kind != ColumnKind::kArtificial;
  }

  std::size_t ChooseEntering(bool phase_one, bool bland) const {
    std::size_t best = kNone;
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      if (!Eligible(c, phase_one) || !IsPositive(objective_row_[c])) continue;
      if (bland) return c;
      if (best == kNone || objective_row_[c] > objective_row_[best]) best = c;
    }
    return best;
  }

  std::size_t ChooseLeaving(std::size_t entering) const {
    std::size_t best = kNone;
    T best_ratio = 0;
    for (std::size_t r = 0; r < tableau_.size(); ++r) {
      const T& pivot = tableau_[r][entering];
      if (!IsPositive(pivot)) continue;
      T ratio = tableau_[r].back() / pivot;
      if (best == kNone) {
        best = r;
        best_ratio = ratio;
        continue;
      }
      bool tie;
      bool better;
      if constexpr (kIsExact<T>) {
        better = ratio < best_ratio;
        tie = ratio == best_ratio;
      } else {
        tie = std::abs(ratio - best_ratio) <=
              1e-12 * std::max(1.0, std::abs(best_ratio));
        better = !tie && ratio < best_ratio;
      }
      if (better || (tie && basis_[r] < basis_[best])) {
        best = r;
        best_ratio = ratio;
      }
    }
    return best;
  }

  LpStatus Iterate(bool phase_one) {
    bool bland = kIsExact<T> ? options_.rule != PivotRule::kLargestCoefficient
                             : options_.rule == PivotRule::kBland;
    const bool may_fall_back = !kIsExact<T> &&
                               options_.rule == PivotRule::kAutomatic;
    std::size_t degenerate_run = 0;
    while (true) {
      std::size_t entering = ChooseEntering(phase_one, bland);
      if (entering == kNone) return LpStatus::kOptimal;
      std::size_t leaving = ChooseLeaving(entering);
      if (leaving == kNone) return LpStatus::kUnbounded;
      if (pivots_ >= options_.max_pivots) return LpStatus::kIterationLimit;
      if (IsZeroValue(tableau_[leaving].back())) {
        if (may_fall_back && ++degenerate_run > options_.stall_limit) {
          bland = true;
        }
      } else {
        degenerate_run = 0;
      }
      Pivot(leaving, entering);
    }
  }

  void Pivot(std::size_t r, std::size_t c) {
    ++pivots_;
    auto& prow = tableau_[r];
    const T pivot = prow[c];
    for (auto& x : prow) {
      if (x != 0) x /= pivot;
    }
    prow[c] = 1;
    auto eliminate = [&](std::vector<T>& row) {
      if (row[c] == 0) return;
      const T factor = row[c];
      for (std::size_t k = 0; k < row.size(); ++k) {
        if (prow[k] != 0) row[k] -= factor * prow[k];
        if constexpr (!kIsExact<T>) {
          if (std::abs(row[k]) < 1e-13) row[k] = 0;
        }
      }
      row[c] = 0;
    };
    for (std::size_t i = 0; i < tableau_.size(); ++i) {
      if (i != r) eliminate(tableau_[i]);
    }
    eliminate(objective_row_);
    basis_[r] = c;
  }

  void DriveOutArtificials() {
    for (std::size_t r = 0; r < tableau_.size();) {
      if (columns_[basis_[r]].kind != ColumnKind::kArtificial) {
        ++r;
        continue;
      }
      std::size_t replacement = kNone;
      for (std::size_t c = 0; c < columns_.size(); ++c) {
        if (columns_[c].kind == ColumnKind::kArtificial) continue;
        if (!IsZeroValue(tableau_[r][c])) {
          replacement = c;
          break;
        }
      }
      if (replacement == kNone) {
        // Redundant equality: the row is a combination of the others.
        tableau_.erase(tableau_.begin() + static_cast<std::ptrdiff_t>(r));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
        continue;
      }
      Pivot(r, replacement);
      ++r;
    }
  }

  std::vector<T> ExtractValues() const {
    std::vector<T> shifted(columns_.size(), T(0));
    for (std::size_t r = 0; r < tableau_.size(); ++r) {
      shifted[basis_[r]] = tableau_[r].back();
    }
    std::vector<T> values(lp_.variable_count(), T(0));
    for (std::size_t j = 0; j < values.size(); ++j) {
      if (auto lb = lp_.LowerBound(j)) values[j] = *lb;
    }
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      const Column& col = columns_[c];
      if (col.kind != ColumnKind::kStructural) continue;
      if (col.sign > 0) {
        values[col.variable] += shifted[c];
      } else {
        values[col.variable] -= shifted[c];
      }
    }
    return values;
  }

  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  const LinearProgram<T>& lp_;
  LpOptions options_;
  std::vector<Column> columns_;
  std::vector<std::vector<T>> tableau_;
  std::vector<T> objective_row_;
  std::vector<std::size_t> basis_;
  std::size_t artificial_count_ = 0;
  std::size_t pivots_ = 0;
};

}  // namespace internal

// Solves `lp`. Infeasible and unbounded programs are reported through the
// status; only malformed input throws.
template <Scalar T>
LpSolution<T> SolveLp(const LinearProgram<T>& lp,
                      const LpOptions& options = {}) {
  lp.Validate();
  return internal::Tableau<T>(lp, options).Solve();
}

}  // namespace cheaptalk
