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

// Canonical two-player fixtures. The same games ship as JSON under data/.

#include "cheaptalk/game.hpp"

namespace cheaptalk::fixtures {

namespace internal {
template <Scalar T>
NormalFormGame<T> TwoByTwo(const char* a, const char* b,
                           std::initializer_list<int> payoffs) {
  std::vector<T> table;
  for (int p : payoffs) table.push_back(T(p));
  return NormalFormGame<T>({"P1", "P2"}, {{a, b}, {a, b}}, std::move(table));
}
}  // namespace internal

// Prisoner's dilemma.
template <Scalar T>
NormalFormGame<T> PrisonersDilemma() {
  return internal::TwoByTwo<T>("C", "D", {3, 3, 0, 5, 5, 0, 1, 1});
}

template <Scalar T>
NormalFormGame<T> Chicken() {
  return internal::TwoByTwo<T>("C", "D", {6, 6, 2, 7, 7, 2, 0, 0});
}

template <Scalar T>
NormalFormGame<T> MatchingPennies() {
  return internal::TwoByTwo<T>("H", "T", {1, -1, -1, 1, -1, 1, 1, -1});
}

// Uniform over {(C,C), (C,D), (D,C)}: the textbook correlated equilibrium
// of Chicken with payoff (5,5).
template <Scalar T>
OutcomeDistribution<T> ChickenTrafficLight() {
  GameShape shape({2, 2});
  return OutcomeDistribution<T>::Uniform(shape, {{0, 0}, {0, 1}, {1, 0}});
}

}  // namespace cheaptalk::fixtures
