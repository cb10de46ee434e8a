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

#include "cheaptalk/equilibria.hpp"

#include <algorithm>

#include <gtest/gtest.h>

#include "cheaptalk/fixtures.hpp"
#include "oracles.hpp"

namespace cheaptalk {
namespace {

using fixtures::Chicken;
using fixtures::ChickenTrafficLight;
using fixtures::MatchingPennies;
using fixtures::PrisonersDilemma;
using testing::BruteForceGain;
using testing::BruteForceIsCorrelated;
using testing::BruteForceIsNash;
using testing::BruteForceMinimax;
using testing::BruteForceWelfareCeLp;
using testing::RandomDistribution;
using testing::RandomGame;
using testing::RandomInt;
using testing::Rng;
using testing::VertexEnumerationOptimum;

using Dist = OutcomeDistribution<Rational>;

Dist Point(const NormalFormGame<Rational>& game, Outcome o) {
  return Dist::PointMass(game.shape(), o);
}

NormalFormGame<Rational> ConstantGame() {
  return NormalFormGame<Rational>({}, {{"a", "b"}, {"x", "y", "z"}},
                                  std::vector<Rational>(12, Rational(0)));
}

TEST(VerifyCorrelatedTest, PrisonersDilemmaDefectDefect) {
  auto game = PrisonersDilemma<Rational>();
  auto report = VerifyCorrelated(game, Point(game, {1, 1}));
  EXPECT_TRUE(report.verdict);
  EXPECT_TRUE(report.Violations().empty());
}

TEST(VerifyCorrelatedTest, PrisonersDilemmaCooperateNamesViolation) {
  auto game = PrisonersDilemma<Rational>();
  auto report = VerifyCorrelated(game, Point(game, {0, 0}));
  EXPECT_FALSE(report.verdict);
  EXPECT_EQ(report.worst_violation, Rational(2));
  bool found = false;
  for (const auto& e : report.Violations()) {
    if (e.player == 0 && e.recommended == 0 && e.alternative == 1) {
      EXPECT_EQ(e.gain, Rational(2));
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(VerifyCorrelatedTest, ChickenTrafficLight) {
  auto game = Chicken<Rational>();
  auto dist = ChickenTrafficLight<Rational>();
  EXPECT_TRUE(VerifyCorrelated(game, dist).verdict);
  EXPECT_TRUE(BruteForceIsCorrelated(game, dist));
  EXPECT_TRUE(VerifyCorrelated(ConvertGame<double>(game),
                               ConvertDistribution<double>(dist))
                  .verdict);
}

TEST(VerifyCorrelatedTest, EntriesOnlyForPositiveMarginals) {
  auto game = PrisonersDilemma<Rational>();
  auto report = VerifyCorrelated(game, Point(game, {1, 0}));
  ASSERT_EQ(report.entries.size(), 2u);
  EXPECT_EQ(report.entries[0].player, 0u);
  EXPECT_EQ(report.entries[0].recommended, 1u);
  EXPECT_EQ(report.entries[1].player, 1u);
  EXPECT_EQ(report.entries[1].recommended, 0u);
}

TEST(VerifyCorrelatedTest, FloatToleranceAbsorbsRoundoff) {
  auto game = ConvertGame<double>(Chicken<Rational>());
  auto dist = ConvertDistribution<double>(ChickenTrafficLight<Rational>());
  auto report = VerifyCorrelated(game, dist, 1e-9);
  EXPECT_TRUE(report.verdict);
  EXPECT_EQ(report.mode, NumericMode::kFloat);
}

TEST(VerifyCorrelatedTest, MatchesBruteForceOnRandomGames) {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    auto game = RandomGame<Rational>(rng, RandomInt(rng, 2, 3), 3);
    auto dist = RandomDistribution(rng, game);
    EXPECT_EQ(VerifyCorrelated(game, dist).verdict,
              BruteForceIsCorrelated(game, dist))
        << "trial " << trial;
  }
}

TEST(DeviationGainTest, PrisonersDilemmaCooperate) {
  auto game = PrisonersDilemma<Rational>();
  EXPECT_EQ(DeviationGain(game, Point(game, {0, 0}), 0, 0, 1), Rational(2));
}

TEST(DeviationGainTest, IdentityDeviationIsZero) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    auto game = RandomGame<Rational>(rng, RandomInt(rng, 2, 3), 3);
    auto dist = RandomDistribution(rng, game);
    const auto& [index, mass] = dist.entries().front();
    for (PlayerIndex i = 0; i < game.player_count(); ++i) {
      StrategyIndex s = game.shape().ActionOf(index, i);
      EXPECT_EQ(DeviationGain(game, dist, i, s, s), Rational(0));
    }
  }
}

TEST(DeviationGainTest, ChickenCooperateToDefect) {
  auto game = Chicken<Rational>();
  auto dist = ChickenTrafficLight<Rational>();
  Rational oracle = BruteForceGain(game, dist, 0, 0, 1);
  EXPECT_EQ(oracle, Rational(-1, 3));
  EXPECT_EQ(DeviationGain(game, dist, 0, 0, 1), oracle);
}

TEST(DeviationGainTest, MatchesBruteForce) {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    auto game = RandomGame<Rational>(rng, RandomInt(rng, 2, 3), 3);
    auto dist = RandomDistribution(rng, game);
    for (PlayerIndex i = 0; i < game.player_count(); ++i) {
      auto marginal = dist.Marginals(i);
      for (StrategyIndex s = 0; s < game.strategy_count(i); ++s) {
        if (marginal[s] == 0) continue;
        for (StrategyIndex t = 0; t < game.strategy_count(i); ++t) {
          EXPECT_EQ(DeviationGain(game, dist, i, s, t),
                    BruteForceGain(game, dist, i, s, t));
        }
      }
    }
  }
}

TEST(DeviationGainTest, ZeroMarginalIsAnError) {
  auto game = PrisonersDilemma<Rational>();
  EXPECT_THROW(DeviationGain(game, Point(game, {1, 1}), 0, 0, 1),
               ZeroMarginalError);
}

TEST(SolveCeTest, PrisonersDilemmaWelfareIsTwo) {
  auto game = PrisonersDilemma<Rational>();
  auto ce = SolveCe(game, CeObjective::MaxWelfare());
  EXPECT_TRUE(VerifyCorrelated(game, ce).verdict);
  EXPECT_EQ(Welfare(game, ce), Rational(2));
  EXPECT_EQ(*VertexEnumerationOptimum(BruteForceWelfareCeLp(game)), Rational(2));
}

TEST(SolveCeTest, MatchingPenniesFeasible) {
  auto game = MatchingPennies<Rational>();
  auto ce = SolveCe(game, CeObjective::Feasible());
  EXPECT_TRUE(VerifyCorrelated(game, ce).verdict);
  EXPECT_TRUE(VerifyCorrelated(game, Dist::Uniform(game.shape(), {{0, 0}, {0, 1}, {1, 0}, {1, 1}})).verdict);
}

TEST(SolveCeTest, ChickenWelfareMatchesVertexOracle) {
  auto game = Chicken<Rational>();
  auto ce = SolveCe(game, CeObjective::MaxWelfare());
  EXPECT_TRUE(VerifyCorrelated(game, ce).verdict);
  Rational welfare = Welfare(game, ce);
  EXPECT_GE(welfare, Rational(10));
  EXPECT_EQ(welfare, *VertexEnumerationOptimum(BruteForceWelfareCeLp(game)));
  EXPECT_EQ(welfare, Rational(21, 2));
}

TEST(SolveCeTest, FloatModeAgreesWithExact) {
  for (const auto& game : {PrisonersDilemma<Rational>(), Chicken<Rational>(),
                           MatchingPennies<Rational>()}) {
    auto exact = Welfare(game, SolveCe(game, CeObjective::MaxWelfare()));
    auto fgame = ConvertGame<double>(game);
    auto fce = SolveCe(fgame, CeObjective::MaxWelfare());
    EXPECT_TRUE(VerifyCorrelated(fgame, fce).verdict);
    EXPECT_NEAR(Welfare(fgame, fce), ToDouble(exact), 1e-9);
  }
}

TEST(SolveCeTest, MaxPlayerObjective) {
  auto game = Chicken<Rational>();
  auto ce = SolveCe(game, CeObjective::MaxPlayer(0));
  EXPECT_TRUE(VerifyCorrelated(game, ce).verdict);
  EXPECT_EQ(ExpectedUtility(game, ce, 0), Rational(7));
  EXPECT_THROW(SolveCe(game, CeObjective::MaxPlayer(2)), GameError);
}

TEST(SolveCeTest, WelfareDominatesNashOnRandomGames) {
  Rng rng(13);
  for (int trial = 0; trial < 60; ++trial) {
    auto game = RandomGame<Rational>(rng, 2, 3);
    auto ce = SolveCe(game, CeObjective::MaxWelfare());
    ASSERT_TRUE(VerifyCorrelated(game, ce).verdict);
    Rational welfare = Welfare(game, ce);
    for (const auto& eq : NashTwoPlayer(game).equilibria) {
      EXPECT_GE(welfare, Welfare(game, ProductDistribution(game, eq.profile)));
    }
  }
}

std::vector<PayoffVector<Rational>> SortedPayoffs(const NashList<Rational>& list) {
  std::vector<PayoffVector<Rational>> out;
  for (const auto& eq : list.equilibria) out.push_back(eq.payoffs);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  });
  return out;
}

TEST(NashTest, MatchingPenniesUniqueMixed) {
  auto list = NashTwoPlayer(MatchingPennies<Rational>());
  ASSERT_EQ(list.equilibria.size(), 1u);
  const Rational h(1, 2);
  EXPECT_EQ(list.equilibria[0].profile,
            MixedProfile<Rational>({{h, h}, {h, h}}));
  EXPECT_EQ(list.equilibria[0].payoffs, (PayoffVector<Rational>{0, 0}));
}

TEST(NashTest, PrisonersDilemmaDefect) {
  auto game = PrisonersDilemma<Rational>();
  auto list = NashTwoPlayer(game);
  ASSERT_EQ(list.equilibria.size(), 1u);
  EXPECT_EQ(list.equilibria[0].profile,
            MixedProfile<Rational>::Pure(game.shape(), Outcome{1, 1}));
  EXPECT_EQ(list.equilibria[0].payoffs, (PayoffVector<Rational>{1, 1}));
}

TEST(NashTest, ChickenThreeEquilibria) {
  auto game = Chicken<Rational>();
  auto list = NashTwoPlayer(game);
  EXPECT_FALSE(list.degenerate);
  auto payoffs = SortedPayoffs(list);
  ASSERT_EQ(payoffs.size(), 3u);
  EXPECT_EQ(payoffs[0], (PayoffVector<Rational>{2, 7}));
  EXPECT_EQ(payoffs[1], (PayoffVector<Rational>{Rational(14, 3), Rational(14, 3)}));
  EXPECT_EQ(payoffs[2], (PayoffVector<Rational>{7, 2}));
  for (const auto& eq : list.equilibria) {
    EXPECT_TRUE(BruteForceIsNash(game, eq.profile.strategies()));
    if (eq.payoffs[0] == Rational(14, 3)) {
      EXPECT_EQ(eq.profile[0][1], Rational(1, 3));
      EXPECT_EQ(eq.profile[1][1], Rational(1, 3));
    }
  }
}

TEST(NashTest, RejectsThreePlayers) {
  Rng rng(1);
  auto game = RandomGame<Rational>(rng, 3, 2);
  try {
    NashTwoPlayer(game);
    FAIL();
  } catch (const GameError& e) {
    EXPECT_STREQ(e.what(), "nash: two players only");
  }
}

TEST(NashTest, FlagsDegenerateGames) {
  auto list = NashTwoPlayer(ConstantGame());
  EXPECT_TRUE(list.degenerate);
  EXPECT_FALSE(list.warnings.empty());
  for (const auto& eq : list.equilibria) {
    EXPECT_TRUE(BruteForceIsNash(ConstantGame(), eq.profile.strategies()));
  }
}

TEST(NashTest, EquilibriaAreCorrelatedOnRandomGames) {
  Rng rng(14);
  for (int trial = 0; trial < 200; ++trial) {
    auto exact = RandomGame<Rational>(rng, 2, 3);
    auto game = ConvertGame<double>(exact);
    for (const auto& eq : NashTwoPlayer(game).equilibria) {
      EXPECT_TRUE(BruteForceIsNash(game, eq.profile.strategies(), 1e-9));
      EXPECT_TRUE(
          VerifyCorrelated(game, ProductDistribution(game, eq.profile), 1e-9)
              .verdict)
          << "trial " << trial;
    }
    for (const auto& eq : NashTwoPlayer(exact).equilibria) {
      EXPECT_TRUE(BruteForceIsNash(exact, eq.profile.strategies()));
      EXPECT_TRUE(
          VerifyCorrelated(exact, ProductDistribution(exact, eq.profile)).verdict);
    }
  }
}

TEST(MinimaxTest, PrisonersDilemma) {
  auto r = MinimaxProfile(PrisonersDilemma<Rational>(), 0);
  EXPECT_EQ(r.profile, std::vector<StrategyIndex>{1});
  EXPECT_EQ(r.value, Rational(1));
}

TEST(MinimaxTest, MatchingPenniesTieBreaksToFirst) {
  auto r = MinimaxProfile(MatchingPennies<Rational>(), 0);
  EXPECT_EQ(r.profile, std::vector<StrategyIndex>{0});
  EXPECT_EQ(r.value, Rational(1));
}

TEST(MinimaxTest, ChickenAgainstFirstPlayer) {
  auto game = Chicken<Rational>();
  auto r = MinimaxProfile(game, 0);
  auto brute = BruteForceMinimax(game, 0);
  EXPECT_EQ(r.profile, brute.profile);
  EXPECT_EQ(r.value, brute.value);
  EXPECT_EQ(r.profile, std::vector<StrategyIndex>{1});
  EXPECT_EQ(r.value, Rational(2));
}

TEST(MinimaxTest, ConstantGame) {
  auto r = MinimaxProfile(ConstantGame(), 1);
  EXPECT_EQ(r.profile, std::vector<StrategyIndex>{0});
  EXPECT_EQ(r.value, Rational(0));
}

TEST(MinimaxTest, MatchesBruteForceOnRandomGames) {
  Rng rng(15);
  for (int trial = 0; trial < 500; ++trial) {
    auto game = RandomGame<Rational>(rng, RandomInt(rng, 2, 3), 3);
    for (PlayerIndex i = 0; i < game.player_count(); ++i) {
      auto r = MinimaxProfile(game, i);
      auto brute = BruteForceMinimax(game, i);
      EXPECT_EQ(r.profile, brute.profile) << "trial " << trial;
      EXPECT_EQ(r.value, brute.value) << "trial " << trial;
    }
  }
}

TEST(MixTest, Endpoints) {
  auto game = PrisonersDilemma<Rational>();
  auto d1 = Point(game, {1, 1});
  auto d2 = Point(game, {0, 0});
  EXPECT_EQ(MixDistributions(d1, d2, Rational(0)), d2);
  EXPECT_EQ(MixDistributions(d1, d2, Rational(1)), d1);
  auto half = MixDistributions(d1, d2, Rational(1, 2));
  EXPECT_EQ(half.Mass(Outcome{0, 0}), Rational(1, 2));
  EXPECT_EQ(half.Mass(Outcome{1, 1}), Rational(1, 2));
}

TEST(MixTest, Errors) {
  auto pd = PrisonersDilemma<Rational>();
  auto other = ConstantGame();
  EXPECT_THROW(MixDistributions(Point(pd, {0, 0}), Point(other, {0, 0}),
                                Rational(1, 2)),
               DistributionError);
  EXPECT_THROW(MixDistributions(Point(pd, {0, 0}), Point(pd, {1, 1}),
                                Rational(3, 2)),
               DistributionError);
}

TEST(MixTest, CorrelatedEquilibriaAreConvex) {
  Rng rng(16);
  for (int trial = 0; trial < 100; ++trial) {
    auto game = RandomGame<Rational>(rng, RandomInt(rng, 2, 3), 3);
    auto d1 = SolveCe(game, CeObjective::MaxPlayer(0));
    auto d2 = SolveCe(game, CeObjective::MaxPlayer(1));
    ASSERT_TRUE(VerifyCorrelated(game, d1).verdict);
    ASSERT_TRUE(VerifyCorrelated(game, d2).verdict);
    const int q = RandomInt(rng, 1, 20);
    Rational lambda(RandomInt(rng, 0, q), q);
    auto mixed = MixDistributions(d1, d2, lambda);
    EXPECT_TRUE(VerifyCorrelated(game, mixed).verdict) << "trial " << trial;
    EXPECT_TRUE(BruteForceIsCorrelated(game, mixed));
  }
}

}  // namespace
}  // namespace cheaptalk
