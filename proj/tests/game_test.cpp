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

#include "cheaptalk/game.hpp"

#include <gtest/gtest.h>

#include "cheaptalk/fixtures.hpp"
#include "oracles.hpp"

namespace cheaptalk {
namespace {

using fixtures::Chicken;
using fixtures::MatchingPennies;
using fixtures::PrisonersDilemma;

const std::vector<std::vector<std::string>> kCD = {{"C", "D"}, {"C", "D"}};

TEST(NewGameTest, BuildsPrisonersDilemmaFromTable) {
  std::map<Outcome, PayoffVector<Rational>> table = {
      {{0, 0}, {3, 3}}, {{0, 1}, {0, 5}}, {{1, 0}, {5, 0}}, {{1, 1}, {1, 1}}};
  auto game = NewGame<Rational>({"P1", "P2"}, kCD, table);
  EXPECT_EQ(game.player_count(), 2u);
  EXPECT_EQ(game.outcome_count(), 4u);
  EXPECT_EQ(game.utility_table(), PrisonersDilemma<Rational>().utility_table());
}

TEST(NewGameTest, RejectsMissingOutcome) {
  std::map<Outcome, PayoffVector<Rational>> table = {
      {{0, 0}, {3, 3}}, {{0, 1}, {0, 5}}, {{1, 0}, {5, 0}}};
  try {
    NewGame<Rational>({"P1", "P2"}, kCD, table);
    FAIL() << "expected GameError";
  } catch (const GameError& e) {
    EXPECT_NE(std::string(e.what()).find("missing outcome"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("D,D"), std::string::npos);
  }
}

TEST(NewGameTest, RejectsSinglePlayer) {
  std::map<Outcome, PayoffVector<Rational>> table = {{{0}, {1}}};
  try {
    NewGame<Rational>({"P1"}, {{"C"}}, table);
    FAIL() << "expected GameError";
  } catch (const GameError& e) {
    EXPECT_STREQ(e.what(), "need at least two players");
  }
}

TEST(NewGameTest, RejectsDuplicateLabelsAndBadDimensions) {
  EXPECT_THROW(NormalFormGame<double>({}, {{"C", "C"}, {"C", "D"}},
                                      std::vector<double>(8, 0.0)),
               GameError);
  EXPECT_THROW(NormalFormGame<double>({}, {{"C", "D"}, {"C", "D"}},
                                      std::vector<double>(7, 0.0)),
               GameError);
  std::map<Outcome, PayoffVector<Rational>> wrong_length = {
      {{0, 0}, {3}}, {{0, 1}, {0, 5}}, {{1, 0}, {5, 0}}, {{1, 1}, {1, 1}}};
  EXPECT_THROW(NewGame<Rational>({}, kCD, wrong_length), GameError);
}

TEST(UtilityTest, FixtureLookups) {
  auto pd = PrisonersDilemma<Rational>();
  EXPECT_EQ(Utility(pd, Outcome{1, 0}, 0), 5);
  EXPECT_EQ(Utility(pd, Outcome{0, 0}, 1), 3);
  auto mp = MatchingPennies<Rational>();
  EXPECT_EQ(Utility(mp, Outcome{0, 0}, 1), -1);
  EXPECT_THROW(Utility(pd, Outcome{2, 0}, 0), GameError);
  EXPECT_THROW(pd.Utility(Outcome{0, 0}, 2), GameError);
}

TEST(UtilityTest, ExhaustiveTableAgreementOnFixtures) {
  const int pd[4][2] = {{3, 3}, {0, 5}, {5, 0}, {1, 1}};
  const int ch[4][2] = {{6, 6}, {2, 7}, {7, 2}, {0, 0}};
  const int mp[4][2] = {{1, -1}, {-1, 1}, {-1, 1}, {1, -1}};
  auto check = [](const NormalFormGame<Rational>& g, const int (&t)[4][2]) {
    for (StrategyIndex a = 0; a < 2; ++a) {
      for (StrategyIndex b = 0; b < 2; ++b) {
        for (PlayerIndex i = 0; i < 2; ++i) {
          EXPECT_EQ(Utility(g, Outcome{a, b}, i), t[a * 2 + b][i]);
        }
      }
    }
  };
  check(PrisonersDilemma<Rational>(), pd);
  check(Chicken<Rational>(), ch);
  check(MatchingPennies<Rational>(), mp);
}

TEST(GameShapeTest, MixedRadixRoundTripsAndIsLexicographic) {
  GameShape shape({2, 3, 2});
  Outcome previous;
  for (OutcomeIndex index = 0; index < shape.outcome_count(); ++index) {
    Outcome o = shape.Decode(index);
    EXPECT_EQ(shape.Encode(o), index);
    if (index > 0) {
      EXPECT_LT(previous, o);
    }
    for (PlayerIndex i = 0; i < 3; ++i) {
      EXPECT_EQ(shape.ActionOf(index, i), o[i]);
      for (StrategyIndex a = 0; a < shape.strategy_count(i); ++a) {
        Outcome d = o;
        d[i] = a;
        EXPECT_EQ(shape.WithAction(index, i, a), shape.Encode(d));
      }
    }
    previous = o;
  }
}

TEST(ExpectedUtilityTest, Examples) {
  auto pd = PrisonersDilemma<Rational>();
  auto dd = OutcomeDistribution<Rational>::PointMass(pd.shape(), {1, 1});
  EXPECT_EQ(ExpectedUtility(pd, dd, 0), 1);

  auto chicken = Chicken<Rational>();
  auto light = fixtures::ChickenTrafficLight<Rational>();
  // Enumeration oracle: (6 + 2 + 7) / 3.
  Rational oracle = 0;
  testing::ForEachProfile({2, 2}, [&](const Outcome& o) {
    oracle += light.Mass(o) * chicken.Utility(o, 0);
  });
  EXPECT_EQ(oracle, 5);
  EXPECT_EQ(ExpectedUtility(chicken, light, 0), 5);

  auto mp = MatchingPennies<Rational>();
  auto uniform = OutcomeDistribution<Rational>::Uniform(
      mp.shape(), {{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  EXPECT_EQ(ExpectedUtility(mp, uniform, 0), 0);
}

TEST(ExpectedUtilityTest, LinearityReconstructsTableOnRandomGames) {
  testing::Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    auto game = testing::RandomGame<Rational>(rng, 2 + trial % 2, 3);
    auto dist = testing::RandomDistribution(rng, game);
    for (PlayerIndex i = 0; i < game.player_count(); ++i) {
      // Sum over the support of mass * E[u | indicator of that outcome].
      Rational via_indicators = 0;
      for (const auto& [index, mass] : dist.entries()) {
        auto point = OutcomeDistribution<Rational>(game.shape(), {{index, 1}});
        Rational u = ExpectedUtility(game, point, i);
        EXPECT_EQ(u, game.Utility(index, i));
        via_indicators += mass * u;
      }
      EXPECT_EQ(via_indicators, ExpectedUtility(game, dist, i));
    }
  }
}

TEST(OutcomeDistributionTest, Validation) {
  GameShape shape({2, 2});
  using D = OutcomeDistribution<Rational>;
  EXPECT_THROW(D(shape, {{0, Rational(9, 10)}}), DistributionError);
  EXPECT_THROW(D(shape, {{0, Rational(-1)}, {1, Rational(2)}}), DistributionError);
  EXPECT_THROW(D(shape, {{4, Rational(1)}}), DistributionError);
  D d(shape, {{3, Rational(1, 2)}, {0, Rational(0)}, {3, Rational(1, 2)}});
  ASSERT_EQ(d.support_size(), 1u);
  EXPECT_EQ(d.Mass(3), 1);
  EXPECT_EQ(d.Mass(0), 0);

  using F = OutcomeDistribution<double>;
  EXPECT_NO_THROW(F(shape, {{0, 1.0 / 3}, {1, 1.0 / 3}, {2, 1.0 / 3}}));
  EXPECT_THROW(F(shape, {{0, 0.5}, {1, 0.5 - 1e-10}}), DistributionError);
}

TEST(ProductDistributionTest, Examples) {
  auto mp = MatchingPennies<Rational>();
  MixedProfile<Rational> half({{Rational(1, 2), Rational(1, 2)},
                               {Rational(1, 2), Rational(1, 2)}});
  auto uniform = ProductDistribution(mp, half);
  ASSERT_EQ(uniform.support_size(), 4u);
  for (const auto& [index, mass] : uniform.entries()) EXPECT_EQ(mass, Rational(1, 4));

  auto pd = PrisonersDilemma<Rational>();
  auto dd = ProductDistribution(pd, MixedProfile<Rational>::Pure(pd.shape(), {1, 1}));
  EXPECT_EQ(dd, OutcomeDistribution<Rational>::PointMass(pd.shape(), {1, 1}));

  auto chicken = Chicken<Rational>();
  MixedProfile<Rational> p({{Rational(2, 3), Rational(1, 3)}, {Rational(1), Rational(0)}});
  auto d = ProductDistribution(chicken, p);
  EXPECT_EQ(d.Mass(Outcome{1, 0}), Rational(1, 3));
  EXPECT_EQ(d.Mass(Outcome{0, 0}), Rational(2, 3));
  EXPECT_EQ(d.support_size(), 2u);
}

TEST(ProductDistributionTest, RandomProfilesSumToOneExactly) {
  testing::Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    auto game = testing::RandomGame<Rational>(rng, 2 + trial % 2, 3);
    std::vector<std::vector<Rational>> mixes;
    for (PlayerIndex i = 0; i < game.player_count(); ++i) {
      std::vector<int> w;
      int total = 0;
      for (StrategyIndex s = 0; s < game.strategy_count(i); ++s) {
        w.push_back(testing::RandomInt(rng, 0, 4));
        total += w.back();
      }
      if (total == 0) {
        w[0] = 1;
        total = 1;
      }
      std::vector<Rational> mix;
      for (int x : w) mix.emplace_back(x, total);
      mixes.push_back(std::move(mix));
    }
    // Construction itself enforces the exact sum-to-one invariant.
    auto d = ProductDistribution(game, MixedProfile<Rational>(mixes));
    Rational total = 0;
    for (const auto& [index, mass] : d.entries()) {
      EXPECT_GT(mass, 0);
      total += mass;
    }
    EXPECT_EQ(total, 1);
  }
}

TEST(MixedProfileTest, RejectsInvalidVectors) {
  EXPECT_THROW(MixedProfile<Rational>({{Rational(1, 2), Rational(1, 3)}}),
               DistributionError);
  EXPECT_THROW(MixedProfile<Rational>({{Rational(3, 2), Rational(-1, 2)}}),
               DistributionError);
}

TEST(ScalarTest, ParsesRationalsAndDecimals) {
  EXPECT_EQ(ParseRational("1/3"), Rational(1, 3));
  EXPECT_EQ(ParseRational(" -2/4 "), Rational(-1, 2));
  EXPECT_EQ(ParseRational("0.125"), Rational(1, 8));
  EXPECT_EQ(ParseRational("1e-3"), Rational(1, 1000));
  EXPECT_EQ(ParseRational("-1.5E2"), Rational(-150));
  EXPECT_EQ(ParseRational("7"), Rational(7));
  EXPECT_THROW(ParseRational("1/0"), std::invalid_argument);
  EXPECT_THROW(ParseRational("abc"), std::invalid_argument);
  EXPECT_THROW(ParseRational(""), std::invalid_argument);
  EXPECT_EQ(FormatScalar(Rational(14, 3)), "14/3");
  EXPECT_EQ(FormatScalar(0.1), "0.1");
}

}  // namespace
}  // namespace cheaptalk
