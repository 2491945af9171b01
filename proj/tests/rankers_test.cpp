// Copyright 2026 The Authors.
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


#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <memory>
#include <numeric>
#include <random>
#include <vector>

#include "dum/rankers.hpp"
#include "dum/verify.hpp"
#include "test_util.hpp"

namespace dum {
namespace {

using testing::ids;
using testing::movie_table;
using Ids = std::vector<std::string>;

RankedList dum_on(const testing::MovieTable& t) {
  return dum_rank(t.ground, t.utilities, topic_coverage(t.catalog, t.ground));
}

TEST(DumRankTest, MovieTables) {
  EXPECT_EQ(ids(movie_table(1).ground, dum_on(movie_table(1)).ordering()),
            (Ids{"1", "3"}));
  EXPECT_EQ(ids(movie_table(2).ground, dum_on(movie_table(2)).ordering()),
            (Ids{"1", "5"}));
  EXPECT_EQ(ids(movie_table(3).ground, dum_on(movie_table(3)).ordering()),
            (Ids{"5"}));
}

TEST(DumRankTest, GainsAndObjective) {
  const auto t = movie_table(1);
  const RankedList s = dum_on(t);
  EXPECT_EQ(s.gains(), (std::vector<double>{1.0, 1.0}));
  EXPECT_DOUBLE_EQ(s.objective(), 1.3);
}

TEST(DumRankTest, OneOracleCallPerItem) {
  const auto t = movie_table(2);
  auto calls = std::make_shared<std::atomic<std::uint64_t>>(0);
  const auto f = counting(topic_coverage(t.catalog, t.ground), calls);
  const std::uint64_t before = *calls;
  dum_rank(t.ground, t.utilities, f);
  EXPECT_EQ(*calls - before, t.ground.size());
}

TEST(DumRankTest, RejectsMisalignedInputs) {
  const auto t = movie_table(1);
  const auto other = movie_table(2);
  EXPECT_THROW(dum_rank(t.ground, other.utilities, topic_coverage(t.catalog, t.ground)),
               InvalidInput);
  EXPECT_THROW(dum_rank(t.ground, t.utilities,
                        topic_coverage(other.catalog, other.ground)),
               InvalidInput);
}

TEST(DumRankTest, AllZeroDiversityGivesEmptyList) {
  const TopicCatalog catalog({"a"});
  const GroundSet ground(catalog, {{"x", {}, ""}, {"y", {}, ""}});
  const RankedList s = dum_rank(ground, UtilityVector({1.0, 0.5}),
                                topic_coverage(catalog, ground));
  EXPECT_TRUE(s.empty());
  EXPECT_EQ(s.objective(), 0.0);
}

TEST(ObjectiveValueTest, MovieTableOrdering) {
  const auto t = movie_table(1);
  const auto f = topic_coverage(t.catalog, t.ground);
  EXPECT_DOUBLE_EQ(objective_value(std::vector<ItemIndex>{0, 1, 2, 3}, t.utilities, f), 1.3);
  // Spider-Man 2 first: 0.7 + 0.5.
  EXPECT_DOUBLE_EQ(objective_value(std::vector<ItemIndex>{1, 0, 2, 3}, t.utilities, f), 1.2);
}

TEST(ObjectiveValueTest, RequiresPermutation) {
  const auto t = movie_table(1);
  const auto f = topic_coverage(t.catalog, t.ground);
  EXPECT_THROW(objective_value(std::vector<ItemIndex>{0, 1, 2}, t.utilities, f),
               InvalidInput);
  EXPECT_THROW(objective_value(std::vector<ItemIndex>{0, 1, 1, 3}, t.utilities, f),
               InvalidInput);
}

TEST(MmrRankTest, PureDiversityOnFirstTable) {
  const auto t = movie_table(1);
  const RankedList s = mmr_rank(t.ground, t.utilities,
                                topic_coverage(t.catalog, t.ground),
                                TradeoffWeight(1.0), 4);
  EXPECT_EQ(ids(t.ground, s.ordering()), (Ids{"1", "3", "2", "4"}));
}

TEST(MmrRankTest, BalancedPicksIndianaJones) {
  const auto t = movie_table(3);
  const RankedList s = mmr_rank(
      t.ground, t.utilities,
      normalize_diversity(topic_coverage(t.catalog, t.ground)), TradeoffWeight(0.5), 1);
  EXPECT_EQ(ids(t.ground, s.ordering()), (Ids{"5"}));
}

TEST(MmrRankTest, LengthBounds) {
  const auto t = movie_table(1);
  const auto f = topic_coverage(t.catalog, t.ground);
  EXPECT_TRUE(mmr_rank(t.ground, t.utilities, f, TradeoffWeight(0.3), 0).empty());
  EXPECT_THROW(mmr_rank(t.ground, t.utilities, f, TradeoffWeight(0.3), 5), InvalidInput);
}

TEST(TradeoffWeightTest, Range) {
  EXPECT_NO_THROW(TradeoffWeight(0.0));
  EXPECT_NO_THROW(TradeoffWeight(1.0));
  EXPECT_THROW(TradeoffWeight(-0.01), InvalidInput);
  EXPECT_THROW(TradeoffWeight(1.01), InvalidInput);
  EXPECT_THROW(TradeoffWeight(std::nan("")), InvalidInput);
  EXPECT_DOUBLE_EQ(TradeoffWeight(0.25).utility_weight(), 0.75);
}

TEST(UtilityRankTest, TopByUtilityWithIndexTies) {
  const TopicCatalog catalog({"a"});
  const GroundSet ground(catalog, {{"x", {0}, ""}, {"y", {0}, ""}, {"z", {0}, ""}});
  const UtilityVector u({0.5, 0.9, 0.5});
  const RankedList s = utility_rank(ground, u, topic_coverage(catalog, ground), 3);
  EXPECT_EQ(s.ordering(), (std::vector<ItemIndex>{1, 0, 2}));
  EXPECT_EQ(s.gains(), (std::vector<double>{1.0, 0.0, 0.0}));
}

TEST(BruteForceRankTest, RefusesLargeGroundSets) {
  const TopicCatalog catalog({"a"});
  std::vector<Item> items(9, Item{"", {0}, ""});
  for (std::size_t i = 0; i < items.size(); ++i) items[i].id = std::to_string(i);
  const GroundSet ground(catalog, items);
  EXPECT_THROW(brute_force_rank(ground, UtilityVector(std::vector<double>(9, 1.0)),
                                topic_coverage(catalog, ground)),
               SizeError);
}

TEST(CascadeTest, MovieTableProbabilities) {
  const auto t = movie_table(1);
  const auto f = topic_coverage(t.catalog, t.ground);
  EXPECT_EQ(cascade_choice_probabilities(dum_rank(t.ground, t.utilities, f), f),
            (std::vector<double>{0.5, 0.5}));
}

// Exhaustive comparison against the brute-force maximizer.
TEST(DumPropertyTest, MatchesBruteForce) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 150; ++trial) {
    const Instance inst = random_instance(rng, 6, 4, 3, trial % 3 == 0);
    const DiversityFunction fs[] = {
        topic_coverage(inst.catalog, inst.ground),
        capped_coverage(inst.catalog, inst.ground, inst.quotas)};
    for (const auto& f : fs) {
      const double greedy =
          objective_value(utility_order(inst.utilities), inst.utilities, f);
      const double best =
          brute_force_rank(inst.ground, inst.utilities, f).objective();
      EXPECT_NEAR(greedy, best, 1e-9) << inst.describe();
      const RankedList s = dum_rank(inst.ground, inst.utilities, f);
      EXPECT_NEAR(s.objective(), greedy, 1e-9) << inst.describe();
      for (double g : s.gains()) EXPECT_GT(g, 0.0);
      for (std::size_t k = 1; k < s.size(); ++k) {
        EXPECT_GE(inst.utilities[s.ordering()[k - 1]], inst.utilities[s.ordering()[k]]);
      }
    }
  }
}

TEST(MmrPropertyTest, ZeroDiversityWeightIsUtilityPrefix) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 200; ++trial) {
    const Instance inst = random_instance(rng, 8, 4, 3, trial % 2 == 0);
    const auto f = topic_coverage(inst.catalog, inst.ground);
    const std::size_t length = trial % (inst.ground.size() + 1);
    const auto order = utility_order(inst.utilities);
    const RankedList s = mmr_rank(inst.ground, inst.utilities, f, TradeoffWeight(0.0), length);
    EXPECT_EQ(s.ordering(), std::vector<ItemIndex>(order.begin(), order.begin() + length));
  }
}

}  // namespace
}  // namespace dum
