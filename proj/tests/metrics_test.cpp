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

#include <cmath>
#include <random>
#include <vector>

#include "dum/metrics.hpp"

namespace dum {
namespace {

// Direct transcription of the EILD definition with dense discount and
// distance matrices, used as a second route to the production loop.
double eild_reference(const std::vector<double>& w,
                      const std::vector<GenreVector>& g) {
  const std::size_t n = w.size();
  std::vector<double> disc(n + 1);
  for (std::size_t k = 1; k <= n; ++k) disc[k] = 1.0 / std::log(k + 1.0) * std::log(2.0);
  double c = 0.0;
  for (std::size_t k = 1; k <= n; ++k) c += disc[k];
  std::vector<std::vector<double>> rd(n + 1, std::vector<double>(n + 1, 0.0));
  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  for (std::size_t k = 1; k <= n; ++k) {
    for (std::size_t j = 1; j <= n; ++j) {
      const long gap = static_cast<long>(j) - static_cast<long>(k);
      rd[k][j] = disc[gap < 1 ? 1 : gap];
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      double sq = 0.0;
      for (std::size_t t = 0; t < g[a].size(); ++t) {
        const double d = double(g[a][t]) - double(g[b][t]);
        sq += d * d;
      }
      dist[a][b] = std::sqrt(sq);
    }
  }
  double total = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    double denom = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
      if (j != k) denom += rd[k][j] * w[j - 1];
    }
    if (denom == 0.0) continue;
    const double ck = 1.0 / (c * denom);
    for (std::size_t j = 1; j <= n; ++j) {
      if (j == k) continue;
      total += ck * disc[k] * rd[k][j] * w[k - 1] * w[j - 1] * dist[k - 1][j - 1];
    }
  }
  return total;
}

TEST(GenreVectorTest, Validation) {
  EXPECT_THROW(GenreVector({0, 2}), InvalidInput);
  const std::vector<TopicIndex> topics = {0, 2};
  const auto v = GenreVector::from_topics(topics, 3);
  EXPECT_EQ(v.size(), 3u);
  EXPECT_EQ(v[0], 1);
  EXPECT_EQ(v[1], 0);
  EXPECT_EQ(v[2], 1);
}

TEST(DistanceTest, Euclidean) {
  EXPECT_DOUBLE_EQ(euclidean_genre_distance({1, 1, 0}, {1, 0, 1}), std::sqrt(2.0));
  EXPECT_EQ(euclidean_genre_distance({1, 0}, {1, 0}), 0.0);
  EXPECT_THROW(euclidean_genre_distance({1, 0}, {1}), InvalidInput);
}

TEST(IldTest, Cases) {
  const std::vector<GenreVector> g = {{1, 0}, {0, 1}, {1, 0}, {1, 1}};
  EXPECT_DOUBLE_EQ(ild(std::vector<ItemIndex>{0, 1}, g), std::sqrt(2.0));
  EXPECT_EQ(ild(std::vector<ItemIndex>{0, 2}, g), 0.0);
  EXPECT_EQ(ild(std::vector<ItemIndex>{0}, g), 0.0);
  EXPECT_EQ(ild(std::vector<ItemIndex>{}, g), 0.0);
  // Pairs: sqrt2, 0, 1, sqrt2, 1, 1.
  EXPECT_DOUBLE_EQ(ild(std::vector<ItemIndex>{0, 1, 2, 3}, g),
                   (2 * std::sqrt(2.0) + 3.0) / 6.0);
}

TEST(DcgTest, Values) {
  const std::vector<double> w = {3, 2, 1};
  EXPECT_NEAR(dcg(w), 4.76186, 1e-4);
  EXPECT_DOUBLE_EQ(dcg(w), 3.0 + 2.0 / std::log2(3.0) + 0.5);
  EXPECT_EQ(dcg(std::vector<double>{}), 0.0);
  EXPECT_THROW(dcg(std::vector<double>{-1.0}), InvalidInput);
}

TEST(NdcgTest, Values) {
  const std::vector<double> pool = {1, 3, 2, 0.5};
  EXPECT_DOUBLE_EQ(ndcg(std::vector<double>{3, 2, 1}, pool), 1.0);
  EXPECT_DOUBLE_EQ(ndcg(std::vector<double>{1, 2, 3}, pool),
                   dcg(std::vector<double>{1, 2, 3}) / dcg(std::vector<double>{3, 2, 1}));
  EXPECT_EQ(ndcg(std::vector<double>{0, 0}, std::vector<double>{0, 0}), 0.0);
  EXPECT_THROW(ndcg(std::vector<double>{1, 2}, std::vector<double>{1}), InvalidInput);
}

TEST(NdcgTest, IdealListsScoreOne) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> pool(1 + trial % 12);
    for (double& w : pool) w = u(rng);
    std::vector<double> sorted = pool;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    sorted.resize(1 + trial % pool.size());
    EXPECT_NEAR(ndcg(sorted, pool), 1.0, 1e-12);
  }
}

TEST(EildTest, Cases) {
  EXPECT_EQ(eild(std::vector<double>{1.0}, std::vector<GenreVector>{{1, 0}}), 0.0);
  EXPECT_EQ(eild(std::vector<double>{}, std::vector<GenreVector>{}), 0.0);
  const std::vector<GenreVector> orth = {{1, 0}, {0, 1}};
  EXPECT_NEAR(eild(std::vector<double>{1, 1}, orth), std::sqrt(2.0), 1e-12);
  EXPECT_EQ(eild(std::vector<double>{1, 1}, std::vector<GenreVector>{{1, 0}, {1, 0}}), 0.0);
  EXPECT_EQ(eild(std::vector<double>{0, 0}, orth), 0.0);
  EXPECT_THROW(eild(std::vector<double>{1, 1}, std::vector<GenreVector>{{1, 0}}),
               InvalidInput);
}

TEST(EildTest, AgreesWithDenseReference) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  std::uniform_int_distribution<int> bit(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 9;
    std::vector<double> w(n);
    std::vector<GenreVector> g;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = trial % 5 == 0 && i % 2 ? 0.0 : u(rng);
      std::vector<std::uint8_t> bits(5);
      for (auto& b : bits) b = static_cast<std::uint8_t>(bit(rng));
      g.emplace_back(bits);
    }
    EXPECT_NEAR(eild(w, g), eild_reference(w, g), 1e-12);
  }
}

TEST(OrderSensitivityTest, OnlyIldIgnoresRankOrder) {
  const std::vector<GenreVector> g = {{1, 0}, {0, 1}, {1, 1}};
  const std::vector<ItemIndex> a = {0, 1, 2};
  const std::vector<ItemIndex> b = {2, 0, 1};
  EXPECT_DOUBLE_EQ(ild(a, g), ild(b, g));

  const std::vector<double> pool = {3.0, 1.0, 2.0};
  EXPECT_NE(ndcg(std::vector<double>{3, 1, 2}, pool), ndcg(std::vector<double>{2, 3, 1}, pool));
  EXPECT_NE(eild(std::vector<double>{3, 1, 2}, std::vector<GenreVector>{g[0], g[1], g[2]}),
            eild(std::vector<double>{2, 3, 1}, std::vector<GenreVector>{g[2], g[0], g[1]}));
}

TEST(ScaleTest, DoublingUtilities) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  const std::vector<GenreVector> g = {{1, 0, 0}, {0, 1, 1}, {1, 1, 0}, {0, 0, 1}};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> w(4), w2(4);
    for (std::size_t i = 0; i < w.size(); ++i) {
      w[i] = u(rng);
      w2[i] = 2 * w[i];
    }
    const std::vector<ItemIndex> list = {2, 0, 3};
    const MetricReport a = evaluate_list(list, w, g);
    const MetricReport b = evaluate_list(list, w2, g);
    EXPECT_DOUBLE_EQ(b.dcg, 2 * a.dcg);
    EXPECT_NEAR(b.ndcg, a.ndcg, 1e-12);
    EXPECT_EQ(b.ild, a.ild);
  }
}

TEST(EvaluateListTest, CombinesMetrics) {
  const std::vector<double> w = {0.5, 3.0, 2.0};
  const std::vector<GenreVector> g = {{1, 0}, {0, 1}, {1, 0}};
  const MetricReport r = evaluate_list(std::vector<ItemIndex>{1, 2}, w, g);
  EXPECT_EQ(r.list_length, 2u);
  EXPECT_DOUBLE_EQ(r.ndcg, 1.0);
  EXPECT_DOUBLE_EQ(r.ild, std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(r.dcg, 3.0 + 2.0 / std::log2(3.0));
  EXPECT_NEAR(r.eild, eild_reference({3.0, 2.0}, {{0, 1}, {1, 0}}), 1e-12);
}

}  // namespace
}  // namespace dum
