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

#include "dum/factor_model.hpp"

namespace dum {
namespace {

TEST(FactorModelTest, ConstantRatings) {
  std::vector<Rating> rows;
  for (UserId u = 1; u <= 5; ++u) {
    for (MovieId i = 1; i <= 6; ++i) rows.push_back({u, i, 4, 0});
  }
  const FactorModel m = fit_factors(RatingsTable(rows), {4, 0.05, 10, 1});
  EXPECT_DOUBLE_EQ(m.global_mean(), 4.0);
  EXPECT_NEAR(m.predict(2, 3), 4.0, 1e-6);
  EXPECT_NEAR(m.training_rmse(), 0.0, 1e-6);
}

TEST(FactorModelTest, RecoversRankOneStructure) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> side(0.5, 1.5);
  std::vector<double> a(30), b(40);
  for (double& x : a) x = side(rng);
  for (double& x : b) x = side(rng);
  // Integer ratings cannot carry the exact structure, so the fit is checked
  // on a rounded surface with the full matrix observed.
  std::vector<Rating> rows;
  for (std::size_t u = 0; u < a.size(); ++u) {
    for (std::size_t i = 0; i < b.size(); ++i) {
      const int stars = static_cast<int>(std::lround(1.0 + 2.0 * a[u] * b[i]));
      rows.push_back({UserId(u), MovieId(i), std::clamp(stars, 1, 5), 0});
    }
  }
  const FactorModel m = fit_factors(RatingsTable(rows), {8, 0.01, 30, 3});
  EXPECT_TRUE(m.all_finite());
  EXPECT_LT(m.training_rmse(), 0.5);
}

TEST(FactorModelTest, RecoversAdditiveSurface) {
  // r(u, i) = 1 + u + i is pure bias structure.
  std::vector<Rating> rows;
  for (UserId u = 0; u < 3; ++u) {
    for (MovieId i = 0; i < 3; ++i) rows.push_back({u, i, static_cast<int>(1 + u + i), 0});
  }
  const FactorModel m = fit_factors(rows, {2, 0.001, 50, 1});
  EXPECT_LT(m.training_rmse(), 0.05);
}

TEST(FactorModelTest, FallbacksAndClamping) {
  const std::vector<Rating> rows = {{1, 1, 5, 0}, {1, 2, 5, 0}, {2, 1, 1, 0}};
  const FactorModel m = fit_factors(rows, {2, 0.1, 5, 1});
  EXPECT_TRUE(m.knows_user(1));
  EXPECT_FALSE(m.knows_user(3));
  EXPECT_FALSE(m.knows_item(9));
  EXPECT_DOUBLE_EQ(m.predict(99, 99), m.global_mean());
  for (UserId u : {1, 2, 9}) {
    for (MovieId i : {1, 2, 9}) {
      EXPECT_GE(m.predict(u, i), 1.0);
      EXPECT_LE(m.predict(u, i), 5.0);
    }
  }
}

TEST(FactorModelTest, Deterministic) {
  const std::vector<Rating> rows = {{1, 1, 5, 0}, {1, 2, 3, 0}, {2, 1, 2, 0}, {2, 3, 4, 0}};
  const FactorModel a = fit_factors(rows, {3, 0.05, 10, 7});
  const FactorModel b = fit_factors(rows, {3, 0.05, 10, 7});
  EXPECT_EQ(a.predict(1, 3), b.predict(1, 3));
  EXPECT_EQ(a.dimensions(), 3);
}

TEST(FactorModelTest, InvalidOptions) {
  const std::vector<Rating> rows = {{1, 1, 5, 0}};
  EXPECT_THROW(fit_factors(rows, {0, 0.05, 10, 1}), InvalidInput);
  EXPECT_THROW(fit_factors(rows, {2, -1.0, 10, 1}), InvalidInput);
  EXPECT_THROW(fit_factors(rows, {2, 0.05, 0, 1}), InvalidInput);
  EXPECT_THROW(fit_factors(std::vector<Rating>{}, {2, 0.05, 10, 1}), InvalidInput);
}

}  // namespace
}  // namespace dum
