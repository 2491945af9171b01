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

// Biased latent-factor rating model
//
//   r(u, i) ~ mu + b_u + b_i + <p_u, q_i>
//
// fitted by alternating ridge regressions (ALS) with weighted-lambda
// regularization: the penalty of each user/item row scales with its number of
// observed ratings.

#ifndef DUM_FACTOR_MODEL_HPP_
#define DUM_FACTOR_MODEL_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "dum/core.hpp"
#include "dum/data.hpp"

namespace dum {

struct FactorOptions {
  int dimensions = 16;
  double regularization = 0.05;
  int iterations = 30;
  std::uint64_t seed = 1;
};

class FactorModel {
 public:
  double global_mean() const { return mean_; }
  int dimensions() const { return static_cast<int>(user_factors_.cols()); }
  double training_rmse() const { return training_rmse_; }

  bool knows_user(UserId u) const { return users_.count(u) != 0; }
  bool knows_item(MovieId i) const { return items_.count(i) != 0; }

  // Clamped to [1, 5]. Unknown users or items drop their bias and factor
  // terms, falling back to the global mean.
  double predict(UserId user, MovieId item) const {
    double score = mean_;
    const auto u = users_.find(user);
    const auto i = items_.find(item);
    if (u != users_.end()) score += user_bias_[u->second];
    if (i != items_.end()) score += item_bias_[i->second];
    if (u != users_.end() && i != items_.end()) {
      score += user_factors_.row(u->second).dot(item_factors_.row(i->second));
    }
    return std::clamp(score, 1.0, 5.0);
  }

  bool all_finite() const {
    return std::isfinite(mean_) && user_factors_.allFinite() &&
           item_factors_.allFinite() && user_bias_.allFinite() &&
           item_bias_.allFinite();
  }

 private:
  friend FactorModel fit_factors(std::span<const Rating>, const FactorOptions&);

  double mean_ = 0.0;
  double training_rmse_ = 0.0;
  std::unordered_map<UserId, std::size_t> users_;
  std::unordered_map<MovieId, std::size_t> items_;
  Eigen::MatrixXd user_factors_;
  Eigen::MatrixXd item_factors_;
  Eigen::VectorXd user_bias_;
  Eigen::VectorXd item_bias_;
};

namespace detail {

// One ALS half-step: re-solves every row of `target` (factors + bias) with the
// other side held fixed. `groups[r]` lists (rating row, other index) pairs.
inline void solve_side(
    const std::vector<std::vector<std::pair<std::size_t, std::size_t>>>& groups,
    std::span<const Rating> rows, double mean, double lambda,
    const Eigen::MatrixXd& other_factors, const Eigen::VectorXd& other_bias,
    Eigen::MatrixXd& target_factors, Eigen::VectorXd& target_bias) {
  const Eigen::Index d = other_factors.cols();
  Eigen::MatrixXd a(d + 1, d + 1);
  Eigen::VectorXd b(d + 1);
  Eigen::VectorXd z(d + 1);
  for (std::size_t r = 0; r < groups.size(); ++r) {
    a.setZero();
    b.setZero();
    for (const auto& [row, other] : groups[r]) {
      z.head(d) = other_factors.row(static_cast<Eigen::Index>(other)).transpose();
      z(d) = 1.0;
      const double y = rows[row].stars - mean -
                       other_bias(static_cast<Eigen::Index>(other));
      a.selfadjointView<Eigen::Lower>().rankUpdate(z);
      b += y * z;
    }
    a.diagonal().array() +=
        lambda * static_cast<double>(std::max<std::size_t>(groups[r].size(), 1));
    const Eigen::VectorXd x = a.selfadjointView<Eigen::Lower>().ldlt().solve(b);
    target_factors.row(static_cast<Eigen::Index>(r)) = x.head(d).transpose();
    target_bias(static_cast<Eigen::Index>(r)) = x(d);
  }
}

}  // namespace detail

inline FactorModel fit_factors(std::span<const Rating> train,
                               const FactorOptions& options) {
  if (options.dimensions <= 0) throw InvalidInput("factor dimension must be > 0");
  if (options.iterations <= 0) throw InvalidInput("iterations must be > 0");
  if (!(options.regularization >= 0.0)) {
    throw InvalidInput("regularization must be >= 0");
  }
  if (train.empty()) throw InvalidInput("cannot fit factors on no ratings");

  FactorModel model;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> by_user;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> by_item;
  double sum = 0.0;
  for (std::size_t row = 0; row < train.size(); ++row) {
    const Rating& r = train[row];
    auto [u, new_user] = model.users_.emplace(r.user, model.users_.size());
    auto [i, new_item] = model.items_.emplace(r.item, model.items_.size());
    if (new_user) by_user.emplace_back();
    if (new_item) by_item.emplace_back();
    by_user[u->second].emplace_back(row, i->second);
    by_item[i->second].emplace_back(row, u->second);
    sum += r.stars;
  }
  model.mean_ = sum / static_cast<double>(train.size());

  const Eigen::Index d = options.dimensions;
  const auto n_users = static_cast<Eigen::Index>(by_user.size());
  const auto n_items = static_cast<Eigen::Index>(by_item.size());
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> init(0.0, 0.1);
  model.user_factors_ = Eigen::MatrixXd::Zero(n_users, d);
  model.item_factors_ = Eigen::MatrixXd(n_items, d);
  for (Eigen::Index i = 0; i < n_items; ++i) {
    for (Eigen::Index k = 0; k < d; ++k) model.item_factors_(i, k) = init(rng);
  }
  model.user_bias_ = Eigen::VectorXd::Zero(n_users);
  model.item_bias_ = Eigen::VectorXd::Zero(n_items);

  for (int it = 0; it < options.iterations; ++it) {
    detail::solve_side(by_user, train, model.mean_, options.regularization,
                       model.item_factors_, model.item_bias_,
                       model.user_factors_, model.user_bias_);
    detail::solve_side(by_item, train, model.mean_, options.regularization,
                       model.user_factors_, model.user_bias_,
                       model.item_factors_, model.item_bias_);
    if (!model.all_finite()) {
      throw std::runtime_error("factor model diverged at iteration " +
                               std::to_string(it + 1));
    }
  }

  double sq = 0.0;
  for (const Rating& r : train) {
    const double err = model.predict(r.user, r.item) - r.stars;
    sq += err * err;
  }
  model.training_rmse_ = std::sqrt(sq / static_cast<double>(train.size()));
  return model;
}

inline FactorModel fit_factors(const RatingsTable& train,
                               const FactorOptions& options) {
  return fit_factors(std::span<const Rating>(train.rows()), options);
}

}  // namespace dum

#endif  // DUM_FACTOR_MODEL_HPP_
