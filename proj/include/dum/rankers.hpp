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

// Rankers over a ground set with utilities w and a diversity function f.
//
// The diversity-weighted utility of an ordering A = (a_1, ..., a_L) is
//
//   sum_k g_A(a_k) * w(a_k),   g_A(a_k) = f(A_{k-1} + a_k) - f(A_{k-1}).
//
// For monotone submodular f this is the maximum-weight basis problem of the
// polymatroid (E, f), so sorting E by decreasing utility is optimal and the
// gains along that order are the optimal basis. dum_rank returns the items of
// that order with positive gain.

#ifndef DUM_RANKERS_HPP_
#define DUM_RANKERS_HPP_

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "dum/core.hpp"
#include "dum/diversity.hpp"

namespace dum {

// Weight of the diversity term in MMR, in [0, 1].
class TradeoffWeight {
 public:
  explicit TradeoffWeight(double diversity_weight)
      : diversity_weight_(diversity_weight) {
    if (!(diversity_weight >= 0.0 && diversity_weight <= 1.0)) {
      throw InvalidInput("diversity weight must lie in [0, 1]");
    }
  }
  double diversity_weight() const { return diversity_weight_; }
  double utility_weight() const { return 1.0 - diversity_weight_; }

 private:
  double diversity_weight_;
};

// All items by decreasing utility; ties go to the lower index.
inline std::vector<ItemIndex> utility_order(const UtilityVector& u) {
  std::vector<ItemIndex> order(u.size());
  std::iota(order.begin(), order.end(), ItemIndex{0});
  std::sort(order.begin(), order.end(), [&u](ItemIndex a, ItemIndex b) {
    if (u[a] != u[b]) return u[a] > u[b];
    return a < b;
  });
  return order;
}

// Gains g_A along `ordering`, which may be a prefix of a permutation.
inline std::vector<double> chain_gains(std::span<const ItemIndex> ordering,
                                       const DiversityFunction& f) {
  std::vector<double> gains;
  gains.reserve(ordering.size());
  auto ctx = f.context();
  for (ItemIndex e : ordering) gains.push_back(ctx.add(e));
  return gains;
}

namespace detail {

inline void check_aligned(std::size_t ground_size, const UtilityVector& u,
                          const DiversityFunction& f) {
  if (u.size() != ground_size) {
    throw InvalidInput("utility vector has " + std::to_string(u.size()) +
                       " entries for " + std::to_string(ground_size) +
                       " items");
  }
  if (f.item_count() != ground_size) {
    throw InvalidInput("diversity function is defined over " +
                       std::to_string(f.item_count()) + " items, expected " +
                       std::to_string(ground_size));
  }
}

inline void check_permutation(std::span<const ItemIndex> ordering,
                              std::size_t item_count) {
  if (ordering.size() != item_count) {
    throw InvalidInput("ordering has " + std::to_string(ordering.size()) +
                       " items, expected a permutation of " +
                       std::to_string(item_count));
  }
  std::vector<bool> seen(item_count, false);
  for (ItemIndex e : ordering) {
    if (e >= item_count || seen[e]) {
      throw InvalidInput("ordering is not a permutation: item " +
                         std::to_string(e));
    }
    seen[e] = true;
  }
}

}  // namespace detail

// sum_k g_A(a_k) * w(a_k) over a full permutation A of the ground set.
inline double objective_value(std::span<const ItemIndex> ordering,
                              const UtilityVector& u,
                              const DiversityFunction& f) {
  detail::check_aligned(u.size(), u, f);
  detail::check_permutation(ordering, u.size());
  auto ctx = f.context();
  double total = 0.0;
  for (ItemIndex e : ordering) total += ctx.add(e) * u[e];
  return total;
}

// Greedy maximum-weight basis. One oracle call per item.
inline RankedList dum_rank(const GroundSet& ground, const UtilityVector& u,
                           const DiversityFunction& f) {
  detail::check_aligned(ground.size(), u, f);
  std::vector<ItemIndex> selected;
  std::vector<double> gains;
  auto ctx = f.context();
  for (ItemIndex e : utility_order(u)) {
    const double g = ctx.add(e);
    if (g > 0.0) {
      selected.push_back(e);
      gains.push_back(g);
    }
  }
  return RankedList(std::move(selected), std::move(gains), u);
}

// Maximal marginal relevance: repeatedly appends
//   argmax_e (1 - lambda) * w(e) + lambda * f(S + e)
// where lambda is the diversity weight. Ties go to the higher utility, then
// the lower index.
inline RankedList mmr_rank(const GroundSet& ground, const UtilityVector& u,
                           const DiversityFunction& f, TradeoffWeight lambda,
                           std::size_t length) {
  detail::check_aligned(ground.size(), u, f);
  if (length > ground.size()) {
    throw InvalidInput("requested " + std::to_string(length) +
                       " items from a ground set of " +
                       std::to_string(ground.size()));
  }
  const double dw = lambda.diversity_weight();
  const double uw = lambda.utility_weight();

  std::vector<ItemIndex> remaining = utility_order(u);
  std::vector<ItemIndex> selected;
  std::vector<double> gains;
  selected.reserve(length);
  gains.reserve(length);
  auto ctx = f.context();

  while (selected.size() < length) {
    const double base = ctx.value();
    std::size_t best = 0;
    double best_score = 0.0;
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      const ItemIndex e = remaining[i];
      const double score = uw * u[e] + dw * (base + ctx.gain(e));
      // `remaining` is in (utility desc, index asc) order, so the first
      // maximizer already satisfies the tie-breaking rule.
      if (i == 0 || score > best_score) {
        best = i;
        best_score = score;
      }
    }
    const ItemIndex chosen = remaining[best];
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
    gains.push_back(ctx.add(chosen));
    selected.push_back(chosen);
  }
  return RankedList(std::move(selected), std::move(gains), u);
}

// Top `length` items by utility.
inline RankedList utility_rank(const GroundSet& ground, const UtilityVector& u,
                               const DiversityFunction& f,
                               std::size_t length) {
  detail::check_aligned(ground.size(), u, f);
  if (length > ground.size()) {
    throw InvalidInput("requested more items than the ground set holds");
  }
  std::vector<ItemIndex> order = utility_order(u);
  order.resize(length);
  std::vector<double> gains = chain_gains(order, f);
  return RankedList(std::move(order), std::move(gains), u);
}

inline constexpr std::size_t kMaxBruteForceItems = 8;

// Exhaustive maximizer over all L! permutations. Test oracle only.
inline RankedList brute_force_rank(const GroundSet& ground,
                                   const UtilityVector& u,
                                   const DiversityFunction& f) {
  detail::check_aligned(ground.size(), u, f);
  if (ground.size() > kMaxBruteForceItems) {
    throw SizeError("brute force refused: " + std::to_string(ground.size()) +
                    " items exceeds the limit of " +
                    std::to_string(kMaxBruteForceItems));
  }
  std::vector<ItemIndex> perm(ground.size());
  std::iota(perm.begin(), perm.end(), ItemIndex{0});

  // Set values once per subset so that each permutation costs O(L).
  const std::size_t n = perm.size();
  std::vector<double> values(std::size_t{1} << n);
  for (std::size_t mask = 0; mask < values.size(); ++mask) {
    std::vector<ItemIndex> members;
    for (ItemIndex e = 0; e < n; ++e) {
      if (mask & (std::size_t{1} << e)) members.push_back(e);
    }
    values[mask] = f.value(members);
  }

  std::vector<ItemIndex> best = perm;
  double best_value = -1.0;
  do {
    double total = 0.0;
    std::size_t mask = 0;
    for (ItemIndex e : perm) {
      const std::size_t next = mask | (std::size_t{1} << e);
      total += (values[next] - values[mask]) * u[e];
      mask = next;
    }
    if (total > best_value) {
      best_value = total;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::vector<double> gains = chain_gains(best, f);
  return RankedList(std::move(best), std::move(gains), u);
}

// g(e) / f(E): the probability that a cascade user picks each listed item.
inline std::vector<double> cascade_choice_probabilities(
    const RankedList& ranked, const DiversityFunction& f) {
  const double total = f.capacity();
  if (!(total > 0.0)) {
    throw InvalidInput("cascade probabilities need f(E) > 0");
  }
  std::vector<double> out;
  out.reserve(ranked.size());
  for (double g : ranked.gains()) out.push_back(g / total);
  return out;
}

}  // namespace dum

#endif  // DUM_RANKERS_HPP_
