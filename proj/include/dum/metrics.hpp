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

// List metrics: intra-list distance (ILD), DCG / nDCG and expected
// intra-list distance (EILD). Ranks are 1-based and every logarithm is base 2,
// so disc(1) = 1.

#ifndef DUM_METRICS_HPP_
#define DUM_METRICS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "dum/core.hpp"

namespace dum {

// Binary topic indicators of one item.
class GenreVector {
 public:
  GenreVector() = default;
  explicit GenreVector(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (std::uint8_t b : bits_) {
      if (b > 1) throw InvalidInput("genre indicators must be 0 or 1");
    }
  }
  GenreVector(std::initializer_list<int> bits)
      : GenreVector(std::vector<std::uint8_t>(bits.begin(), bits.end())) {}

  static GenreVector from_topics(std::span<const TopicIndex> topics,
                                 std::size_t topic_count) {
    std::vector<std::uint8_t> bits(topic_count, 0);
    for (TopicIndex t : topics) bits.at(t) = 1;
    return GenreVector(std::move(bits));
  }

  std::size_t size() const { return bits_.size(); }
  std::uint8_t operator[](std::size_t t) const { return bits_[t]; }

 private:
  std::vector<std::uint8_t> bits_;
};

inline std::vector<GenreVector> genre_vectors(const GroundSet& ground) {
  std::vector<GenreVector> out;
  out.reserve(ground.size());
  for (ItemIndex e = 0; e < ground.size(); ++e) {
    out.push_back(GenreVector::from_topics(ground.topics(e), ground.topic_count()));
  }
  return out;
}

inline double euclidean_genre_distance(const GenreVector& a,
                                       const GenreVector& b) {
  if (a.size() != b.size()) {
    throw InvalidInput("genre vectors differ in length");
  }
  std::size_t differing = 0;
  for (std::size_t t = 0; t < a.size(); ++t) differing += a[t] != b[t];
  return std::sqrt(static_cast<double>(differing));
}

// Position-k discount 1 / log2(k + 1), k >= 1.
inline double rank_discount(std::size_t k) {
  return 1.0 / std::log2(static_cast<double>(k) + 1.0);
}

// Average pairwise genre distance of the listed items; 0 below two items.
inline double ild(std::span<const ItemIndex> list,
                  std::span<const GenreVector> genres) {
  const std::size_t n = list.size();
  if (n < 2) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      total += euclidean_genre_distance(genres[list[i]], genres[list[j]]);
    }
  }
  return 2.0 * total / (static_cast<double>(n) * static_cast<double>(n - 1));
}

inline double ild(const RankedList& list, std::span<const GenreVector> genres) {
  return ild(list.ordering(), genres);
}

namespace detail {
inline void check_non_negative(std::span<const double> utilities) {
  for (double w : utilities) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw InvalidInput("utilities must be finite and non-negative");
    }
  }
}
}  // namespace detail

// sum_k w(s_k) / log2(k + 1) over utilities in rank order.
inline double dcg(std::span<const double> utilities) {
  detail::check_non_negative(utilities);
  double total = 0.0;
  for (std::size_t k = 0; k < utilities.size(); ++k) {
    total += utilities[k] * rank_discount(k + 1);
  }
  return total;
}

// DCG over the DCG of the best same-length list drawn from `ideal_pool`.
// Zero when that ideal DCG is zero.
inline double ndcg(std::span<const double> utilities,
                   std::span<const double> ideal_pool) {
  detail::check_non_negative(ideal_pool);
  if (ideal_pool.size() < utilities.size()) {
    throw InvalidInput("ideal pool is shorter than the list");
  }
  std::vector<double> ideal(ideal_pool.begin(), ideal_pool.end());
  std::partial_sort(ideal.begin(),
                    ideal.begin() + static_cast<std::ptrdiff_t>(utilities.size()),
                    ideal.end(), std::greater<>());
  ideal.resize(utilities.size());
  const double best = dcg(ideal);
  const double actual = dcg(utilities);
  return best > 0.0 ? actual / best : 0.0;
}

// EILD over the listed items:
//
//   sum_k sum_{k' != k} C_k disc(k) rdisc(k'|k) w(s_k) w(s_k') d(s_k, s_k')
//
// with rdisc(k'|k) = disc(max(1, k' - k)),
// C_k = (1 / C) / sum_{k' != k} rdisc(k'|k) w(s_k') and C = sum_k disc(k).
// Positions whose C_k denominator vanishes contribute nothing.
inline double eild(std::span<const double> utilities,
                   std::span<const GenreVector> genres_in_rank_order) {
  const std::size_t n = utilities.size();
  if (genres_in_rank_order.size() != n) {
    throw InvalidInput("EILD needs one genre vector per listed item");
  }
  detail::check_non_negative(utilities);
  if (n < 2) return 0.0;

  double c = 0.0;
  for (std::size_t k = 1; k <= n; ++k) c += rank_discount(k);

  auto rdisc = [](std::size_t k_other, std::size_t k) {
    return k_other > k ? rank_discount(k_other - k) : rank_discount(1);
  };

  double total = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    double norm = 0.0;
    double inner = 0.0;
    for (std::size_t k2 = 1; k2 <= n; ++k2) {
      if (k2 == k) continue;
      const double weighted = rdisc(k2, k) * utilities[k2 - 1];
      norm += weighted;
      inner += weighted * euclidean_genre_distance(genres_in_rank_order[k - 1],
                                                   genres_in_rank_order[k2 - 1]);
    }
    if (norm == 0.0) continue;
    total += (1.0 / c) / norm * rank_discount(k) * utilities[k - 1] * inner;
  }
  return total;
}

struct MetricReport {
  double ild = 0.0;
  double dcg = 0.0;
  double ndcg = 0.0;
  double eild = 0.0;
  std::size_t list_length = 0;
};

// All metrics of one list. `eval_utilities` and `genres` are indexed by item;
// the ideal pool for nDCG is every item of `eval_utilities`.
inline MetricReport evaluate_list(std::span<const ItemIndex> list,
                                  std::span<const double> eval_utilities,
                                  std::span<const GenreVector> genres) {
  std::vector<double> listed;
  std::vector<GenreVector> listed_genres;
  listed.reserve(list.size());
  for (ItemIndex e : list) {
    listed.push_back(eval_utilities[e]);
    listed_genres.push_back(genres[e]);
  }
  MetricReport report;
  report.list_length = list.size();
  report.ild = ild(list, genres);
  report.dcg = dcg(listed);
  report.ndcg = ndcg(listed, eval_utilities);
  report.eild = eild(listed, listed_genres);
  return report;
}

}  // namespace dum

#endif  // DUM_METRICS_HPP_
