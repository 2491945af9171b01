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

// Rating data for offline evaluation: MovieLens-1M ingestion, activity
// filtering, per-user 2:1 train/test splits and genre-quota user profiles.

#ifndef DUM_DATA_HPP_
#define DUM_DATA_HPP_

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <random>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dum/core.hpp"
#include "dum/metrics.hpp"

namespace dum {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line,
             const std::string& message)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " +
                           message),
        source_(source),
        line_(line) {}

  const std::string& source() const { return source_; }
  std::size_t line() const { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

using UserId = std::int64_t;
using MovieId = std::int64_t;

struct Rating {
  UserId user = 0;
  MovieId item = 0;
  int stars = 0;
  std::int64_t timestamp = 0;
};

// (user, item, stars, timestamp) rows; stars in 1..5 and (user, item) unique.
class RatingsTable {
 public:
  RatingsTable() = default;

  explicit RatingsTable(std::vector<Rating> rows) : rows_(std::move(rows)) {
    std::set<std::pair<UserId, MovieId>> seen;
    for (const Rating& r : rows_) {
      if (r.stars < 1 || r.stars > 5) {
        throw InvalidInput("rating of user " + std::to_string(r.user) +
                           " for item " + std::to_string(r.item) +
                           " is outside 1..5");
      }
      if (!seen.emplace(r.user, r.item).second) {
        throw InvalidInput("duplicate rating of user " +
                           std::to_string(r.user) + " for item " +
                           std::to_string(r.item));
      }
    }
  }

  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }
  const Rating& operator[](std::size_t i) const { return rows_[i]; }
  const std::vector<Rating>& rows() const { return rows_; }

  // Row indices grouped by user, users in ascending id order.
  std::map<UserId, std::vector<std::size_t>> rows_by_user() const {
    std::map<UserId, std::vector<std::size_t>> out;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      out[rows_[i].user].push_back(i);
    }
    return out;
  }

  std::size_t user_count() const { return rows_by_user().size(); }

 private:
  std::vector<Rating> rows_;
};

// The 18 MovieLens-1M genres in their documented order.
inline const std::vector<std::string>& movielens_genres() {
  static const std::vector<std::string> genres = {
      "Action",  "Adventure", "Animation", "Children's", "Comedy",
      "Crime",   "Documentary", "Drama",   "Fantasy",    "Film-Noir",
      "Horror",  "Musical",   "Mystery",   "Romance",    "Sci-Fi",
      "Thriller", "War",      "Western"};
  return genres;
}

struct MovieLensData {
  RatingsTable ratings;
  TopicCatalog catalog;
  GroundSet ground;
  std::vector<GenreVector> genres;  // indexed like `ground`
  std::unordered_map<MovieId, ItemIndex> item_index;

  ItemIndex index_of(MovieId movie) const { return item_index.at(movie); }
};

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line,
                                                  std::string_view sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + sep.size();
  }
}

inline bool parse_int(std::string_view text, std::int64_t& out) {
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end && !text.empty();
}

inline std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace detail

// Parses `MovieID::Title::Genre1|Genre2|...` lines into the ground set.
// Unknown genre names are ignored, so such items may have empty incidence.
inline void parse_movies(std::istream& in, const std::string& source,
                         MovieLensData& data) {
  data.catalog = TopicCatalog(movielens_genres());
  std::vector<Item> items;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = detail::strip_cr(line);
    if (text.empty()) continue;
    const auto fields = detail::split_fields(text, "::");
    if (fields.size() != 3) {
      throw ParseError(source, line_no, "expected 3 '::'-separated fields");
    }
    std::int64_t movie = 0;
    if (!detail::parse_int(fields[0], movie)) {
      throw ParseError(source, line_no, "movie id is not an integer");
    }
    if (data.item_index.count(movie) != 0) {
      throw ParseError(source, line_no,
                       "duplicate movie id " + std::to_string(movie));
    }
    Item item;
    item.id = std::to_string(movie);
    item.name = std::string(fields[1]);
    for (std::string_view genre : detail::split_fields(fields[2], "|")) {
      if (auto t = data.catalog.find(std::string(genre))) {
        item.topics.push_back(*t);
      }
    }
    data.item_index.emplace(movie, items.size());
    items.push_back(std::move(item));
  }
  data.ground = GroundSet(data.catalog, std::move(items));
  data.genres = genre_vectors(data.ground);
}

// Parses `UserID::MovieID::Rating::Timestamp` lines. Movies must already be
// known to `data`.
inline void parse_ratings(std::istream& in, const std::string& source,
                          MovieLensData& data) {
  std::vector<Rating> rows;
  std::set<std::pair<UserId, MovieId>> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = detail::strip_cr(line);
    if (text.empty()) continue;
    const auto fields = detail::split_fields(text, "::");
    if (fields.size() != 4) {
      throw ParseError(source, line_no, "expected 4 '::'-separated fields");
    }
    std::int64_t values[4];
    for (int i = 0; i < 4; ++i) {
      if (!detail::parse_int(fields[i], values[i])) {
        throw ParseError(source, line_no,
                         "field " + std::to_string(i + 1) +
                             " is not an integer");
      }
    }
    if (values[2] < 1 || values[2] > 5) {
      throw ParseError(source, line_no,
                       "rating " + std::to_string(values[2]) +
                           " is outside 1..5");
    }
    if (data.item_index.count(values[1]) == 0) {
      throw ParseError(source, line_no,
                       "unknown movie id " + std::to_string(values[1]));
    }
    if (!seen.emplace(values[0], values[1]).second) {
      throw ParseError(source, line_no, "duplicate (user, movie) rating");
    }
    rows.push_back({values[0], values[1], static_cast<int>(values[2]),
                    values[3]});
  }
  data.ratings = RatingsTable(std::move(rows));
}

inline MovieLensData parse_movielens(const std::string& ratings_path,
                                     const std::string& movies_path) {
  MovieLensData data;
  std::ifstream movies(movies_path, std::ios::binary);
  if (!movies) throw ParseError(movies_path, 0, "cannot open file");
  parse_movies(movies, movies_path, data);
  std::ifstream ratings(ratings_path, std::ios::binary);
  if (!ratings) throw ParseError(ratings_path, 0, "cannot open file");
  parse_ratings(ratings, ratings_path, data);
  return data;
}

// Keeps users with at least `min_ratings` ratings.
inline RatingsTable filter_active_users(const RatingsTable& table,
                                        std::size_t min_ratings) {
  std::unordered_map<UserId, std::size_t> counts;
  for (const Rating& r : table.rows()) ++counts[r.user];
  std::vector<Rating> kept;
  kept.reserve(table.size());
  for (const Rating& r : table.rows()) {
    if (counts[r.user] >= min_ratings) kept.push_back(r);
  }
  return RatingsTable(std::move(kept));
}

struct UserSplit {
  UserId user = 0;
  std::vector<std::size_t> train;  // row indices into the split table
  std::vector<std::size_t> test;
};

struct ExcludedUser {
  UserId user = 0;
  std::size_t rating_count = 0;
};

struct SplitPlan {
  std::uint64_t seed = 0;
  std::vector<UserSplit> users;        // ascending user id
  std::vector<ExcludedUser> excluded;  // users with fewer than 3 ratings
};

inline std::size_t train_size_for(std::size_t n) { return (2 * n + 2) / 3; }

// Uniform random 2:1 partition of each user's ratings; the train side gets
// ceil(2n / 3) rows.
inline SplitPlan split(const RatingsTable& table, std::uint64_t seed) {
  SplitPlan plan;
  plan.seed = seed;
  std::mt19937_64 rng(seed);
  for (auto& [user, rows] : table.rows_by_user()) {
    if (rows.size() < 3) {
      plan.excluded.push_back({user, rows.size()});
      continue;
    }
    std::vector<std::size_t> shuffled = rows;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const std::size_t cut = train_size_for(shuffled.size());
    UserSplit s;
    s.user = user;
    s.train.assign(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(cut));
    s.test.assign(shuffled.begin() + static_cast<std::ptrdiff_t>(cut), shuffled.end());
    std::sort(s.train.begin(), s.train.end());
    std::sort(s.test.begin(), s.test.end());
    plan.users.push_back(std::move(s));
  }
  return plan;
}

struct ProfileOptions {
  std::size_t draws = 10;
  // Each genre of a g-genre movie counts 1/g instead of 1.
  bool fractional_genres = false;
};

// Genre popularity over the given items, normalized to sum 1. All zero when
// none of the items carries a genre.
inline std::vector<double> genre_distribution(std::span<const ItemIndex> items,
                                              const GroundSet& ground,
                                              bool fractional = false) {
  std::vector<double> weights(ground.topic_count(), 0.0);
  double total = 0.0;
  for (ItemIndex e : items) {
    const auto topics = ground.topics(e);
    if (topics.empty()) continue;
    const double share = fractional ? 1.0 / static_cast<double>(topics.size()) : 1.0;
    for (TopicIndex t : topics) {
      weights[t] += share;
      total += share;
    }
  }
  if (total > 0.0) {
    for (double& w : weights) w /= total;
  }
  return weights;
}

// r_t = draw_counts[t] / draws and N_t = floor(r_t * K), the floor taken in
// exact integer arithmetic.
inline UserProfile profile_from_draws(std::span<const std::size_t> draw_counts,
                                      std::size_t list_length) {
  std::size_t draws = 0;
  for (std::size_t c : draw_counts) draws += c;
  std::vector<double> weights(draw_counts.size(), 0.0);
  std::vector<std::size_t> quotas(draw_counts.size(), 0);
  if (draws > 0) {
    for (std::size_t t = 0; t < draw_counts.size(); ++t) {
      weights[t] = static_cast<double>(draw_counts[t]) / static_cast<double>(draws);
      quotas[t] = draw_counts[t] * list_length / draws;
    }
  }
  return UserProfile(std::move(weights), std::move(quotas), list_length);
}

// Samples `draws` genres from the user's train-set genre popularity and
// derives quotas for a list of length K.
inline UserProfile build_profile(std::span<const ItemIndex> train_items,
                                 const GroundSet& ground,
                                 std::size_t list_length, std::uint64_t seed,
                                 const ProfileOptions& options = {}) {
  if (train_items.empty()) {
    throw InvalidInput("profile needs at least one training item");
  }
  if (list_length == 0) throw InvalidInput("list length K must be >= 1");
  const std::vector<double> dist =
      genre_distribution(train_items, ground, options.fractional_genres);
  std::vector<std::size_t> counts(dist.size(), 0);
  const bool any = std::any_of(dist.begin(), dist.end(),
                               [](double w) { return w > 0.0; });
  if (any) {
    std::mt19937_64 rng(seed);
    std::discrete_distribution<std::size_t> pick(dist.begin(), dist.end());
    for (std::size_t i = 0; i < options.draws; ++i) ++counts[pick(rng)];
  }
  return profile_from_draws(counts, list_length);
}

}  // namespace dum

#endif  // DUM_DATA_HPP_
