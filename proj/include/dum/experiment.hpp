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

// Offline evaluation of DUM against an MMR lambda sweep.
//
// For every seed the active users' ratings are split 2:1. The train side
// builds the user's genre-quota profile (and fits the rating model); the test
// side is the candidate set. Each method ranks the candidates by normalized
// utility under the user's normalized capped-coverage diversity, and lists
// are scored with ILD, nDCG and EILD against the actual ratings. MMR lists
// have the length of the DUM list for the same user and seed.

#ifndef DUM_EXPERIMENT_HPP_
#define DUM_EXPERIMENT_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "dum/core.hpp"
#include "dum/data.hpp"
#include "dum/diversity.hpp"
#include "dum/factor_model.hpp"
#include "dum/metrics.hpp"
#include "dum/rankers.hpp"

namespace dum {

enum class UtilitySource { kActual, kPredicted };

// {0, 1/n, ..., 1} with n = round(1 / step).
inline std::vector<double> lambda_grid(double step) {
  if (!(step > 0.0 && step <= 1.0)) {
    throw InvalidInput("lambda step must lie in (0, 1]");
  }
  const auto n = static_cast<int>(std::lround(1.0 / step));
  std::vector<double> grid;
  for (int i = 0; i <= n; ++i) grid.push_back(static_cast<double>(i) / n);
  return grid;
}

struct ExperimentConfig {
  std::size_t list_length = 10;
  std::vector<double> lambdas = lambda_grid(0.01);
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  std::size_t min_ratings = 300;
  FactorOptions factors;
  UtilitySource utility_source = UtilitySource::kPredicted;
  ProfileOptions profile;

  void validate() const {
    if (list_length < 1) throw InvalidInput("K must be >= 1");
    if (seeds.empty()) throw InvalidInput("at least one seed is required");
    for (double l : lambdas) {
      if (!(l >= 0.0 && l <= 1.0)) {
        throw InvalidInput("lambda grid must lie within [0, 1]");
      }
    }
  }
};

struct DetailRow {
  UserId user = 0;
  std::uint64_t seed = 0;
  std::string method;             // "dum" or "mmr"
  std::optional<double> lambda;   // empty for dum
  MetricReport metrics;
};

struct SummaryRow {
  std::string method;
  std::optional<double> lambda;
  double mean_ild = 0.0;
  double mean_ndcg = 0.0;
  double mean_eild = 0.0;
};

struct ExperimentStats {
  std::size_t users = 0;    // after the activity filter
  std::size_t ratings = 0;  // after the activity filter
  double mean_train_size = 0.0;
  double mean_candidates = 0.0;
  double mean_dum_length = 0.0;
};

struct ExperimentResult {
  std::vector<DetailRow> details;
  std::vector<SummaryRow> summary;
  ExperimentStats stats;
};

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t seed, std::int64_t user) {
  std::uint64_t z = seed * 0x9E3779B97F4A7C15ULL +
                    static_cast<std::uint64_t>(user) + 0x632BE59BD9B4E019ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline bool row_less(const DetailRow& a, const DetailRow& b) {
  return std::tie(a.user, a.seed, a.method, a.lambda) <
         std::tie(b.user, b.seed, b.method, b.lambda);
}

}  // namespace detail

// Means over seeds per user, then over users, per (method, lambda). DUM comes
// first, then MMR by increasing lambda.
inline std::vector<SummaryRow> summarize(const std::vector<DetailRow>& details) {
  using Key = std::pair<std::string, std::optional<double>>;
  struct Acc {
    double ild = 0, ndcg = 0, eild = 0;
    std::size_t n = 0;
  };
  std::map<Key, std::map<UserId, Acc>> per_user;
  for (const DetailRow& row : details) {
    Acc& acc = per_user[{row.method, row.lambda}][row.user];
    acc.ild += row.metrics.ild;
    acc.ndcg += row.metrics.ndcg;
    acc.eild += row.metrics.eild;
    ++acc.n;
  }
  std::vector<SummaryRow> out;
  for (const auto& [key, users] : per_user) {
    SummaryRow s;
    s.method = key.first;
    s.lambda = key.second;
    for (const auto& [user, acc] : users) {
      const auto n = static_cast<double>(acc.n);
      s.mean_ild += acc.ild / n;
      s.mean_ndcg += acc.ndcg / n;
      s.mean_eild += acc.eild / n;
    }
    const auto u = static_cast<double>(users.size());
    s.mean_ild /= u;
    s.mean_ndcg /= u;
    s.mean_eild /= u;
    out.push_back(std::move(s));
  }
  return out;
}

// Ranks one user's candidates with DUM and every MMR lambda.
inline std::vector<DetailRow> evaluate_user(
    UserId user, std::uint64_t seed, const TopicCatalog& catalog,
    const GroundSet& candidates, const UtilityVector& ranking_utilities,
    std::span<const double> actual_ratings, const UserProfile& profile,
    std::span<const double> lambdas) {
  const std::vector<GenreVector> genres = genre_vectors(candidates);
  const UtilityVector u = normalize_utilities(ranking_utilities);
  DiversityFunction f = capped_coverage(catalog, candidates, profile);
  if (max_singleton(f) > 0.0) f = normalize_diversity(f);

  std::vector<DetailRow> rows;
  const RankedList dum_list = dum_rank(candidates, u, f);
  rows.push_back({user, seed, "dum", std::nullopt,
                  evaluate_list(dum_list.ordering(), actual_ratings, genres)});
  for (double lambda : lambdas) {
    const RankedList mmr_list =
        mmr_rank(candidates, u, f, TradeoffWeight(lambda), dum_list.size());
    rows.push_back({user, seed, "mmr", lambda,
                    evaluate_list(mmr_list.ordering(), actual_ratings, genres)});
  }
  return rows;
}

inline ExperimentResult run_experiment(const MovieLensData& data,
                                       const ExperimentConfig& config) {
  config.validate();
  const RatingsTable active = filter_active_users(data.ratings, config.min_ratings);
  if (active.empty()) {
    throw std::runtime_error("no user has at least " +
                             std::to_string(config.min_ratings) + " ratings");
  }

  ExperimentResult result;
  result.stats.users = active.user_count();
  result.stats.ratings = active.size();
  double train_total = 0.0, candidate_total = 0.0, dum_total = 0.0;
  std::size_t runs = 0;

  for (std::uint64_t seed : config.seeds) {
    const SplitPlan plan = split(active, seed);
    std::optional<FactorModel> model;
    if (config.utility_source == UtilitySource::kPredicted) {
      std::vector<Rating> train_rows;
      for (const UserSplit& s : plan.users) {
        for (std::size_t row : s.train) train_rows.push_back(active[row]);
      }
      FactorOptions options = config.factors;
      options.seed = detail::mix_seed(config.factors.seed, static_cast<std::int64_t>(seed));
      model = fit_factors(train_rows, options);
    }

    for (const UserSplit& s : plan.users) {
      std::vector<ItemIndex> train_items, test_items;
      for (std::size_t row : s.train) train_items.push_back(data.index_of(active[row].item));
      std::vector<double> actual, ranking;
      for (std::size_t row : s.test) {
        const Rating& r = active[row];
        test_items.push_back(data.index_of(r.item));
        actual.push_back(r.stars);
        ranking.push_back(model ? model->predict(r.user, r.item)
                                : static_cast<double>(r.stars));
      }
      const UserProfile profile =
          build_profile(train_items, data.ground, config.list_length,
                        detail::mix_seed(seed, s.user), config.profile);
      const GroundSet candidates = data.ground.subset(test_items);
      auto rows = evaluate_user(s.user, seed, data.catalog, candidates,
                                UtilityVector(std::move(ranking)), actual,
                                profile, config.lambdas);
      train_total += static_cast<double>(train_items.size());
      candidate_total += static_cast<double>(test_items.size());
      dum_total += static_cast<double>(rows.front().metrics.list_length);
      ++runs;
      for (DetailRow& row : rows) result.details.push_back(std::move(row));
    }
  }
  if (runs == 0) throw std::runtime_error("no user could be split");

  std::sort(result.details.begin(), result.details.end(), detail::row_less);
  result.summary = summarize(result.details);
  result.stats.mean_train_size = train_total / static_cast<double>(runs);
  result.stats.mean_candidates = candidate_total / static_cast<double>(runs);
  result.stats.mean_dum_length = dum_total / static_cast<double>(runs);
  return result;
}

inline std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline std::string format_lambda(const std::optional<double>& lambda) {
  return lambda ? format_real(*lambda) : std::string("NA");
}

inline void write_details_csv(std::ostream& out,
                              const std::vector<DetailRow>& rows) {
  out << "user_id,seed,method,lambda,list_len,ild,ndcg,eild\n";
  for (const DetailRow& r : rows) {
    out << r.user << ',' << r.seed << ',' << r.method << ','
        << format_lambda(r.lambda) << ',' << r.metrics.list_length << ','
        << format_real(r.metrics.ild) << ',' << format_real(r.metrics.ndcg)
        << ',' << format_real(r.metrics.eild) << '\n';
  }
}

inline void write_summary_csv(std::ostream& out,
                              const std::vector<SummaryRow>& rows) {
  out << "method,lambda,mean_ild,mean_ndcg,mean_eild\n";
  for (const SummaryRow& r : rows) {
    out << r.method << ',' << format_lambda(r.lambda) << ','
        << format_real(r.mean_ild) << ',' << format_real(r.mean_ndcg) << ','
        << format_real(r.mean_eild) << '\n';
  }
}

// Lambda where the min-max normalized MMR utility (nDCG) and diversity (ILD)
// curves intersect, linearly interpolated between grid points. Empty when
// the curves never cross.
inline std::optional<double> operating_point(
    const std::vector<SummaryRow>& summary) {
  std::vector<const SummaryRow*> mmr;
  for (const SummaryRow& r : summary) {
    if (r.method == "mmr" && r.lambda) mmr.push_back(&r);
  }
  if (mmr.size() < 2) return std::nullopt;
  std::sort(mmr.begin(), mmr.end(), [](const SummaryRow* a, const SummaryRow* b) {
    return *a->lambda < *b->lambda;
  });
  auto scale = [&](auto field) {
    double lo = field(*mmr.front()), hi = lo;
    for (const SummaryRow* r : mmr) {
      lo = std::min(lo, field(*r));
      hi = std::max(hi, field(*r));
    }
    std::vector<double> out;
    for (const SummaryRow* r : mmr) {
      out.push_back(hi > lo ? (field(*r) - lo) / (hi - lo) : 0.0);
    }
    return out;
  };
  const auto utility = scale([](const SummaryRow& r) { return r.mean_ndcg; });
  const auto diversity = scale([](const SummaryRow& r) { return r.mean_ild; });
  for (std::size_t i = 0; i + 1 < mmr.size(); ++i) {
    const double d0 = diversity[i] - utility[i];
    const double d1 = diversity[i + 1] - utility[i + 1];
    if (d0 == 0.0) return *mmr[i]->lambda;
    if ((d0 < 0.0) != (d1 < 0.0) || d1 == 0.0) {
      const double l0 = *mmr[i]->lambda, l1 = *mmr[i + 1]->lambda;
      return l0 + (l1 - l0) * d0 / (d0 - d1);
    }
  }
  return std::nullopt;
}

}  // namespace dum

#endif  // DUM_EXPERIMENT_HPP_
