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

// Randomized property suites over small instances: greedy optimality against
// exhaustive search, the coverage characterizations of the DUM list, the
// gain-sum identity, exhaustive submodularity checks and MMR extremes.

#ifndef DUM_VERIFY_HPP_
#define DUM_VERIFY_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dum/core.hpp"
#include "dum/diversity.hpp"
#include "dum/rankers.hpp"

namespace dum {

struct VerifyOptions {
  std::size_t max_items = 6;
  std::size_t max_topics = 4;
  std::size_t max_quota = 3;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  // Adds the supermodular f(X) = |X|^2 to the submodularity suite, which must
  // then fail.
  bool inject_supermodular = false;
};

struct PropertyResult {
  explicit PropertyResult(std::string name) : name(std::move(name)) {}

  std::string name;
  std::size_t cases = 0;
  std::size_t violations = 0;
  std::vector<std::string> counterexamples;  // first few only

  bool passed() const { return violations == 0; }

  void fail(std::string what) {
    ++violations;
    if (counterexamples.size() < 3) counterexamples.push_back(std::move(what));
  }
};

struct Instance {
  TopicCatalog catalog;
  GroundSet ground;
  UtilityVector utilities;
  UserProfile quotas;

  std::string describe() const {
    std::ostringstream out;
    out << "L=" << ground.size() << " M=" << catalog.size() << " items=[";
    for (ItemIndex e = 0; e < ground.size(); ++e) {
      out << (e ? " " : "") << e << ":w=" << utilities[e] << "{";
      const auto topics = ground.topics(e);
      for (std::size_t i = 0; i < topics.size(); ++i) {
        out << (i ? "," : "") << topics[i];
      }
      out << "}";
    }
    out << "] quotas=(";
    for (std::size_t t = 0; t < quotas.quotas().size(); ++t) {
      out << (t ? "," : "") << quotas.quotas()[t];
    }
    out << ")";
    return out.str();
  }
};

inline std::vector<std::string> topic_names(std::size_t m) {
  std::vector<std::string> names;
  for (std::size_t t = 0; t < m; ++t) names.push_back("t" + std::to_string(t));
  return names;
}

// Random instance with 1..max_items items, 1..max_topics topics, Bernoulli(1/2)
// incidence, i.i.d. uniform utilities and quotas in 0..max_quota. With
// `tie_prone`, utilities are drawn from {0.25, 0.5, 0.75, 1}.
inline Instance random_instance(std::mt19937_64& rng, std::size_t max_items,
                                std::size_t max_topics, std::size_t max_quota,
                                bool tie_prone = false) {
  std::uniform_int_distribution<std::size_t> n_items(1, std::max<std::size_t>(1, max_items));
  std::uniform_int_distribution<std::size_t> n_topics(1, std::max<std::size_t>(1, max_topics));
  std::uniform_int_distribution<std::size_t> quota(0, max_quota);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<int> level(1, 4);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  const std::size_t l = n_items(rng);
  const std::size_t m = n_topics(rng);
  TopicCatalog catalog(topic_names(m));
  std::vector<Item> items;
  std::vector<double> w;
  for (std::size_t e = 0; e < l; ++e) {
    Item item;
    item.id = std::to_string(e);
    for (TopicIndex t = 0; t < m; ++t) {
      if (coin(rng)) item.topics.push_back(t);
    }
    items.push_back(std::move(item));
    w.push_back(tie_prone ? level(rng) / 4.0 : uniform(rng));
  }
  std::vector<std::size_t> quotas;
  for (std::size_t t = 0; t < m; ++t) quotas.push_back(quota(rng));
  GroundSet ground(catalog, std::move(items));
  return {std::move(catalog), std::move(ground), UtilityVector(std::move(w)),
          UserProfile::from_quotas(std::move(quotas), max_quota)};
}

namespace detail {

inline std::string list_string(std::span<const ItemIndex> items) {
  std::ostringstream out;
  out << "(";
  for (std::size_t i = 0; i < items.size(); ++i) out << (i ? "," : "") << items[i];
  out << ")";
  return out.str();
}

inline void check_bounds(const VerifyOptions& options) {
  if (options.max_items > kMaxBruteForceItems) {
    throw SizeError("verify: max_items must be <= " +
                    std::to_string(kMaxBruteForceItems));
  }
}

// Utility-sorted permutation: the DUM list followed by its zero-gain items,
// which is exactly the order dum_rank scans.
inline double dum_full_objective(const Instance& inst, const DiversityFunction& f) {
  return objective_value(utility_order(inst.utilities), inst.utilities, f);
}

// Utilities of the members of topic t, largest first. Computed directly from
// the instance so the check does not share the ranker's ordering.
inline std::vector<double> member_utilities(const Instance& inst, TopicIndex t) {
  std::vector<double> out;
  for (ItemIndex e = 0; e < inst.ground.size(); ++e) {
    const auto topics = inst.ground.topics(e);
    if (std::find(topics.begin(), topics.end(), t) != topics.end()) {
      out.push_back(inst.utilities[e]);
    }
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

// S holds the `need` highest-utility members of topic t, with equal
// utilities interchangeable: every member above the need-th largest utility
// v is listed and at least `need` listed members reach v.
inline bool holds_top_members(const Instance& inst, std::span<const ItemIndex> list,
                              TopicIndex t, std::size_t need) {
  if (need == 0) return true;
  const std::vector<double> utilities = member_utilities(inst, t);
  need = std::min(need, utilities.size());
  if (need == 0) return true;
  const double v = utilities[need - 1];
  std::size_t reaching = 0;
  for (ItemIndex e = 0; e < inst.ground.size(); ++e) {
    const auto topics = inst.ground.topics(e);
    if (std::find(topics.begin(), topics.end(), t) == topics.end()) continue;
    const bool listed = std::find(list.begin(), list.end(), e) != list.end();
    if (inst.utilities[e] > v && !listed) return false;
    if (inst.utilities[e] >= v && listed) ++reaching;
  }
  return reaching >= need;
}

}  // namespace detail

inline PropertyResult check_greedy_optimality(const VerifyOptions& options) {
  detail::check_bounds(options);
  PropertyResult result{"greedy optimality vs brute force"};
  std::mt19937_64 rng(options.seed);
  for (std::size_t trial = 0; trial < options.trials; ++trial) {
    const Instance inst = random_instance(rng, options.max_items,
                                          options.max_topics, options.max_quota,
                                          /*tie_prone=*/trial % 2 == 1);
    const DiversityFunction fs[] = {
        topic_coverage(inst.catalog, inst.ground),
        capped_coverage(inst.catalog, inst.ground, inst.quotas)};
    for (const DiversityFunction& f : fs) {
      ++result.cases;
      const double greedy = detail::dum_full_objective(inst, f);
      const RankedList dum = dum_rank(inst.ground, inst.utilities, f);
      const double best = brute_force_rank(inst.ground, inst.utilities, f).objective();
      if (std::abs(greedy - best) > 1e-9 || std::abs(dum.objective() - best) > 1e-9) {
        result.fail(std::string(to_string(f.kind())) + " greedy=" +
                    std::to_string(greedy) + " best=" + std::to_string(best) +
                    " " + inst.describe());
      }
    }
  }
  return result;
}

// Every covered topic holds its highest-utility member and |S| <= M.
inline PropertyResult check_topic_coverage_structure(const VerifyOptions& options) {
  PropertyResult result{"topic coverage: best member per topic, |S| <= M"};
  std::mt19937_64 rng(options.seed + 1);
  for (std::size_t trial = 0; trial < options.trials; ++trial) {
    const Instance inst = random_instance(rng, options.max_items,
                                          options.max_topics, options.max_quota,
                                          /*tie_prone=*/trial % 2 == 1);
    ++result.cases;
    const RankedList s =
        dum_rank(inst.ground, inst.utilities, topic_coverage(inst.catalog, inst.ground));
    const auto& list = s.ordering();
    bool ok = list.size() <= inst.catalog.size();
    for (TopicIndex t = 0; ok && t < inst.catalog.size(); ++t) {
      ok = detail::holds_top_members(inst, list, t, 1);
    }
    if (!ok) result.fail("S=" + detail::list_string(list) + " " + inst.describe());
  }
  return result;
}

// Each topic holds its min(N_t, #members) top-utility members and
// |S| <= sum_t N_t.
inline PropertyResult check_capped_coverage_structure(const VerifyOptions& options) {
  PropertyResult result{"capped coverage: top-N_t members per topic, |S| <= sum N_t"};
  std::mt19937_64 rng(options.seed + 2);
  for (std::size_t trial = 0; trial < options.trials; ++trial) {
    const Instance inst = random_instance(rng, options.max_items,
                                          options.max_topics, options.max_quota,
                                          /*tie_prone=*/trial % 2 == 1);
    ++result.cases;
    const RankedList s = dum_rank(inst.ground, inst.utilities,
                                  capped_coverage(inst.catalog, inst.ground, inst.quotas));
    const auto& list = s.ordering();
    std::size_t quota_sum = 0;
    for (std::size_t q : inst.quotas.quotas()) quota_sum += q;
    bool ok = list.size() <= quota_sum;
    for (TopicIndex t = 0; ok && t < inst.catalog.size(); ++t) {
      ok = detail::holds_top_members(inst, list, t, inst.quotas.quotas()[t]);
    }
    if (!ok) result.fail("S=" + detail::list_string(list) + " " + inst.describe());
  }
  return result;
}

// sum_k g_A(a_k) = f(E) along random full orderings.
inline PropertyResult check_gain_sum(const VerifyOptions& options) {
  PropertyResult result{"gain-sum identity"};
  std::mt19937_64 rng(options.seed + 3);
  for (std::size_t trial = 0; trial < options.trials; ++trial) {
    const Instance inst = random_instance(rng, options.max_items,
                                          options.max_topics, options.max_quota);
    std::vector<ItemIndex> order(inst.ground.size());
    for (ItemIndex e = 0; e < order.size(); ++e) order[e] = e;
    std::shuffle(order.begin(), order.end(), rng);
    const DiversityFunction fs[] = {
        topic_coverage(inst.catalog, inst.ground),
        capped_coverage(inst.catalog, inst.ground, inst.quotas)};
    for (const DiversityFunction& f : fs) {
      ++result.cases;
      double total = 0.0;
      for (double g : chain_gains(order, f)) total += g;
      if (std::abs(total - f.value(order)) > 1e-9 ||
          std::abs(total - f.capacity()) > 1e-9) {
        result.fail(std::string(to_string(f.kind())) + " order=" +
                    detail::list_string(order) + " " + inst.describe());
      }
    }
  }
  return result;
}

inline PropertyResult check_submodularity(const VerifyOptions& options) {
  PropertyResult result{"monotone submodular diversity functions"};
  std::mt19937_64 rng(options.seed + 4);
  auto record = [&](const DiversityFunction& f, const std::string& label) {
    ++result.cases;
    const CheckReport report = check_monotone_submodular(f);
    if (report.ok()) return;
    std::string what = label;
    if (!report.empty_is_zero) what += " f(empty)!=0";
    if (!report.submodularity.empty()) {
      const auto& v = report.submodularity.front();
      what += " submodularity X=" + detail::list_string(v.smaller) +
              " Y=" + detail::list_string(v.larger) +
              " e=" + std::to_string(v.item);
    }
    if (!report.monotonicity.empty()) {
      const auto& v = report.monotonicity.front();
      what += " monotonicity X=" + detail::list_string(v.set) +
              " e=" + std::to_string(v.item);
    }
    result.fail(what);
  };
  for (std::size_t trial = 0; trial < options.trials; ++trial) {
    const Instance inst = random_instance(rng, options.max_items,
                                          options.max_topics, options.max_quota);
    record(topic_coverage(inst.catalog, inst.ground), "topic-coverage");
    record(capped_coverage(inst.catalog, inst.ground, inst.quotas), "capped-coverage");
  }
  if (options.inject_supermodular) {
    const std::size_t n = std::max<std::size_t>(2, options.max_items);
    record(custom_diversity(
               [](std::span<const ItemIndex> x) {
                 const auto k = static_cast<double>(x.size());
                 return k * k;
               },
               n),
           "injected |X|^2");
  }
  return result;
}

// lambda = 0 reproduces the utility order; lambda = 1 under topic coverage
// follows a step-by-step max-coverage oracle that evaluates f from scratch.
inline PropertyResult check_mmr_extremes(const VerifyOptions& options) {
  PropertyResult result{"MMR extremes (lambda = 0 and lambda = 1)"};
  std::mt19937_64 rng(options.seed + 5);
  for (std::size_t trial = 0; trial < options.trials; ++trial) {
    const Instance inst = random_instance(rng, options.max_items,
                                          options.max_topics, options.max_quota,
                                          /*tie_prone=*/trial % 2 == 1);
    const DiversityFunction f = topic_coverage(inst.catalog, inst.ground);
    const std::size_t l = inst.ground.size();
    std::uniform_int_distribution<std::size_t> len(0, l);
    const std::size_t length = len(rng);

    ++result.cases;
    std::vector<ItemIndex> prefix = utility_order(inst.utilities);
    prefix.resize(length);
    const RankedList pure_utility =
        mmr_rank(inst.ground, inst.utilities, f, TradeoffWeight(0.0), length);
    if (pure_utility.ordering() != prefix) {
      result.fail("lambda=0 got " + detail::list_string(pure_utility.ordering()) +
                  " want " + detail::list_string(prefix) + " " + inst.describe());
    }

    ++result.cases;
    std::vector<ItemIndex> expected;
    std::vector<bool> used(l, false);
    for (std::size_t step = 0; step < l; ++step) {
      std::size_t best = l;
      double best_cover = -1.0;
      for (ItemIndex e = 0; e < l; ++e) {
        if (used[e]) continue;
        std::vector<bool> covered(inst.catalog.size(), false);
        for (ItemIndex x : expected) {
          for (TopicIndex t : inst.ground.topics(x)) covered[t] = true;
        }
        for (TopicIndex t : inst.ground.topics(e)) covered[t] = true;
        const auto cover = static_cast<double>(
            std::count(covered.begin(), covered.end(), true));
        const bool better =
            best == l || cover > best_cover ||
            (cover == best_cover && inst.utilities[e] > inst.utilities[best]);
        if (better) {
          best = e;
          best_cover = cover;
        }
      }
      used[best] = true;
      expected.push_back(best);
    }
    const RankedList pure_diversity =
        mmr_rank(inst.ground, inst.utilities, f, TradeoffWeight(1.0), l);
    if (pure_diversity.ordering() != expected) {
      result.fail("lambda=1 got " + detail::list_string(pure_diversity.ordering()) +
                  " want " + detail::list_string(expected) + " " + inst.describe());
    }
  }
  return result;
}

// Reordering equal-utility items must not change the optimal value.
inline PropertyResult check_tie_invariance(const VerifyOptions& options) {
  PropertyResult result{"tie invariance of the DUM objective"};
  std::mt19937_64 rng(options.seed + 6);
  for (std::size_t trial = 0; trial < options.trials; ++trial) {
    const Instance inst = random_instance(rng, options.max_items,
                                          options.max_topics, options.max_quota,
                                          /*tie_prone=*/true);
    // Relabel items by a random permutation; equal utilities then tie-break
    // differently.
    const std::size_t l = inst.ground.size();
    std::vector<ItemIndex> perm(l);
    for (ItemIndex e = 0; e < l; ++e) perm[e] = e;
    std::shuffle(perm.begin(), perm.end(), rng);
    const GroundSet relabeled = inst.ground.subset(perm);
    std::vector<double> w;
    for (ItemIndex e : perm) w.push_back(inst.utilities[e]);
    const UtilityVector u2(std::move(w));

    const DiversityFunction fs[][2] = {
        {topic_coverage(inst.catalog, inst.ground),
         topic_coverage(inst.catalog, relabeled)},
        {capped_coverage(inst.catalog, inst.ground, inst.quotas),
         capped_coverage(inst.catalog, relabeled, inst.quotas)}};
    for (const auto& pair : fs) {
      ++result.cases;
      const double a = dum_rank(inst.ground, inst.utilities, pair[0]).objective();
      const double b = dum_rank(relabeled, u2, pair[1]).objective();
      if (std::abs(a - b) > 1e-9) {
        result.fail("objective " + std::to_string(a) + " vs " +
                    std::to_string(b) + " " + inst.describe());
      }
    }
  }
  return result;
}

inline std::vector<PropertyResult> run_property_suites(const VerifyOptions& options) {
  detail::check_bounds(options);
  return {check_greedy_optimality(options), check_topic_coverage_structure(options),
          check_capped_coverage_structure(options), check_gain_sum(options),
          check_submodularity(options), check_mmr_extremes(options),
          check_tie_invariance(options)};
}

}  // namespace dum

#endif  // DUM_VERIFY_HPP_
