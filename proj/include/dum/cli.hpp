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

// Command-line driver: `rank`, `experiment` and `verify`.
//
// Exit codes: 0 success, 1 input or runtime failure (including failed
// properties), 2 usage error.

#ifndef DUM_CLI_HPP_
#define DUM_CLI_HPP_

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "dum/core.hpp"
#include "dum/data.hpp"
#include "dum/diversity.hpp"
#include "dum/experiment.hpp"
#include "dum/rankers.hpp"
#include "dum/verify.hpp"

namespace dum::cli {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ItemsFile {
  TopicCatalog catalog;
  GroundSet ground;
  UtilityVector utilities;
};

// One item per line: `id<TAB>utility<TAB>genre1|genre2|...`. Topics are
// catalogued in order of first appearance. Blank lines and lines starting
// with '#' are skipped.
inline ItemsFile parse_items(std::istream& in, const std::string& source) {
  std::vector<std::string> topic_names;
  std::map<std::string, TopicIndex> topic_index;
  std::vector<Item> items;
  std::vector<double> utilities;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = detail::strip_cr(line);
    if (text.empty() || text.front() == '#') continue;
    const auto fields = detail::split_fields(text, "\t");
    if (fields.size() != 3) {
      throw ParseError(source, line_no, "expected 3 tab-separated fields");
    }
    if (fields[0].empty()) throw ParseError(source, line_no, "empty item id");
    double w = 0.0;
    {
      const std::string number(fields[1]);
      std::size_t used = 0;
      try {
        w = std::stod(number, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != number.size() || number.empty() || !std::isfinite(w) || w < 0.0) {
        throw ParseError(source, line_no,
                         "utility must be a non-negative number");
      }
    }
    Item item;
    item.id = std::string(fields[0]);
    if (!fields[2].empty()) {
      for (std::string_view genre : detail::split_fields(fields[2], "|")) {
        if (genre.empty()) continue;
        auto [it, inserted] =
            topic_index.emplace(std::string(genre), topic_names.size());
        if (inserted) topic_names.emplace_back(genre);
        item.topics.push_back(it->second);
      }
    }
    for (const Item& other : items) {
      if (other.id == item.id) {
        throw ParseError(source, line_no, "duplicate item id '" + item.id + "'");
      }
    }
    items.push_back(std::move(item));
    utilities.push_back(w);
  }
  TopicCatalog catalog(std::move(topic_names));
  GroundSet ground(catalog, std::move(items));
  return {std::move(catalog), std::move(ground), UtilityVector(std::move(utilities))};
}

struct RankOptions {
  std::string items_path;
  std::string method = "dum";
  std::optional<double> lambda;
  std::optional<std::size_t> length;
  std::string diversity = "topic";
  std::vector<std::string> quotas;  // NAME=N
  bool no_normalize = false;
};

inline UserProfile parse_quotas(const std::vector<std::string>& specs,
                                const TopicCatalog& catalog) {
  std::vector<std::size_t> quotas(catalog.size(), 0);
  std::size_t largest = 1;
  for (const std::string& spec : specs) {
    const auto eq = spec.rfind('=');
    if (eq == std::string::npos || eq == 0) {
      throw UsageError("quota '" + spec + "' is not NAME=N");
    }
    const std::string name = spec.substr(0, eq);
    std::int64_t n = 0;
    if (!detail::parse_int(std::string_view(spec).substr(eq + 1), n) || n < 0) {
      throw UsageError("quota '" + spec + "' needs a non-negative integer");
    }
    const auto t = catalog.find(name);
    if (!t) throw UsageError("quota names unknown topic '" + name + "'");
    quotas[*t] = static_cast<std::size_t>(n);
    largest = std::max(largest, quotas[*t]);
  }
  return UserProfile::from_quotas(std::move(quotas), largest);
}

inline int run_rank(const RankOptions& opt, std::ostream& out) {
  if (opt.method != "dum" && opt.method != "mmr") {
    throw UsageError("--method must be dum or mmr");
  }
  if (opt.method == "mmr" && !opt.lambda) {
    throw UsageError("--lambda is required with --method mmr");
  }
  if (opt.lambda && !(*opt.lambda >= 0.0 && *opt.lambda <= 1.0)) {
    throw UsageError("--lambda must lie in [0, 1]");
  }
  if (opt.method == "dum" && (opt.lambda || opt.length)) {
    throw UsageError("--lambda and --length only apply to --method mmr");
  }
  if (opt.diversity != "topic" && opt.diversity != "capped") {
    throw UsageError("--diversity must be topic or capped");
  }
  if (opt.diversity == "topic" && !opt.quotas.empty()) {
    throw UsageError("--quota requires --diversity capped");
  }

  std::ifstream in(opt.items_path, std::ios::binary);
  if (!in) throw ParseError(opt.items_path, 0, "cannot open file");
  const ItemsFile items = parse_items(in, opt.items_path);

  DiversityFunction f =
      opt.diversity == "topic"
          ? topic_coverage(items.catalog, items.ground)
          : capped_coverage(items.catalog, items.ground,
                            parse_quotas(opt.quotas, items.catalog));
  UtilityVector u = items.utilities;
  if (!opt.no_normalize) {
    u = normalize_utilities(u);
    if (max_singleton(f) > 0.0) f = normalize_diversity(f);
  }

  RankedList list;
  if (opt.method == "dum") {
    list = dum_rank(items.ground, u, f);
  } else {
    const std::size_t length =
        opt.length ? *opt.length : dum_rank(items.ground, u, f).size();
    list = mmr_rank(items.ground, u, f, TradeoffWeight(*opt.lambda), length);
  }
  for (std::size_t k = 0; k < list.size(); ++k) {
    const ItemIndex e = list.ordering()[k];
    out << (k + 1) << '\t' << items.ground.id(e) << '\t'
        << format_real(items.utilities[e]) << '\t'
        << format_real(list.gains()[k]) << '\n';
  }
  return 0;
}

struct ExperimentOptions {
  std::string ratings_path;
  std::string movies_path;
  std::string out_dir = ".";
  std::size_t k = 10;
  double lambda_step = 0.01;
  std::uint64_t seed = 1;
  std::size_t repeats = 3;
  std::size_t min_ratings = 300;
  int factors = 16;
  double regularization = 0.05;
  int iterations = 30;
  std::string utility_source = "predicted";
  bool fractional_genres = false;
};

inline ExperimentConfig make_config(const ExperimentOptions& opt) {
  ExperimentConfig config;
  if (opt.k < 1) throw UsageError("--k must be >= 1");
  if (opt.repeats < 1) throw UsageError("--repeats must be >= 1");
  if (!(opt.lambda_step > 0.0 && opt.lambda_step <= 1.0)) {
    throw UsageError("--lambda-step must lie in (0, 1]");
  }
  config.list_length = opt.k;
  config.lambdas = lambda_grid(opt.lambda_step);
  config.seeds.clear();
  for (std::size_t i = 0; i < opt.repeats; ++i) config.seeds.push_back(opt.seed + i);
  config.min_ratings = opt.min_ratings;
  config.factors.dimensions = opt.factors;
  config.factors.regularization = opt.regularization;
  config.factors.iterations = opt.iterations;
  if (opt.utility_source == "actual") {
    config.utility_source = UtilitySource::kActual;
  } else if (opt.utility_source == "predicted") {
    config.utility_source = UtilitySource::kPredicted;
  } else {
    throw UsageError("--utility-source must be actual or predicted");
  }
  config.profile.fractional_genres = opt.fractional_genres;
  return config;
}

inline int run_experiment_cmd(const ExperimentOptions& opt, std::ostream& out) {
  const ExperimentConfig config = make_config(opt);
  const MovieLensData data = parse_movielens(opt.ratings_path, opt.movies_path);
  const ExperimentResult result = run_experiment(data, config);

  const std::filesystem::path dir(opt.out_dir);
  std::filesystem::create_directories(dir);
  {
    std::ofstream details(dir / "details.csv", std::ios::binary);
    write_details_csv(details, result.details);
    std::ofstream summary(dir / "summary.csv", std::ios::binary);
    write_summary_csv(summary, result.summary);
    if (!details || !summary) {
      throw std::runtime_error("cannot write results to " + dir.string());
    }
  }

  out << "users " << result.stats.users << ", ratings " << result.stats.ratings
      << ", mean profile size " << format_real(result.stats.mean_train_size)
      << ", mean candidates " << format_real(result.stats.mean_candidates)
      << ", mean DUM length " << format_real(result.stats.mean_dum_length) << '\n';
  for (const SummaryRow& row : result.summary) {
    if (row.method == "dum") {
      out << "dum: ild " << format_real(row.mean_ild) << ", ndcg "
          << format_real(row.mean_ndcg) << ", eild "
          << format_real(row.mean_eild) << '\n';
    }
  }
  if (auto lambda = operating_point(result.summary)) {
    out << "mmr operating point: lambda " << format_real(*lambda) << '\n';
  }
  out << "wrote " << (dir / "details.csv").string() << " and "
      << (dir / "summary.csv").string() << '\n';
  return 0;
}

inline int run_verify(const VerifyOptions& options, std::ostream& out,
                      std::ostream& err) {
  if (options.max_items > kMaxBruteForceItems) {
    throw UsageError("--max-items must be <= " +
                     std::to_string(kMaxBruteForceItems));
  }
  if (options.max_items == 0 || options.max_topics == 0) {
    throw UsageError("--max-items and --max-topics must be >= 1");
  }
  if (options.trials == 0) {
    err << "warning: --trials 0 checks nothing; every property passes vacuously\n";
  }
  bool all = true;
  for (const PropertyResult& r : run_property_suites(options)) {
    all = all && r.passed();
    out << (r.passed() ? "PASS " : "FAIL ") << r.name << " (" << r.cases
        << " cases, " << r.violations << " violations)\n";
    for (const std::string& c : r.counterexamples) {
      out << "  counterexample: " << c << '\n';
    }
  }
  return all ? 0 : 1;
}

inline int run(int argc, const char* const* argv, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"Diversity-weighted utility maximization: ranking, offline "
               "evaluation and property checks"};
  app.name("dum");
  app.require_subcommand(1);

  RankOptions rank;
  auto* rank_cmd = app.add_subcommand("rank", "Rank an items file");
  rank_cmd->add_option("--items", rank.items_path,
                       "Items file: id<TAB>utility<TAB>genre1|genre2")
      ->required();
  rank_cmd->add_option("--method", rank.method, "dum or mmr")
      ->capture_default_str();
  rank_cmd->add_option("--lambda", rank.lambda,
                       "MMR diversity weight in [0, 1]");
  rank_cmd->add_option("--length", rank.length,
                       "MMR list length (default: the DUM list length)");
  rank_cmd->add_option("--diversity", rank.diversity, "topic or capped")
      ->capture_default_str();
  rank_cmd->add_option("--quota", rank.quotas,
                       "Topic quota NAME=N for --diversity capped (repeatable)");
  rank_cmd->add_flag("--no-normalize", rank.no_normalize,
                     "Use raw utilities and diversity");

  ExperimentOptions exp;
  auto* exp_cmd = app.add_subcommand("experiment", "Run the offline evaluation");
  exp_cmd->add_option("--ratings", exp.ratings_path, "ratings.dat")->required();
  exp_cmd->add_option("--movies", exp.movies_path, "movies.dat")->required();
  exp_cmd->add_option("--out", exp.out_dir, "Output directory")->capture_default_str();
  exp_cmd->add_option("--k", exp.k, "List length K")->capture_default_str();
  exp_cmd->add_option("--lambda-step", exp.lambda_step, "MMR lambda grid step")
      ->capture_default_str();
  exp_cmd->add_option("--seed", exp.seed, "First split seed")->capture_default_str();
  exp_cmd->add_option("--repeats", exp.repeats, "Number of seeded splits")
      ->capture_default_str();
  exp_cmd->add_option("--min-ratings", exp.min_ratings, "Activity filter")
      ->capture_default_str();
  exp_cmd->add_option("--factors", exp.factors, "Latent dimension")
      ->capture_default_str();
  exp_cmd->add_option("--regularization", exp.regularization,
                      "Factor regularization")
      ->capture_default_str();
  exp_cmd->add_option("--iterations", exp.iterations, "ALS iterations")
      ->capture_default_str();
  exp_cmd->add_option("--utility-source", exp.utility_source,
                      "actual or predicted")
      ->capture_default_str();
  exp_cmd->add_flag("--fractional-genres", exp.fractional_genres,
                    "Weight each genre of a g-genre movie by 1/g in profiles");

  VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "Run the randomized property suites");
  verify_cmd->add_option("--max-items", verify.max_items, "Largest ground set (<= 8)")
      ->capture_default_str();
  verify_cmd->add_option("--max-topics", verify.max_topics, "Largest topic count")
      ->capture_default_str();
  verify_cmd->add_option("--max-quota", verify.max_quota, "Largest topic quota")
      ->capture_default_str();
  verify_cmd->add_option("--trials", verify.trials, "Random instances per suite")
      ->capture_default_str();
  verify_cmd->add_option("--seed", verify.seed, "Generator seed")->capture_default_str();
  verify_cmd->add_flag("--inject-supermodular", verify.inject_supermodular,
                       "Add a supermodular function that must be rejected");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*rank_cmd) return run_rank(rank, out);
    if (*exp_cmd) return run_experiment_cmd(exp, out);
    return run_verify(verify, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace dum::cli

#endif  // DUM_CLI_HPP_
