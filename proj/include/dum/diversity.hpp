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

// Monotone submodular diversity functions f : 2^E -> R+ with f(empty) = 0.
//
// A DiversityFunction is an immutable, cheaply copyable handle. Set values are
// available through value(); chains of marginal gains (the access pattern of
// every ranker) go through a Context, which keeps per-topic counters so that a
// gain costs O(topics of the item) for the coverage functions.

#ifndef DUM_DIVERSITY_HPP_
#define DUM_DIVERSITY_HPP_

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dum/core.hpp"

namespace dum {

enum class DiversityKind { kTopicCoverage, kCappedCoverage, kCustom };

inline const char* to_string(DiversityKind kind) {
  switch (kind) {
    case DiversityKind::kTopicCoverage:
      return "topic-coverage";
    case DiversityKind::kCappedCoverage:
      return "capped-coverage";
    case DiversityKind::kCustom:
      return "custom";
  }
  return "unknown";
}

namespace detail {

class ContextImpl {
 public:
  virtual ~ContextImpl() = default;
  virtual double gain(ItemIndex e) const = 0;
  // Appends e and returns its gain.
  virtual double add(ItemIndex e) = 0;
  virtual double value() const = 0;
};

class DiversityImpl : public std::enable_shared_from_this<DiversityImpl> {
 public:
  virtual ~DiversityImpl() = default;
  virtual double evaluate(std::span<const ItemIndex> items) const = 0;
  virtual std::unique_ptr<ContextImpl> new_context() const = 0;
  virtual std::size_t item_count() const = 0;
  virtual DiversityKind kind() const = 0;
};

inline void check_item(ItemIndex e, std::size_t item_count) {
  if (e >= item_count) {
    throw InvalidInput("item " + std::to_string(e) +
                       " is outside a ground set of " +
                       std::to_string(item_count));
  }
}

// f(X) = sum_t min(|{e in X : e covers t}|, cap_t). Topic coverage is the
// special case cap_t = 1.
class CoverageImpl final : public DiversityImpl {
 public:
  CoverageImpl(const GroundSet& ground, std::vector<std::size_t> caps,
               DiversityKind kind)
      : caps_(std::move(caps)), kind_(kind) {
    offsets_.reserve(ground.size() + 1);
    offsets_.push_back(0);
    for (ItemIndex e = 0; e < ground.size(); ++e) {
      for (TopicIndex t : ground.topics(e)) topics_.push_back(t);
      offsets_.push_back(topics_.size());
    }
  }

  std::span<const TopicIndex> topics(ItemIndex e) const {
    return std::span<const TopicIndex>(topics_).subspan(
        offsets_[e], offsets_[e + 1] - offsets_[e]);
  }
  std::size_t cap(TopicIndex t) const { return caps_[t]; }
  std::size_t topic_count() const { return caps_.size(); }

  double evaluate(std::span<const ItemIndex> items) const override {
    std::vector<std::size_t> counts(caps_.size(), 0);
    std::vector<bool> seen(item_count(), false);
    std::size_t total = 0;
    for (ItemIndex e : items) {
      check_item(e, item_count());
      if (seen[e]) continue;
      seen[e] = true;
      for (TopicIndex t : topics(e)) {
        if (counts[t] < caps_[t]) ++total;
        ++counts[t];
      }
    }
    return static_cast<double>(total);
  }

  std::unique_ptr<ContextImpl> new_context() const override;

  std::size_t item_count() const override { return offsets_.size() - 1; }
  DiversityKind kind() const override { return kind_; }

 private:
  std::vector<std::size_t> caps_;
  std::vector<TopicIndex> topics_;
  std::vector<std::size_t> offsets_;
  DiversityKind kind_;
};

class CoverageContext final : public ContextImpl {
 public:
  explicit CoverageContext(std::shared_ptr<const CoverageImpl> f)
      : f_(std::move(f)),
        counts_(f_->topic_count(), 0),
        member_(f_->item_count(), false) {}

  double gain(ItemIndex e) const override {
    check(e);
    std::size_t g = 0;
    for (TopicIndex t : f_->topics(e)) {
      if (counts_[t] < f_->cap(t)) ++g;
    }
    return static_cast<double>(g);
  }

  double add(ItemIndex e) override {
    const double g = gain(e);
    member_[e] = true;
    for (TopicIndex t : f_->topics(e)) ++counts_[t];
    value_ += g;
    return g;
  }

  double value() const override { return value_; }

 private:
  void check(ItemIndex e) const {
    check_item(e, member_.size());
    if (member_[e]) {
      throw InvalidInput("item " + std::to_string(e) +
                         " is already in the prefix");
    }
  }

  std::shared_ptr<const CoverageImpl> f_;
  std::vector<std::size_t> counts_;
  std::vector<bool> member_;
  double value_ = 0.0;
};

inline std::unique_ptr<ContextImpl> CoverageImpl::new_context() const {
  return std::make_unique<CoverageContext>(
      std::static_pointer_cast<const CoverageImpl>(shared_from_this()));
}

class CustomImpl final : public DiversityImpl {
 public:
  using Fn = std::function<double(std::span<const ItemIndex>)>;

  CustomImpl(Fn fn, std::size_t item_count)
      : fn_(std::move(fn)), item_count_(item_count) {}

  double evaluate(std::span<const ItemIndex> items) const override {
    for (ItemIndex e : items) check_item(e, item_count_);
    return fn_(items);
  }

  std::unique_ptr<ContextImpl> new_context() const override;

  std::size_t item_count() const override { return item_count_; }
  DiversityKind kind() const override { return DiversityKind::kCustom; }

 private:
  Fn fn_;
  std::size_t item_count_;
};

// Generic chain evaluation: two-point differences of the set function with
// the current value cached.
class CustomContext final : public ContextImpl {
 public:
  explicit CustomContext(std::shared_ptr<const CustomImpl> f)
      : f_(std::move(f)), member_(f_->item_count(), false) {
    value_ = f_->evaluate(members_);
  }

  double gain(ItemIndex e) const override {
    check(e);
    members_.push_back(e);
    const double next = f_->evaluate(members_);
    members_.pop_back();
    return next - value_;
  }

  double add(ItemIndex e) override {
    check(e);
    members_.push_back(e);
    member_[e] = true;
    const double next = f_->evaluate(members_);
    const double g = next - value_;
    value_ = next;
    return g;
  }

  double value() const override { return value_; }

 private:
  void check(ItemIndex e) const {
    check_item(e, member_.size());
    if (member_[e]) {
      throw InvalidInput("item " + std::to_string(e) +
                         " is already in the prefix");
    }
  }

  std::shared_ptr<const CustomImpl> f_;
  mutable std::vector<ItemIndex> members_;
  std::vector<bool> member_;
  double value_ = 0.0;
};

inline std::unique_ptr<ContextImpl> CustomImpl::new_context() const {
  return std::make_unique<CustomContext>(
      std::static_pointer_cast<const CustomImpl>(shared_from_this()));
}

class ScaledImpl final : public DiversityImpl {
 public:
  ScaledImpl(std::shared_ptr<const DiversityImpl> inner, double scale)
      : inner_(std::move(inner)), scale_(scale) {}

  double evaluate(std::span<const ItemIndex> items) const override {
    return inner_->evaluate(items) * scale_;
  }

  std::unique_ptr<ContextImpl> new_context() const override {
    class Context final : public ContextImpl {
     public:
      Context(std::unique_ptr<ContextImpl> inner, double scale)
          : inner_(std::move(inner)), scale_(scale) {}
      double gain(ItemIndex e) const override {
        return inner_->gain(e) * scale_;
      }
      double add(ItemIndex e) override { return inner_->add(e) * scale_; }
      double value() const override { return inner_->value() * scale_; }

     private:
      std::unique_ptr<ContextImpl> inner_;
      double scale_;
    };
    return std::make_unique<Context>(inner_->new_context(), scale_);
  }

  std::size_t item_count() const override { return inner_->item_count(); }
  DiversityKind kind() const override { return inner_->kind(); }

 private:
  std::shared_ptr<const DiversityImpl> inner_;
  double scale_;
};

class CountingImpl final : public DiversityImpl {
 public:
  CountingImpl(std::shared_ptr<const DiversityImpl> inner,
               std::shared_ptr<std::atomic<std::uint64_t>> calls)
      : inner_(std::move(inner)), calls_(std::move(calls)) {}

  double evaluate(std::span<const ItemIndex> items) const override {
    ++*calls_;
    return inner_->evaluate(items);
  }

  std::unique_ptr<ContextImpl> new_context() const override {
    class Context final : public ContextImpl {
     public:
      Context(std::unique_ptr<ContextImpl> inner,
              std::shared_ptr<std::atomic<std::uint64_t>> calls)
          : inner_(std::move(inner)), calls_(std::move(calls)) {}
      double gain(ItemIndex e) const override {
        ++*calls_;
        return inner_->gain(e);
      }
      double add(ItemIndex e) override {
        ++*calls_;
        return inner_->add(e);
      }
      double value() const override { return inner_->value(); }

     private:
      std::unique_ptr<ContextImpl> inner_;
      std::shared_ptr<std::atomic<std::uint64_t>> calls_;
    };
    return std::make_unique<Context>(inner_->new_context(), calls_);
  }

  std::size_t item_count() const override { return inner_->item_count(); }
  DiversityKind kind() const override { return inner_->kind(); }

 private:
  std::shared_ptr<const DiversityImpl> inner_;
  std::shared_ptr<std::atomic<std::uint64_t>> calls_;
};

}  // namespace detail

class DiversityFunction {
 public:
  // Incremental evaluation along a prefix chain A_0 ⊂ A_1 ⊂ ... Not
  // thread-safe; create one per ranking.
  class Context {
   public:
    // f(prefix + e) - f(prefix). Throws InvalidInput if e is in the prefix.
    double gain(ItemIndex e) const { return impl_->gain(e); }
    // Appends e to the prefix and returns its gain.
    double add(ItemIndex e) { return impl_->add(e); }
    // f(prefix).
    double value() const { return impl_->value(); }

   private:
    friend class DiversityFunction;
    explicit Context(std::unique_ptr<detail::ContextImpl> impl)
        : impl_(std::move(impl)) {}
    std::unique_ptr<detail::ContextImpl> impl_;
  };

  DiversityFunction() = default;

  explicit DiversityFunction(std::shared_ptr<const detail::DiversityImpl> impl)
      : impl_(std::move(impl)) {
    std::vector<ItemIndex> all(impl_->item_count());
    for (ItemIndex e = 0; e < all.size(); ++e) all[e] = e;
    capacity_ = impl_->evaluate(all);
  }

  // f(X). Repeated items are treated as a set for the coverage functions.
  double value(std::span<const ItemIndex> items) const {
    return impl_->evaluate(items);
  }
  double value(std::initializer_list<ItemIndex> items) const {
    return impl_->evaluate(std::span<const ItemIndex>(items.begin(), items.size()));
  }

  // f(E).
  double capacity() const { return capacity_; }
  DiversityKind kind() const { return impl_->kind(); }
  std::size_t item_count() const { return impl_->item_count(); }

  Context context() const { return Context(impl_->new_context()); }

  const std::shared_ptr<const detail::DiversityImpl>& impl() const {
    return impl_;
  }

 private:
  std::shared_ptr<const detail::DiversityImpl> impl_;
  double capacity_ = 0.0;
};

// Number of distinct topics covered by X.
inline DiversityFunction topic_coverage(const TopicCatalog& catalog,
                                        const GroundSet& ground) {
  if (ground.topic_count() != catalog.size()) {
    throw InvalidInput("ground set and catalog disagree on the topic count");
  }
  return DiversityFunction(std::make_shared<detail::CoverageImpl>(
      ground, std::vector<std::size_t>(catalog.size(), 1),
      DiversityKind::kTopicCoverage));
}

// sum_t min(#items of X covering t, N_t).
inline DiversityFunction capped_coverage(const TopicCatalog& catalog,
                                         const GroundSet& ground,
                                         const UserProfile& profile) {
  if (ground.topic_count() != catalog.size() ||
      profile.topic_count() != catalog.size()) {
    throw InvalidInput("quotas must cover every topic of the catalog");
  }
  return DiversityFunction(std::make_shared<detail::CoverageImpl>(
      ground, profile.quotas(), DiversityKind::kCappedCoverage));
}

// Caller-supplied set function. Monotonicity and submodularity are the
// caller's contract; see check_monotone_submodular.
inline DiversityFunction custom_diversity(
    std::function<double(std::span<const ItemIndex>)> fn,
    std::size_t item_count) {
  return DiversityFunction(
      std::make_shared<detail::CustomImpl>(std::move(fn), item_count));
}

// Counts every set evaluation and every context gain/add on `calls`.
inline DiversityFunction counting(
    const DiversityFunction& f,
    std::shared_ptr<std::atomic<std::uint64_t>> calls) {
  return DiversityFunction(
      std::make_shared<detail::CountingImpl>(f.impl(), std::move(calls)));
}

// f(prefix + e) - f(prefix).
inline double gain(const DiversityFunction& f,
                   std::span<const ItemIndex> prefix, ItemIndex e) {
  std::vector<ItemIndex> extended(prefix.begin(), prefix.end());
  if (std::find(extended.begin(), extended.end(), e) != extended.end()) {
    throw InvalidInput("item " + std::to_string(e) +
                       " is already in the prefix");
  }
  const double before = f.value(extended);
  extended.push_back(e);
  return f.value(extended) - before;
}

// Largest singleton value max_e f({e}).
inline double max_singleton(const DiversityFunction& f) {
  double best = 0.0;
  auto ctx = f.context();
  for (ItemIndex e = 0; e < f.item_count(); ++e) {
    best = std::max(best, ctx.gain(e));
  }
  return best;
}

// Rescales f so the richest single item has diversity 1.
inline DiversityFunction normalize_diversity(const DiversityFunction& f) {
  const double top = max_singleton(f);
  if (!(top > 0.0)) {
    throw InvalidInput("cannot normalize: every singleton has zero diversity");
  }
  if (top == 1.0) return f;
  return DiversityFunction(
      std::make_shared<detail::ScaledImpl>(f.impl(), 1.0 / top));
}

struct MonotonicityViolation {
  std::vector<ItemIndex> set;
  ItemIndex item;
  double decrease;  // f(X) - f(X + e) > 0
};

// gain of `item` at `smaller` is below its gain at `larger` ⊇ smaller.
struct SubmodularityViolation {
  std::vector<ItemIndex> smaller;
  std::vector<ItemIndex> larger;
  ItemIndex item;
  double excess;
};

struct CheckReport {
  double empty_value = 0.0;
  bool empty_is_zero = true;
  std::size_t monotonicity_count = 0;
  std::size_t submodularity_count = 0;
  // Capped at the max_reported argument of the checker.
  std::vector<MonotonicityViolation> monotonicity;
  std::vector<SubmodularityViolation> submodularity;

  bool ok() const {
    return empty_is_zero && monotonicity_count == 0 &&
           submodularity_count == 0;
  }
};

inline constexpr std::size_t kMaxExhaustiveItems = 20;

// Exhaustive check of f(empty) = 0, monotonicity and submodularity over all
// subsets of the ground set. Submodularity is checked in its local form
// f(X+a) + f(X+b) >= f(X+a+b) + f(X) for a, b not in X, which is equivalent
// to the general form; each violation is reported as the triple
// (X, X+b, a).
inline CheckReport check_monotone_submodular(const DiversityFunction& f,
                                             double tolerance = 1e-12,
                                             std::size_t max_reported = 16) {
  const std::size_t n = f.item_count();
  if (n > kMaxExhaustiveItems) {
    throw SizeError("exhaustive check refused: " + std::to_string(n) +
                    " items exceeds the limit of " +
                    std::to_string(kMaxExhaustiveItems));
  }
  const std::uint32_t full = (std::uint32_t{1} << n);
  auto members = [n](std::uint32_t mask) {
    std::vector<ItemIndex> out;
    for (ItemIndex e = 0; e < n; ++e) {
      if (mask & (std::uint32_t{1} << e)) out.push_back(e);
    }
    return out;
  };

  std::vector<double> values(full);
  for (std::uint32_t mask = 0; mask < full; ++mask) {
    values[mask] = f.value(members(mask));
  }

  CheckReport report;
  report.empty_value = values[0];
  report.empty_is_zero = values[0] == 0.0;
  const double tol = tolerance * std::max(1.0, std::abs(values[full - 1]));

  for (std::uint32_t mask = 0; mask < full; ++mask) {
    for (ItemIndex a = 0; a < n; ++a) {
      const std::uint32_t bit_a = std::uint32_t{1} << a;
      if (mask & bit_a) continue;
      const double gain_a = values[mask | bit_a] - values[mask];
      if (gain_a < -tol) {
        ++report.monotonicity_count;
        if (report.monotonicity.size() < max_reported) {
          report.monotonicity.push_back({members(mask), a, -gain_a});
        }
      }
      for (ItemIndex b = 0; b < n; ++b) {
        const std::uint32_t bit_b = std::uint32_t{1} << b;
        if (b == a || (mask & bit_b)) continue;
        const double gain_a_later =
            values[mask | bit_a | bit_b] - values[mask | bit_b];
        if (gain_a_later - gain_a > tol) {
          ++report.submodularity_count;
          if (report.submodularity.size() < max_reported) {
            report.submodularity.push_back({members(mask),
                                            members(mask | bit_b), a,
                                            gain_a_later - gain_a});
          }
        }
      }
    }
  }
  return report;
}

}  // namespace dum

#endif  // DUM_DIVERSITY_HPP_
