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

// Domain types shared by the diversity functions, rankers, metrics and the
// offline evaluation harness. Items and topics are dense indices; string
// identifiers only exist at the ingestion boundary.

#ifndef DUM_CORE_HPP_
#define DUM_CORE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace dum {

using ItemIndex = std::size_t;
using TopicIndex = std::size_t;

class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised by exhaustive routines (brute force, subset enumeration) when the
// instance is too large to enumerate.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

class TopicCatalog {
 public:
  TopicCatalog() = default;

  explicit TopicCatalog(std::vector<std::string> topics)
      : topics_(std::move(topics)) {
    for (std::size_t t = 0; t < topics_.size(); ++t) {
      if (topics_[t].empty()) {
        throw InvalidInput("topic identifier " + std::to_string(t) +
                           " is empty");
      }
      if (!index_.emplace(topics_[t], t).second) {
        throw InvalidInput("duplicate topic identifier '" + topics_[t] + "'");
      }
    }
  }

  std::size_t size() const { return topics_.size(); }
  const std::string& name(TopicIndex t) const { return topics_.at(t); }
  const std::vector<std::string>& names() const { return topics_; }

  std::optional<TopicIndex> find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::vector<std::string> topics_;
  std::unordered_map<std::string, TopicIndex> index_;
};

struct Item {
  std::string id;
  std::vector<TopicIndex> topics;
  std::string name;
};

// The recommendable items E with their topic incidence. Incidence lists are
// stored sorted and deduplicated.
class GroundSet {
 public:
  GroundSet() = default;

  GroundSet(const TopicCatalog& catalog, std::vector<Item> items)
      : topic_count_(catalog.size()), items_(std::move(items)) {
    for (std::size_t e = 0; e < items_.size(); ++e) {
      Item& item = items_[e];
      if (!index_.emplace(item.id, e).second) {
        throw InvalidInput("duplicate item identifier '" + item.id + "'");
      }
      std::sort(item.topics.begin(), item.topics.end());
      item.topics.erase(std::unique(item.topics.begin(), item.topics.end()),
                        item.topics.end());
      if (!item.topics.empty() && item.topics.back() >= topic_count_) {
        throw InvalidInput("item '" + item.id + "' references topic " +
                           std::to_string(item.topics.back()) +
                           " outside a catalog of " +
                           std::to_string(topic_count_));
      }
    }
  }

  std::size_t size() const { return items_.size(); }
  std::size_t topic_count() const { return topic_count_; }
  const Item& item(ItemIndex e) const { return items_.at(e); }
  const std::string& id(ItemIndex e) const { return items_.at(e).id; }
  std::span<const TopicIndex> topics(ItemIndex e) const {
    return items_.at(e).topics;
  }

  std::optional<ItemIndex> find(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  // Restriction to `members`, in the given order. Topic indices are kept.
  GroundSet subset(std::span<const ItemIndex> members) const {
    GroundSet out;
    out.topic_count_ = topic_count_;
    out.items_.reserve(members.size());
    for (ItemIndex e : members) {
      out.index_.emplace(items_.at(e).id, out.items_.size());
      out.items_.push_back(items_[e]);
    }
    return out;
  }

 private:
  std::size_t topic_count_ = 0;
  std::vector<Item> items_;
  std::unordered_map<std::string, ItemIndex> index_;
};

// Non-negative per-item utilities aligned with a GroundSet.
class UtilityVector {
 public:
  UtilityVector() = default;

  explicit UtilityVector(std::vector<double> values)
      : values_(std::move(values)) {
    for (std::size_t e = 0; e < values_.size(); ++e) {
      if (!std::isfinite(values_[e]) || values_[e] < 0.0) {
        throw InvalidInput("utility of item " + std::to_string(e) +
                           " must be finite and non-negative");
      }
    }
  }

  std::size_t size() const { return values_.size(); }
  double operator[](ItemIndex e) const { return values_[e]; }
  std::span<const double> values() const { return values_; }

  double max() const {
    return values_.empty() ? 0.0
                           : *std::max_element(values_.begin(), values_.end());
  }

 private:
  std::vector<double> values_;
};

// Scales utilities so the maximum is 1. An all-zero vector passes through.
inline UtilityVector normalize_utilities(const UtilityVector& u) {
  const double top = u.max();
  if (top == 0.0) return u;
  std::vector<double> out(u.values().begin(), u.values().end());
  for (double& v : out) v /= top;
  return UtilityVector(std::move(out));
}

// An ordered list of distinct items with the diversity gain each item
// contributed at its position, and the value sum_k gains[k] * w(ordering[k]).
class RankedList {
 public:
  RankedList() = default;

  RankedList(std::vector<ItemIndex> ordering, std::vector<double> gains,
             const UtilityVector& utilities)
      : ordering_(std::move(ordering)), gains_(std::move(gains)) {
    if (ordering_.size() != gains_.size()) {
      throw InvalidInput("ordering and gains differ in length");
    }
    std::vector<bool> seen(utilities.size(), false);
    for (std::size_t k = 0; k < ordering_.size(); ++k) {
      const ItemIndex e = ordering_[k];
      if (e >= utilities.size()) {
        throw InvalidInput("ranked item " + std::to_string(e) +
                           " has no utility");
      }
      if (seen[e]) {
        throw InvalidInput("item " + std::to_string(e) +
                           " appears twice in a ranked list");
      }
      seen[e] = true;
      if (!(gains_[k] >= 0.0)) {
        throw InvalidInput("negative diversity gain at position " +
                           std::to_string(k));
      }
      objective_ += gains_[k] * utilities[e];
    }
  }

  const std::vector<ItemIndex>& ordering() const { return ordering_; }
  const std::vector<double>& gains() const { return gains_; }
  double objective() const { return objective_; }
  std::size_t size() const { return ordering_.size(); }
  bool empty() const { return ordering_.empty(); }

 private:
  std::vector<ItemIndex> ordering_;
  std::vector<double> gains_;
  double objective_ = 0.0;
};

// Per-topic preference weights r_t, per-topic quotas N_t and list length K.
class UserProfile {
 public:
  UserProfile() = default;

  UserProfile(std::vector<double> weights, std::vector<std::size_t> quotas,
              std::size_t list_length)
      : weights_(std::move(weights)),
        quotas_(std::move(quotas)),
        list_length_(list_length) {
    if (weights_.size() != quotas_.size()) {
      throw InvalidInput("profile weights and quotas differ in length");
    }
    double total = 0.0;
    for (double w : weights_) {
      if (!std::isfinite(w) || w < 0.0) {
        throw InvalidInput("profile weights must be finite and non-negative");
      }
      total += w;
    }
    if (total != 0.0 && std::abs(total - 1.0) > 1e-9) {
      throw InvalidInput("profile weights sum to " + std::to_string(total) +
                         ", expected 1");
    }
    const std::size_t quota_sum =
        std::accumulate(quotas_.begin(), quotas_.end(), std::size_t{0});
    if (quota_sum > list_length_ * quotas_.size()) {
      throw InvalidInput("quotas exceed K times the number of topics");
    }
  }

  // Quotas only; weights are left all-zero.
  static UserProfile from_quotas(std::vector<std::size_t> quotas,
                                 std::size_t list_length) {
    std::vector<double> weights(quotas.size(), 0.0);
    return UserProfile(std::move(weights), std::move(quotas), list_length);
  }

  const std::vector<double>& weights() const { return weights_; }
  const std::vector<std::size_t>& quotas() const { return quotas_; }
  std::size_t list_length() const { return list_length_; }
  std::size_t topic_count() const { return quotas_.size(); }

 private:
  std::vector<double> weights_;
  std::vector<std::size_t> quotas_;
  std::size_t list_length_ = 0;
};

}  // namespace dum

#endif  // DUM_CORE_HPP_
