#pragma once

// Disjoint, covering partitions of feature indices ("views") and their
// enumeration by restricted growth strings.

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mvfc/error.hpp"

namespace mvfc {

/// Views sorted by smallest member, members ascending.
class ViewPartition {
 public:
  ViewPartition() = default;

  /// Validates that `views` is a disjoint cover of {0, ..., n_features-1}
  /// with nonempty parts, then canonicalises.
  ViewPartition(std::vector<std::vector<std::size_t>> views, std::size_t n_features) : views_(std::move(views)) {
    std::vector<bool> seen(n_features, false);
    std::size_t covered = 0;
    for (auto& view : views_) {
      if (view.empty()) throw ConfigError("partition contains an empty view");
      for (std::size_t idx : view) {
        if (idx >= n_features)
          throw ConfigError("view member " + std::to_string(idx) + " out of range for " +
                            std::to_string(n_features) + " features");
        if (seen[idx]) throw ConfigError("feature " + std::to_string(idx) + " appears in two views");
        seen[idx] = true;
        ++covered;
      }
      std::sort(view.begin(), view.end());
    }
    if (covered != n_features)
      throw ConfigError("partition covers " + std::to_string(covered) + " of " + std::to_string(n_features) +
                        " features");
    std::sort(views_.begin(), views_.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
    n_features_ = n_features;
  }

  /// From a per-feature community id (any integers).
  static ViewPartition from_assignment(std::span<const std::size_t> assignment) {
    std::vector<std::vector<std::size_t>> views;
    std::vector<std::size_t> ids;
    for (std::size_t node = 0; node < assignment.size(); ++node) {
      auto it = std::find(ids.begin(), ids.end(), assignment[node]);
      if (it == ids.end()) {
        ids.push_back(assignment[node]);
        views.push_back({node});
      } else {
        views[static_cast<std::size_t>(it - ids.begin())].push_back(node);
      }
    }
    return ViewPartition(std::move(views), assignment.size());
  }

  static ViewPartition single_view(std::size_t n_features) {
    std::vector<std::size_t> all(n_features);
    for (std::size_t i = 0; i < n_features; ++i) all[i] = i;
    return ViewPartition({std::move(all)}, n_features);
  }

  static ViewPartition singletons(std::size_t n_features) {
    std::vector<std::vector<std::size_t>> views(n_features);
    for (std::size_t i = 0; i < n_features; ++i) views[i] = {i};
    return ViewPartition(std::move(views), n_features);
  }

  const std::vector<std::vector<std::size_t>>& views() const noexcept { return views_; }
  std::size_t size() const noexcept { return views_.size(); }
  std::size_t n_features() const noexcept { return n_features_; }

  /// Community index of every feature (views numbered in canonical order).
  std::vector<std::size_t> assignment() const {
    std::vector<std::size_t> out(n_features_);
    for (std::size_t v = 0; v < views_.size(); ++v)
      for (std::size_t idx : views_[v]) out[idx] = v;
    return out;
  }

  std::string to_string() const {
    std::string s = "{";
    for (std::size_t v = 0; v < views_.size(); ++v) {
      if (v) s += ", ";
      s += "{";
      for (std::size_t m = 0; m < views_[v].size(); ++m) {
        if (m) s += ",";
        s += std::to_string(views_[v][m]);
      }
      s += "}";
    }
    return s + "}";
  }

  bool operator==(const ViewPartition&) const = default;

 private:
  std::vector<std::vector<std::size_t>> views_;
  std::size_t n_features_ = 0;
};

inline constexpr std::size_t kMaxExhaustiveFeatures = 12;

/// Bell number B(n) via the recurrence B(n+1) = sum_k C(n,k) B(k).
inline std::uint64_t bell_number(std::size_t n) {
  std::vector<std::uint64_t> bell{1};
  std::vector<std::uint64_t> binom{1};  // row m of Pascal's triangle
  for (std::size_t m = 0; m < n; ++m) {
    std::uint64_t next = 0;
    for (std::size_t k = 0; k <= m; ++k) next += binom[k] * bell[k];
    bell.push_back(next);
    std::vector<std::uint64_t> row(m + 2, 1);
    for (std::size_t k = 1; k <= m; ++k) row[k] = binom[k - 1] + binom[k];
    binom = std::move(row);
  }
  return bell[n];
}

/// Visits every set partition of {0..f-1} once, as restricted growth strings
/// in lexicographic order: a[0] = 0 and a[i] <= 1 + max(a[0..i-1]). The first
/// partition is the single view, the last is all singletons. This order is
/// the canonical order used for tie-breaking.
class PartitionEnumerator {
 public:
  explicit PartitionEnumerator(std::size_t f) : rgs_(f, 0), prefix_max_(f, 0) {
    if (f == 0) throw ConfigError("cannot enumerate partitions of zero features");
    if (f > kMaxExhaustiveFeatures)
      throw ConfigError("exhaustive enumeration over " + std::to_string(f) + " features would visit Bell(" +
                        std::to_string(f) + ") = " + std::to_string(bell_number(f)) +
                        " partitions; limit is " + std::to_string(kMaxExhaustiveFeatures) + " features");
  }

  /// Current restricted growth string.
  std::span<const std::size_t> current() const noexcept { return rgs_; }

  ViewPartition partition() const { return ViewPartition::from_assignment(rgs_); }

  /// Advances; false once past the last partition.
  bool next() {
    for (std::size_t i = rgs_.size(); i-- > 1;) {
      if (rgs_[i] <= prefix_max_[i - 1]) {
        ++rgs_[i];
        prefix_max_[i] = std::max(prefix_max_[i - 1], rgs_[i]);
        for (std::size_t k = i + 1; k < rgs_.size(); ++k) {
          rgs_[k] = 0;
          prefix_max_[k] = prefix_max_[i];
        }
        return true;
      }
    }
    return false;
  }

 private:
  std::vector<std::size_t> rgs_;
  std::vector<std::size_t> prefix_max_;  // max(rgs_[0..i])
};

/// All partitions of {0..f-1} in canonical order.
inline std::vector<ViewPartition> enumerate_partitions(std::size_t f) {
  PartitionEnumerator it(f);
  std::vector<ViewPartition> out;
  do out.push_back(it.partition());
  while (it.next());
  return out;
}

/// Calls visit(rgs) for every partition in canonical order without
/// materialising them.
template <typename Visit>
void for_each_partition(std::size_t f, Visit&& visit) {
  PartitionEnumerator it(f);
  do visit(it.current());
  while (it.next());
}

}  // namespace mvfc
