#pragma once

// Binary-classification datasets: construction, synthetic generation,
// train/test splitting and column projection.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mvfc/error.hpp"
#include "mvfc/matrix.hpp"
#include "mvfc/random.hpp"

namespace mvfc {

/// Generator provenance: which columns carry signal.
struct DatasetMeta {
  std::uint64_t seed = 0;
  std::vector<std::size_t> informative;
  std::vector<std::size_t> redundant;
  std::vector<std::size_t> noise;
  std::vector<std::vector<std::size_t>> blocks;  // planted views, when known

  bool operator==(const DatasetMeta&) const = default;
};

/// n x f real samples with {0,1} labels and unique feature names.
class Dataset {
 public:
  Dataset(Matrix samples, std::vector<int> labels, std::vector<std::string> feature_names,
          std::optional<DatasetMeta> meta = std::nullopt)
      : samples_(std::move(samples)),
        labels_(std::move(labels)),
        names_(std::move(feature_names)),
        meta_(std::move(meta)) {
    if (samples_.rows() < 2) throw DataError("dataset needs at least 2 samples");
    if (samples_.cols() < 1) throw DataError("dataset needs at least 1 feature");
    if (labels_.size() != samples_.rows())
      throw DataError("label count " + std::to_string(labels_.size()) +
                      " does not match sample count " + std::to_string(samples_.rows()));
    if (names_.size() != samples_.cols())
      throw DataError("feature name count does not match feature count");
    for (std::size_t r = 0; r < labels_.size(); ++r)
      if (labels_[r] != 0 && labels_[r] != 1)
        throw DataError("label at row " + std::to_string(r) + " is " +
                        std::to_string(labels_[r]) + ", expected 0 or 1");
    std::set<std::string_view> seen;
    for (const auto& name : names_)
      if (!seen.insert(name).second) throw DataError("duplicate feature name '" + name + "'");
  }

  std::size_t n_samples() const noexcept { return samples_.rows(); }
  std::size_t n_features() const noexcept { return samples_.cols(); }
  const Matrix& samples() const noexcept { return samples_; }
  std::span<const int> labels() const noexcept { return labels_; }
  const std::vector<std::string>& feature_names() const noexcept { return names_; }
  const std::optional<DatasetMeta>& meta() const noexcept { return meta_; }

  std::size_t count_class(int label) const {
    return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), label));
  }
  bool has_both_classes() const { return count_class(0) > 0 && count_class(1) > 0; }

  bool operator==(const Dataset&) const = default;

 private:
  Matrix samples_;
  std::vector<int> labels_;
  std::vector<std::string> names_;
  std::optional<DatasetMeta> meta_;
};

/// Default feature names x1..xf.
inline std::vector<std::string> default_feature_names(std::size_t f) {
  std::vector<std::string> names(f);
  for (std::size_t j = 0; j < f; ++j) names[j] = "x" + std::to_string(j + 1);
  return names;
}

/// Dataset restricted to `feature_indices`, in the given order.
inline Dataset project(const Dataset& ds, std::span<const std::size_t> feature_indices) {
  const std::size_t f = ds.n_features();
  std::vector<bool> used(f, false);
  for (std::size_t idx : feature_indices) {
    if (idx >= f)
      throw ConfigError("feature index " + std::to_string(idx) + " out of range for " +
                        std::to_string(f) + " features");
    if (used[idx]) throw ConfigError("duplicate feature index " + std::to_string(idx));
    used[idx] = true;
  }
  if (feature_indices.empty()) throw ConfigError("projection needs at least one feature");

  const std::size_t n = ds.n_samples();
  const std::size_t d = feature_indices.size();
  Matrix out(n, d);
  for (std::size_t r = 0; r < n; ++r) {
    const auto src = ds.samples().row(r);
    auto dst = out.row(r);
    for (std::size_t c = 0; c < d; ++c) dst[c] = src[feature_indices[c]];
  }
  std::vector<std::string> names;
  names.reserve(d);
  for (std::size_t idx : feature_indices) names.push_back(ds.feature_names()[idx]);
  return Dataset(std::move(out), std::vector<int>(ds.labels().begin(), ds.labels().end()),
                 std::move(names));
}

inline Dataset project(const Dataset& ds, std::initializer_list<std::size_t> feature_indices) {
  return project(ds, std::span<const std::size_t>(feature_indices.begin(), feature_indices.size()));
}

/// Rows of `ds` in the order given by `rows`. Feature names and meta are kept.
inline Dataset select_rows(const Dataset& ds, std::span<const std::size_t> rows) {
  Matrix out(rows.size(), ds.n_features());
  std::vector<int> labels(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto src = ds.samples().row(rows[r]);
    std::copy(src.begin(), src.end(), out.row(r).begin());
    labels[r] = ds.labels()[rows[r]];
  }
  return Dataset(std::move(out), std::move(labels), ds.feature_names(), ds.meta());
}

// ---------------------------------------------------------------------------
// Synthetic data

struct SyntheticSpec {
  std::size_t n_samples = 1000;
  std::size_t n_features = 20;
  std::size_t n_informative = 2;
  std::size_t n_redundant = 2;
  double class_sep = 1.0;
  double flip_y = 0.01;
  std::uint64_t seed = 0;

  void validate() const {
    if (n_samples < 2) throw ConfigError("n_samples must be at least 2");
    if (n_features < 1) throw ConfigError("n_features must be at least 1");
    if (n_informative < 1) throw ConfigError("n_informative must be at least 1");
    if (n_informative + n_redundant > n_features)
      throw ConfigError("n_informative + n_redundant (" +
                        std::to_string(n_informative + n_redundant) + ") exceeds n_features (" +
                        std::to_string(n_features) + ")");
    if (!(class_sep > 0.0) || !std::isfinite(class_sep))
      throw ConfigError("class_sep must be positive");
    if (!(flip_y >= 0.0 && flip_y < 0.5)) throw ConfigError("flip_y must lie in [0, 0.5)");
  }
};

/// Two Gaussian clusters at opposite vertices of a class_sep-scaled hypercube
/// in the informative subspace, unit-variance noise around each.
///
/// Steps, all driven by one Rng(spec.seed) in this order:
///  1. vertex v in {-1,+1}^k, k = n_informative (one uniform() per coordinate);
///  2. labels: floor(n/2) zeros then ones, Fisher-Yates shuffled;
///  3. informative block: row r = (2y-1) * class_sep * v + N(0, I);
///  4. redundant block: informative block times a k x n_redundant matrix
///     with U(-1, 1) entries;
///  5. remaining columns i.i.d. N(0, 1);
///  6. round(flip_y * n) distinct rows get their label inverted;
///  7. columns are permuted; meta records where each kind ended up.
inline Dataset generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const std::size_t n = spec.n_samples;
  const std::size_t k = spec.n_informative;
  const std::size_t r = spec.n_redundant;
  const std::size_t f = spec.n_features;

  std::vector<double> vertex(k);
  for (auto& v : vertex) v = rng.uniform() < 0.5 ? -1.0 : 1.0;

  std::vector<int> labels(n, 1);
  std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(n / 2), 0);
  rng.shuffle(std::span<int>(labels));

  Matrix raw(n, f);
  for (std::size_t i = 0; i < n; ++i) {
    const double sign = labels[i] == 1 ? 1.0 : -1.0;
    for (std::size_t c = 0; c < k; ++c) raw(i, c) = sign * spec.class_sep * vertex[c] + rng.normal();
  }

  Matrix mix(k, r);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < r; ++b) mix(a, b) = rng.uniform(-1.0, 1.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t b = 0; b < r; ++b) {
      double acc = 0.0;
      for (std::size_t a = 0; a < k; ++a) acc += raw(i, a) * mix(a, b);
      raw(i, k + b) = acc;
    }

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = k + r; c < f; ++c) raw(i, c) = rng.normal();

  const auto n_flip = static_cast<std::size_t>(std::llround(spec.flip_y * static_cast<double>(n)));
  if (n_flip > 0) {
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), 0);
    rng.shuffle(std::span<std::size_t>(rows));
    for (std::size_t t = 0; t < n_flip; ++t) labels[rows[t]] = 1 - labels[rows[t]];
  }

  // position[c] = output column of generated column c
  std::vector<std::size_t> position(f);
  std::iota(position.begin(), position.end(), 0);
  rng.shuffle(std::span<std::size_t>(position));
  Matrix samples(n, f);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < f; ++c) samples(i, position[c]) = raw(i, c);

  DatasetMeta meta;
  meta.seed = spec.seed;
  for (std::size_t c = 0; c < f; ++c) {
    if (c < k)
      meta.informative.push_back(position[c]);
    else if (c < k + r)
      meta.redundant.push_back(position[c]);
    else
      meta.noise.push_back(position[c]);
  }
  std::sort(meta.informative.begin(), meta.informative.end());
  std::sort(meta.redundant.begin(), meta.redundant.end());
  std::sort(meta.noise.begin(), meta.noise.end());

  return Dataset(std::move(samples), std::move(labels), default_feature_names(f), std::move(meta));
}

/// Planted multi-view data: n_blocks groups of block_size consecutive
/// columns. Each block carries its own noisy copy of the label, y_b = y with
/// probability `agreement`, through a jointly-informative pattern: the block
/// is a standard normal vector reflected through the origin when needed so
/// that (sum of block >= 0) == (y_b == 1). Every single column is only weakly
/// informative; the block sum decides y_b exactly.
struct BlockSpec {
  std::size_t n_samples = 1000;
  std::size_t n_blocks = 3;
  std::size_t block_size = 2;
  double agreement = 0.85;
  std::uint64_t seed = 0;

  void validate() const {
    if (n_samples < 2) throw ConfigError("n_samples must be at least 2");
    if (n_blocks < 1 || block_size < 1) throw ConfigError("need at least one block of at least one column");
    if (!(agreement > 0.5 && agreement <= 1.0)) throw ConfigError("agreement must lie in (0.5, 1]");
  }
};

inline Dataset generate_blocks(const BlockSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const std::size_t n = spec.n_samples;
  const std::size_t f = spec.n_blocks * spec.block_size;
  std::vector<int> labels(n, 1);
  std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(n / 2), 0);
  rng.shuffle(std::span<int>(labels));

  Matrix samples(n, f);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t b = 0; b < spec.n_blocks; ++b) {
      const int yb = rng.uniform() < spec.agreement ? labels[i] : 1 - labels[i];
      auto row = samples.row(i).subspan(b * spec.block_size, spec.block_size);
      double sum = 0.0;
      for (double& v : row) sum += (v = rng.normal());
      if ((sum >= 0.0) != (yb == 1))
        for (double& v : row) v = -v;
    }
  }
  DatasetMeta meta;
  meta.seed = spec.seed;
  for (std::size_t c = 0; c < f; ++c) meta.informative.push_back(c);
  for (std::size_t b = 0; b < spec.n_blocks; ++b) {
    std::vector<std::size_t> block(spec.block_size);
    for (std::size_t k = 0; k < spec.block_size; ++k) block[k] = b * spec.block_size + k;
    meta.blocks.push_back(std::move(block));
  }
  return Dataset(std::move(samples), std::move(labels), default_feature_names(f), std::move(meta));
}

// ---------------------------------------------------------------------------
// Train/test split

struct SplitSpec {
  double test_fraction = 0.3;
  bool stratified = true;
  std::uint64_t seed = 0;
};

struct Split {
  Dataset train;
  Dataset test;
  std::vector<std::size_t> train_rows;  // ascending
  std::vector<std::size_t> test_rows;   // ascending
};

/// Row split. The test part has round(n * test_fraction) rows. In stratified
/// mode class c contributes floor(n_c * test_fraction) rows plus one more for
/// the classes with the largest fractional remainders (ties to class 0) until
/// the total is reached. Rows are drawn from a per-class Fisher-Yates shuffle;
/// both parts keep the original row order.
inline Split split(const Dataset& ds, const SplitSpec& spec) {
  if (!(spec.test_fraction > 0.0 && spec.test_fraction < 1.0))
    throw ConfigError("test_fraction must lie in (0, 1)");
  if (!ds.has_both_classes()) throw DataError("split needs both classes present");
  const std::size_t n = ds.n_samples();
  const auto n_test =
      static_cast<std::size_t>(std::llround(static_cast<double>(n) * spec.test_fraction));
  if (n_test < 1 || n_test >= n)
    throw DataError("split of " + std::to_string(n) + " rows at test_fraction " +
                    std::to_string(spec.test_fraction) + " leaves an empty part");

  Rng rng(spec.seed);
  std::vector<std::size_t> test_rows;
  if (spec.stratified) {
    std::array<std::vector<std::size_t>, 2> by_class;
    for (std::size_t i = 0; i < n; ++i) by_class[static_cast<std::size_t>(ds.labels()[i])].push_back(i);
    std::array<std::size_t, 2> take{};
    std::array<double, 2> remainder{};
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < 2; ++c) {
      const double exact = static_cast<double>(by_class[c].size()) * spec.test_fraction;
      take[c] = static_cast<std::size_t>(std::floor(exact));
      remainder[c] = exact - std::floor(exact);
      assigned += take[c];
    }
    while (assigned < n_test) {
      const std::size_t c = remainder[1] > remainder[0] ? 1 : 0;
      ++take[c];
      remainder[c] = -1.0;
      ++assigned;
    }
    for (std::size_t c = 0; c < 2; ++c) {
      if (take[c] < 1 || take[c] >= by_class[c].size())
        throw DataError("stratified split leaves class " + std::to_string(c) +
                        " absent from one part (class has " +
                        std::to_string(by_class[c].size()) + " rows)");
      rng.shuffle(std::span<std::size_t>(by_class[c]));
      test_rows.insert(test_rows.end(), by_class[c].begin(),
                       by_class[c].begin() + static_cast<std::ptrdiff_t>(take[c]));
    }
  } else {
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), 0);
    rng.shuffle(std::span<std::size_t>(rows));
    test_rows.assign(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n_test));
  }
  std::sort(test_rows.begin(), test_rows.end());

  std::vector<std::size_t> train_rows;
  train_rows.reserve(n - test_rows.size());
  for (std::size_t i = 0, t = 0; i < n; ++i) {
    if (t < test_rows.size() && test_rows[t] == i)
      ++t;
    else
      train_rows.push_back(i);
  }
  return Split{select_rows(ds, train_rows), select_rows(ds, test_rows), std::move(train_rows),
               std::move(test_rows)};
}

}  // namespace mvfc
