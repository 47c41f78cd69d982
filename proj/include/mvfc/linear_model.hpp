#pragma once

// Linear-margin base classifier: L2-regularised hinge (or logistic) loss,
// trained by deterministic full-batch subgradient descent on internally
// standardised features, with per-sample weights.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "mvfc/dataset.hpp"
#include "mvfc/error.hpp"
#include "mvfc/random.hpp"

namespace mvfc {

enum class Loss { hinge, logistic };

struct TrainConfig {
  Loss loss = Loss::hinge;
  double l2_lambda = 1e-3;
  int epochs = 200;
  double learning_rate = 0.1;  // step at epoch t is learning_rate / (1 + t)
  std::uint64_t seed = 0;

  void validate() const {
    if (!(l2_lambda >= 0.0)) throw ConfigError("l2_lambda must be nonnegative");
    if (epochs < 1) throw ConfigError("epochs must be positive");
    if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
  }
};

/// Nonnegative per-sample weights summing to 1 (within 1e-9).
class SampleWeights {
 public:
  static SampleWeights uniform(std::size_t n) {
    return SampleWeights(std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }

  /// Scales nonnegative `raw` to sum 1.
  static SampleWeights normalized(std::vector<double> raw) {
    double total = 0.0;
    for (double w : raw) {
      if (!(w >= 0.0) || !std::isfinite(w)) throw DataError("sample weights must be finite and nonnegative");
      total += w;
    }
    if (!(total > 0.0)) throw DataError("sample weights sum to zero");
    for (double& w : raw) w /= total;
    return SampleWeights(std::move(raw));
  }

  explicit SampleWeights(std::vector<double> values) : values_(std::move(values)) {
    double total = 0.0;
    for (double w : values_) {
      if (!(w >= 0.0) || !std::isfinite(w)) throw DataError("sample weights must be finite and nonnegative");
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-9)
      throw DataError("sample weights sum to " + std::to_string(total) + ", expected 1");
  }

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::vector<double> values_;
};

struct LinearModel {
  std::vector<double> weights;  // in standardised coordinates
  double bias = 0.0;
  std::vector<double> mean;
  std::vector<double> scale;

  std::size_t dimension() const noexcept { return weights.size(); }

  /// Signed margin of one sample (raw feature values).
  double decision(std::span<const double> x) const noexcept {
    double acc = bias;
    for (std::size_t c = 0; c < weights.size(); ++c) acc += weights[c] * (x[c] - mean[c]) / scale[c];
    return acc;
  }

  int predict_one(std::span<const double> x) const noexcept { return decision(x) >= 0.0 ? 1 : 0; }

  bool operator==(const LinearModel&) const = default;
};

namespace detail {

inline void check_dimension(const LinearModel& model, const Dataset& ds) {
  if (ds.n_features() != model.dimension())
    throw DataError("model expects " + std::to_string(model.dimension()) + " features, dataset has " +
                    std::to_string(ds.n_features()));
}

}  // namespace detail

/// Weighted empirical risk minimiser. Standardisation uses the weighted mean
/// and weighted standard deviation (scale 1 for a constant column).
inline LinearModel train(const Dataset& ds, const SampleWeights& weights, const TrainConfig& cfg) {
  cfg.validate();
  const std::size_t n = ds.n_samples();
  const std::size_t d = ds.n_features();
  if (weights.size() != n)
    throw DataError("weight count " + std::to_string(weights.size()) + " does not match " +
                    std::to_string(n) + " samples");

  double class_weight[2] = {0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) class_weight[ds.labels()[i]] += weights[i];
  if (!(class_weight[0] > 0.0) || !(class_weight[1] > 0.0))
    throw DataError("training needs nonzero total weight on both classes");

  const Matrix& x = ds.samples();
  for (double v : x.data())
    if (!std::isfinite(v)) throw DataError("non-finite feature value in training data");

  LinearModel model;
  model.mean.assign(d, 0.0);
  model.scale.assign(d, 1.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < d; ++c) model.mean[c] += weights[i] * x(i, c);
  for (std::size_t c = 0; c < d; ++c) {
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double dev = x(i, c) - model.mean[c];
      var += weights[i] * dev * dev;
    }
    const double sd = std::sqrt(var);
    model.scale[c] = sd > 1e-12 * (1.0 + std::abs(model.mean[c])) ? sd : 1.0;
  }

  Matrix z(n, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < d; ++c) z(i, c) = (x(i, c) - model.mean[c]) / model.scale[c];

  std::vector<double> w(d, 0.0);
  std::vector<double> grad(d);
  double b = 0.0;
  for (int t = 0; t < cfg.epochs; ++t) {
    for (std::size_t c = 0; c < d; ++c) grad[c] = cfg.l2_lambda * w[c];
    double grad_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto zi = z.row(i);
      const double y = ds.labels()[i] == 1 ? 1.0 : -1.0;
      double margin = b;
      for (std::size_t c = 0; c < d; ++c) margin += w[c] * zi[c];
      double coef = 0.0;  // d loss / d margin, times -y
      if (cfg.loss == Loss::hinge) {
        if (y * margin < 1.0) coef = weights[i];
      } else {
        coef = weights[i] / (1.0 + std::exp(y * margin));
      }
      if (coef == 0.0) continue;
      for (std::size_t c = 0; c < d; ++c) grad[c] -= coef * y * zi[c];
      grad_b -= coef * y;
    }
    const double step = cfg.learning_rate / (1.0 + static_cast<double>(t));
    for (std::size_t c = 0; c < d; ++c) w[c] -= step * grad[c];
    b -= step * grad_b;
  }
  model.weights = std::move(w);
  model.bias = b;
  return model;
}

inline LinearModel train(const Dataset& ds, const TrainConfig& cfg) {
  return train(ds, SampleWeights::uniform(ds.n_samples()), cfg);
}

/// Hard labels: 1 iff the standardised linear form is >= 0.
inline std::vector<int> predict(const LinearModel& model, const Dataset& ds) {
  detail::check_dimension(model, ds);
  std::vector<int> out(ds.n_samples());
  for (std::size_t i = 0; i < ds.n_samples(); ++i) out[i] = model.predict_one(ds.samples().row(i));
  return out;
}

/// Total weight of misclassified samples.
inline double weighted_error(const LinearModel& model, const Dataset& ds, const SampleWeights& weights) {
  detail::check_dimension(model, ds);
  if (weights.size() != ds.n_samples()) throw DataError("weight count does not match sample count");
  double err = 0.0;
  for (std::size_t i = 0; i < ds.n_samples(); ++i)
    if (model.predict_one(ds.samples().row(i)) != ds.labels()[i]) err += weights[i];
  return std::clamp(err, 0.0, 1.0);
}

inline double accuracy(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size() || truth.empty())
    throw DataError("accuracy needs equal, nonempty label vectors");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) correct += predicted[i] == truth[i] ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(truth.size());
}

// ---------------------------------------------------------------------------
// Cross-validation

/// Stratified fold ids: each class's rows are shuffled by `seed` (class 0
/// first, one Rng for both) and dealt round-robin, the deal continuing from
/// where the previous class stopped.
inline std::vector<std::size_t> stratified_folds(std::span<const int> labels, std::size_t k_folds,
                                                 std::uint64_t seed) {
  if (k_folds < 2) throw ConfigError("k_folds must be at least 2");
  std::array<std::vector<std::size_t>, 2> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[static_cast<std::size_t>(labels[i])].push_back(i);
  const std::size_t smallest = std::min(by_class[0].size(), by_class[1].size());
  if (smallest < k_folds)
    throw DataError("smallest class has " + std::to_string(smallest) + " samples, need at least " +
                    std::to_string(k_folds) + " for stratified " + std::to_string(k_folds) + "-fold CV");
  Rng rng(seed);
  std::vector<std::size_t> fold(labels.size());
  std::size_t deal = 0;
  for (auto& rows : by_class) {
    rng.shuffle(std::span<std::size_t>(rows));
    for (std::size_t r : rows) fold[r] = deal++ % k_folds;
  }
  return fold;
}

/// Mean of per-fold out-of-fold misclassification rates, folds summed in
/// ascending order.
inline double cv_error(const Dataset& ds, const TrainConfig& cfg, std::span<const std::size_t> folds,
                       std::size_t k_folds) {
  if (folds.size() != ds.n_samples()) throw DataError("fold assignment does not match sample count");
  double total = 0.0;
  std::vector<std::size_t> train_rows, test_rows;
  for (std::size_t f = 0; f < k_folds; ++f) {
    train_rows.clear();
    test_rows.clear();
    for (std::size_t i = 0; i < folds.size(); ++i) (folds[i] == f ? test_rows : train_rows).push_back(i);
    if (test_rows.empty()) throw DataError("empty fold " + std::to_string(f));
    const Dataset train_part = select_rows(ds, train_rows);
    if (!train_part.has_both_classes())
      throw DataError("fold " + std::to_string(f) + " training part lacks a class");
    const LinearModel model = train(train_part, cfg);
    std::size_t wrong = 0;
    for (std::size_t r : test_rows)
      wrong += model.predict_one(ds.samples().row(r)) != ds.labels()[r] ? 1 : 0;
    total += static_cast<double>(wrong) / static_cast<double>(test_rows.size());
  }
  return total / static_cast<double>(k_folds);
}

inline double cv_error(const Dataset& ds, const TrainConfig& cfg, std::size_t k_folds, std::uint64_t seed) {
  if (!ds.has_both_classes()) throw DataError("cv_error needs both classes present");
  const auto folds = stratified_folds(ds.labels(), k_folds, seed);
  return cv_error(ds, cfg, folds, k_folds);
}

}  // namespace mvfc
