#pragma once

// Pairwise feature collaboration: how much a classifier on both features
// beats the better of the two single-feature classifiers.
//
//   colab(i, j) = min(e_i, e_j) - e_ij,   e_ij clamped to min(e_i, e_j)
//
// Each error is a stratified k-fold CV misclassification rate; the three
// fits for a pair share one fold assignment seeded by pair_seed.

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "mvfc/dataset.hpp"
#include "mvfc/linear_model.hpp"
#include "mvfc/matrix.hpp"
#include "mvfc/parallel.hpp"
#include "mvfc/random.hpp"

namespace mvfc {

struct PairErrors {
  double e1 = 0.0;
  double e2 = 0.0;
  double e12_raw = 0.0;
  double e12 = 0.0;  // min(e12_raw, min(e1, e2))
};

struct CollabConfig {
  std::size_t k_folds = 5;
  double edge_threshold = 0.01;
  TrainConfig base;
  std::uint64_t seed = 0;

  void validate() const {
    if (k_folds < 2) throw ConfigError("k_folds must be at least 2");
    if (!(edge_threshold >= 0.0 && edge_threshold < 1.0))
      throw ConfigError("edge threshold must lie in [0, 1)");
    base.validate();
  }
};

struct CollabMatrix {
  Matrix values;
  std::string config_fingerprint;
};

/// Hex digest identifying a dataset's contents (samples, labels, names).
inline std::string dataset_fingerprint(const Dataset& ds) {
  std::uint64_t h = fnv1a64("mvfc.dataset");
  for (double v : ds.samples().data())
    h = fnv1a64(std::string_view(reinterpret_cast<const char*>(&v), sizeof v), h);
  for (int y : ds.labels()) h = fnv1a64(y ? "1" : "0", h);
  for (const auto& name : ds.feature_names()) h = fnv1a64(name + '\x1f', h);
  std::ostringstream out;
  out << std::hex << h;
  return out.str();
}

inline std::string collab_fingerprint(const Dataset& ds, const CollabConfig& cfg) {
  std::ostringstream key;
  key.precision(17);
  key << "collab;folds=" << cfg.k_folds << ";tau=" << cfg.edge_threshold
      << ";loss=" << (cfg.base.loss == Loss::hinge ? "hinge" : "logistic")
      << ";l2=" << cfg.base.l2_lambda << ";epochs=" << cfg.base.epochs
      << ";lr=" << cfg.base.learning_rate << ";seed=" << cfg.seed
      << ";data=" << dataset_fingerprint(ds);
  std::ostringstream out;
  out << std::hex << fnv1a64(key.str());
  return out.str();
}

inline PairErrors pair_errors(const Dataset& ds, std::size_t i, std::size_t j, const CollabConfig& cfg) {
  if (i == j) throw ConfigError("pair_errors needs two distinct features");
  if (i >= ds.n_features() || j >= ds.n_features()) throw ConfigError("feature index out of range");
  if (!ds.has_both_classes()) throw DataError("pair_errors needs both classes present");
  const std::size_t lo = std::min(i, j);
  const std::size_t hi = std::max(i, j);
  const auto folds = stratified_folds(ds.labels(), cfg.k_folds, pair_seed(cfg.seed, lo, hi));

  PairErrors pe;
  pe.e1 = cv_error(project(ds, {i}), cfg.base, folds, cfg.k_folds);
  pe.e2 = cv_error(project(ds, {j}), cfg.base, folds, cfg.k_folds);
  pe.e12_raw = cv_error(project(ds, {lo, hi}), cfg.base, folds, cfg.k_folds);
  pe.e12 = std::min(pe.e12_raw, std::min(pe.e1, pe.e2));
  return pe;
}

inline double collab_value(const PairErrors& pe) noexcept { return std::min(pe.e1, pe.e2) - pe.e12; }

/// Upper triangle computed pair by pair (in parallel), mirrored below the
/// diagonal. The diagonal stays zero.
inline CollabMatrix collab_matrix(const Dataset& ds, const CollabConfig& cfg, std::size_t threads = 1,
                                  std::vector<PairErrors>* pair_log = nullptr) {
  cfg.validate();
  const std::size_t f = ds.n_features();
  if (f < 2) throw DataError("collaboration matrix needs at least 2 features");
  if (!ds.has_both_classes()) throw DataError("collaboration matrix needs both classes present");

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < f; ++i)
    for (std::size_t j = i + 1; j < f; ++j) pairs.emplace_back(i, j);

  std::vector<PairErrors> results(pairs.size());
  parallel_for(pairs.size(), threads, [&](std::size_t p) {
    results[p] = pair_errors(ds, pairs[p].first, pairs[p].second, cfg);
  });

  CollabMatrix out{Matrix(f, f, 0.0), collab_fingerprint(ds, cfg)};
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto [i, j] = pairs[p];
    const double v = collab_value(results[p]);
    out.values(i, j) = v;
    out.values(j, i) = v;
  }
  if (pair_log) *pair_log = std::move(results);
  return out;
}

}  // namespace mvfc
