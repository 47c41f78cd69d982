#pragma once

// Exhaustive view search: every set partition of the features is trained as
// a multi-view ensemble on a sub-split of the training data and scored on the
// held-out validation part. The best partition is retrained on the full
// training set and scored on the test set.

#include <cstdint>
#include <vector>

#include "mvfc/dataset.hpp"
#include "mvfc/ensemble.hpp"
#include "mvfc/linear_model.hpp"
#include "mvfc/parallel.hpp"
#include "mvfc/partition.hpp"

namespace mvfc {

struct ExhaustiveConfig {
  BoostConfig boost;
  double validation_fraction = 0.3;
  std::uint64_t seed = 0;
};

struct ExhaustiveResult {
  ViewPartition best;
  double validation_accuracy = 0.0;
  double test_accuracy = 0.0;
  EnsembleModel model;                     // winner retrained on all of `train`
  std::vector<ViewPartition> candidates;   // canonical order
  std::vector<double> candidate_accuracy;  // validation accuracy per candidate
};

/// Ties in validation accuracy go to the earliest partition in canonical
/// (restricted-growth-string) order.
inline ExhaustiveResult exhaustive_view_search(const Dataset& train, const Dataset& test, const ExhaustiveConfig& cfg,
                                               std::size_t threads = 1) {
  const std::size_t f = train.n_features();
  if (test.n_features() != f) throw DataError("train and test feature counts differ");
  auto candidates = enumerate_partitions(f);
  const Split inner = split(train, SplitSpec{cfg.validation_fraction, true, cfg.seed});

  std::vector<double> acc(candidates.size());
  parallel_for(candidates.size(), threads, [&](std::size_t c) {
    const auto model = train_ensemble(inner.train, candidates[c], cfg.boost);
    acc[c] = accuracy(predict_ensemble(model, inner.test), inner.test.labels());
  });

  std::size_t best = 0;
  for (std::size_t c = 1; c < candidates.size(); ++c)
    if (acc[c] > acc[best]) best = c;

  ExhaustiveResult result;
  result.best = candidates[best];
  result.validation_accuracy = acc[best];
  result.model = train_ensemble(train, result.best, cfg.boost, threads);
  result.test_accuracy = accuracy(predict_ensemble(result.model, test), test.labels());
  result.candidates = std::move(candidates);
  result.candidate_accuracy = std::move(acc);
  return result;
}

}  // namespace mvfc
