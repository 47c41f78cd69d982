#pragma once

// Multi-view ensemble: one linear base classifier per view, fused by
// AdaBoost-style weighted voting.
//
// boosted_pool: each round retrains every view under the current sample
//   weights and keeps the view with the smallest weighted error.
// static_fusion: each view is trained once on uniform weights and votes with
//   alpha derived from its training error.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "mvfc/dataset.hpp"
#include "mvfc/linear_model.hpp"
#include "mvfc/parallel.hpp"
#include "mvfc/partition.hpp"

namespace mvfc {

enum class FusionMode { boosted_pool, static_fusion };

inline std::string to_string(FusionMode m) {
  return m == FusionMode::boosted_pool ? "boosted_pool" : "static_fusion";
}

inline FusionMode parse_fusion_mode(std::string_view name) {
  if (name == "boosted_pool") return FusionMode::boosted_pool;
  if (name == "static_fusion") return FusionMode::static_fusion;
  throw ConfigError("unknown fusion mode '" + std::string(name) + "'");
}

struct BoostConfig {
  std::size_t rounds = 10;
  double epsilon_cap = 1e-6;
  FusionMode mode = FusionMode::boosted_pool;
  TrainConfig base;
  std::uint64_t seed = 0;

  void validate() const {
    if (rounds < 1) throw ConfigError("boosting needs at least one round");
    if (!(epsilon_cap > 0.0 && epsilon_cap < 0.5)) throw ConfigError("epsilon_cap must lie in (0, 0.5)");
    base.validate();
  }
};

struct BoostRound {
  std::vector<std::size_t> view;
  LinearModel model;
  double error = 0.0;  // weighted training error, before clamping
  double alpha = 0.0;
};

struct EnsembleModel {
  std::vector<BoostRound> rounds;
  FusionMode mode = FusionMode::boosted_pool;
  ViewPartition partition;
};

/// Per-round diagnostics from boosted training: the weight distribution
/// after each reweighting step.
struct BoostTrace {
  std::vector<double> weight_sums;
  std::vector<double> min_weights;
};

namespace detail {

inline double round_alpha(double error, double cap) {
  const double eps = std::clamp(error, cap, 1.0 - cap);
  return 0.5 * std::log((1.0 - eps) / eps);
}

// Hard predictions of `model` on the columns `view` of `ds`, no copy.
inline std::vector<int> predict_view(const LinearModel& model, const Dataset& ds,
                                     std::span<const std::size_t> view) {
  std::vector<int> out(ds.n_samples());
  std::vector<double> x(view.size());
  for (std::size_t r = 0; r < ds.n_samples(); ++r) {
    const auto row = ds.samples().row(r);
    for (std::size_t c = 0; c < view.size(); ++c) x[c] = row[view[c]];
    out[r] = model.predict_one(x);
  }
  return out;
}

inline void check_partition(const Dataset& ds, const ViewPartition& p) {
  if (p.size() == 0) throw ConfigError("partition has no views");
  if (p.n_features() != ds.n_features())
    throw ConfigError("partition covers " + std::to_string(p.n_features()) + " features, dataset has " +
                      std::to_string(ds.n_features()));
}

inline EnsembleModel train_static(const Dataset& train, const ViewPartition& partition, const BoostConfig& cfg,
                                  std::size_t threads) {
  const auto& views = partition.views();
  std::vector<BoostRound> rounds(views.size());
  const auto uniform = SampleWeights::uniform(train.n_samples());
  parallel_for(views.size(), threads, [&](std::size_t v) {
    const Dataset view_ds = project(train, views[v]);
    rounds[v].view = views[v];
    rounds[v].model = mvfc::train(view_ds, uniform, cfg.base);
    rounds[v].error = weighted_error(rounds[v].model, view_ds, uniform);
    rounds[v].alpha = round_alpha(rounds[v].error, cfg.epsilon_cap);
  });
  return EnsembleModel{std::move(rounds), FusionMode::static_fusion, partition};
}

}  // namespace detail

inline EnsembleModel train_ensemble(const Dataset& train, const ViewPartition& partition, const BoostConfig& cfg,
                                    std::size_t threads = 1, BoostTrace* trace = nullptr) {
  cfg.validate();
  detail::check_partition(train, partition);
  if (!train.has_both_classes()) throw DataError("ensemble training needs both classes present");
  if (cfg.mode == FusionMode::static_fusion) return detail::train_static(train, partition, cfg, threads);

  const auto& views = partition.views();
  const std::size_t n = train.n_samples();
  std::vector<Dataset> view_data;
  view_data.reserve(views.size());
  for (const auto& view : views) view_data.push_back(project(train, view));

  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  EnsembleModel model{{}, FusionMode::boosted_pool, partition};
  std::vector<LinearModel> candidates(views.size());
  std::vector<double> errors(views.size());

  for (std::size_t t = 0; t < cfg.rounds; ++t) {
    const SampleWeights weights(w);
    parallel_for(views.size(), threads, [&](std::size_t v) {
      candidates[v] = mvfc::train(view_data[v], weights, cfg.base);
      errors[v] = weighted_error(candidates[v], view_data[v], weights);
    });
    std::size_t best = 0;
    for (std::size_t v = 1; v < views.size(); ++v)
      if (errors[v] < errors[best]) best = v;
    if (errors[best] >= 0.5) break;

    const double alpha = detail::round_alpha(errors[best], cfg.epsilon_cap);
    const auto pred = predict(candidates[best], view_data[best]);
    model.rounds.push_back({views[best], candidates[best], errors[best], alpha});
    if (errors[best] <= cfg.epsilon_cap) break;

    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double agree = (2.0 * train.labels()[i] - 1.0) * (2.0 * pred[i] - 1.0);
      w[i] *= std::exp(-alpha * agree);
      total += w[i];
    }
    for (double& wi : w) wi /= total;
    if (trace) {
      double sum = 0.0;
      for (double wi : w) sum += wi;
      trace->weight_sums.push_back(sum);
      trace->min_weights.push_back(*std::min_element(w.begin(), w.end()));
    }
  }
  if (model.rounds.empty()) return detail::train_static(train, partition, cfg, threads);
  return model;
}

/// Signed vote sum_t alpha_t (2 h_t(x) - 1) per sample.
inline std::vector<double> ensemble_scores(const EnsembleModel& m, const Dataset& ds) {
  if (m.rounds.empty()) throw ConfigError("ensemble has no rounds");
  std::vector<double> score(ds.n_samples(), 0.0);
  for (const auto& round : m.rounds) {
    for (std::size_t idx : round.view)
      if (idx >= ds.n_features())
        throw DataError("ensemble uses feature " + std::to_string(idx) + " but dataset has " +
                        std::to_string(ds.n_features()) + " features");
    const auto pred = detail::predict_view(round.model, ds, round.view);
    for (std::size_t i = 0; i < pred.size(); ++i) score[i] += round.alpha * (2.0 * pred[i] - 1.0);
  }
  return score;
}

/// 1 iff the weighted vote is >= 0.
inline std::vector<int> predict_ensemble(const EnsembleModel& m, const Dataset& ds) {
  const auto score = ensemble_scores(m, ds);
  std::vector<int> out(score.size());
  for (std::size_t i = 0; i < score.size(); ++i) out[i] = score[i] >= 0.0 ? 1 : 0;
  return out;
}

/// Training-error bound prod_t 2 sqrt(eps_t (1 - eps_t)), eps_t clamped as
/// for alpha.
inline double adaboost_error_bound(const EnsembleModel& m, double epsilon_cap) {
  double bound = 1.0;
  for (const auto& r : m.rounds) {
    const double eps = std::clamp(r.error, epsilon_cap, 1.0 - epsilon_cap);
    bound *= 2.0 * std::sqrt(eps * (1.0 - eps));
  }
  return bound;
}

struct ConfusionCounts {
  std::size_t true_positive = 0;
  std::size_t true_negative = 0;
  std::size_t false_positive = 0;
  std::size_t false_negative = 0;

  bool operator==(const ConfusionCounts&) const = default;
};

struct RoundSummary {
  std::vector<std::size_t> view;
  double error = 0.0;
  double alpha = 0.0;

  bool operator==(const RoundSummary&) const = default;
};

struct EvalReport {
  double accuracy = 0.0;
  std::size_t n_samples = 0;
  ConfusionCounts confusion;
  std::vector<RoundSummary> per_round;
  FusionMode mode = FusionMode::boosted_pool;

  bool operator==(const EvalReport&) const = default;
};

inline EvalReport evaluate(const EnsembleModel& m, const Dataset& test) {
  const auto pred = predict_ensemble(m, test);
  EvalReport report;
  report.n_samples = test.n_samples();
  report.mode = m.mode;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const int y = test.labels()[i];
    if (pred[i] == y) ++correct;
    if (pred[i] == 1 && y == 1) ++report.confusion.true_positive;
    if (pred[i] == 0 && y == 0) ++report.confusion.true_negative;
    if (pred[i] == 1 && y == 0) ++report.confusion.false_positive;
    if (pred[i] == 0 && y == 1) ++report.confusion.false_negative;
  }
  report.accuracy = static_cast<double>(correct) / static_cast<double>(pred.size());
  for (const auto& r : m.rounds) report.per_round.push_back({r.view, r.error, r.alpha});
  return report;
}

}  // namespace mvfc
