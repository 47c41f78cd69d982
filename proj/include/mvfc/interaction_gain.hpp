#pragma once

// Interaction-gain baseline: plug-in three-way mutual information of two
// discretised features and the label, normalised by the features' entropies.
//
//   MI(xi, xj, y) = sum p(xi,xj,y) log2[ p(xi,xj,y) p(xi) p(xj) p(y)
//                                        / (p(xi,xj) p(xi,y) p(xj,y)) ]
//   IG_ij = MI / (H(xi) + H(xj))

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "mvfc/dataset.hpp"
#include "mvfc/error.hpp"
#include "mvfc/matrix.hpp"
#include "mvfc/parallel.hpp"

namespace mvfc {

struct DiscretizationConfig {
  std::size_t n_bins = 8;

  void validate() const {
    if (n_bins < 2) throw ConfigError("n_bins must be at least 2");
  }
};

/// Equal-frequency bin indices. A column with at most n_bins distinct values
/// is used as-is (values mapped to their rank). Otherwise edge b (b = 1 ..
/// n_bins-1) is the largest value of the b-th equal-count chunk of the sorted
/// column, duplicate edges merge, and a value goes to the number of edges it
/// strictly exceeds (ties at an edge go to the lower bin).
inline std::vector<int> discretize(std::span<const double> column, const DiscretizationConfig& cfg = {}) {
  cfg.validate();
  const std::size_t n = column.size();
  if (n == 0) throw DataError("cannot discretise an empty column");
  for (double v : column)
    if (!std::isfinite(v)) throw DataError("non-finite value in column to discretise");

  std::vector<double> sorted(column.begin(), column.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> distinct = sorted;
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  std::vector<double> edges;
  if (distinct.size() <= cfg.n_bins) {
    edges.assign(distinct.begin(), distinct.end() - 1);
  } else {
    for (std::size_t b = 1; b < cfg.n_bins; ++b) edges.push_back(sorted[(b * n) / cfg.n_bins - 1]);
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  }
  std::vector<int> bins(n);
  for (std::size_t i = 0; i < n; ++i)
    bins[i] = static_cast<int>(std::lower_bound(edges.begin(), edges.end(), column[i]) - edges.begin());
  return bins;
}

using Outcome = std::array<int, 3>;  // (xi bin, xj bin, label)

/// Joint law of (xi, xj, y) over its support plus the six lower-order
/// marginals, each obtained by summing the joint.
class DiscreteJointDistribution {
 public:
  using Marginal1 = std::map<int, double>;
  using Marginal2 = std::map<std::pair<int, int>, double>;

  /// Builds from explicit probabilities (must sum to 1 within 1e-12).
  static DiscreteJointDistribution from_probabilities(const std::map<Outcome, double>& joint) {
    DiscreteJointDistribution d;
    double total = 0.0;
    for (const auto& [outcome, p] : joint) {
      if (!(p >= 0.0)) throw DataError("negative probability");
      total += p;
      if (p > 0.0) d.joint_[outcome] = p;
    }
    if (std::abs(total - 1.0) > 1e-12) throw DataError("probabilities do not sum to 1");
    d.build_marginals();
    return d;
  }

  const std::map<Outcome, double>& joint() const noexcept { return joint_; }
  const Marginal1& p_i() const noexcept { return p_i_; }
  const Marginal1& p_j() const noexcept { return p_j_; }
  const Marginal1& p_y() const noexcept { return p_y_; }
  const Marginal2& p_ij() const noexcept { return p_ij_; }
  const Marginal2& p_iy() const noexcept { return p_iy_; }
  const Marginal2& p_jy() const noexcept { return p_jy_; }

 private:
  void build_marginals() {
    for (const auto& [o, p] : joint_) {
      p_i_[o[0]] += p;
      p_j_[o[1]] += p;
      p_y_[o[2]] += p;
      p_ij_[{o[0], o[1]}] += p;
      p_iy_[{o[0], o[2]}] += p;
      p_jy_[{o[1], o[2]}] += p;
    }
  }

  std::map<Outcome, double> joint_;
  Marginal1 p_i_, p_j_, p_y_;
  Marginal2 p_ij_, p_iy_, p_jy_;
};

/// Empirical frequencies of the observed triples.
inline DiscreteJointDistribution joint_distribution(std::span<const int> xi, std::span<const int> xj,
                                                    std::span<const int> labels) {
  if (xi.size() != xj.size() || xi.size() != labels.size())
    throw DataError("joint_distribution needs equal-length inputs");
  if (xi.empty()) throw DataError("joint_distribution needs at least one sample");
  std::map<Outcome, std::size_t> counts;
  for (std::size_t k = 0; k < xi.size(); ++k) ++counts[{xi[k], xj[k], labels[k]}];
  std::map<Outcome, double> probs;
  const double n = static_cast<double>(xi.size());
  for (const auto& [o, c] : counts) probs[o] = static_cast<double>(c) / n;
  return DiscreteJointDistribution::from_probabilities(probs);
}

/// Signed interaction information in bits. Zero-probability terms are 0.
inline double three_way_mi(const DiscreteJointDistribution& d) {
  double mi = 0.0;
  for (const auto& [o, p] : d.joint()) {
    if (p <= 0.0) continue;
    const double num = p * d.p_i().at(o[0]) * d.p_j().at(o[1]) * d.p_y().at(o[2]);
    const double den = d.p_ij().at({o[0], o[1]}) * d.p_iy().at({o[0], o[2]}) * d.p_jy().at({o[1], o[2]});
    mi += p * std::log2(num / den);
  }
  return mi;
}

/// Shannon entropy in bits, 0 log 0 = 0.
template <typename Marginal>
double entropy(const Marginal& marginal) {
  double h = 0.0;
  for (const auto& [value, p] : marginal)
    if (p > 0.0) h -= p * std::log2(p);
  return h;
}

inline double interaction_gain(const DiscreteJointDistribution& d) {
  const double denom = entropy(d.p_i()) + entropy(d.p_j());
  if (denom <= 0.0) return 0.0;
  return three_way_mi(d) / denom;
}

/// Symmetric f x f matrix of signed interaction gains, zero diagonal.
inline Matrix interaction_gain_matrix(const Dataset& ds, const DiscretizationConfig& cfg = {},
                                      std::size_t threads = 1) {
  cfg.validate();
  const std::size_t f = ds.n_features();
  if (f < 2) throw DataError("interaction gain matrix needs at least 2 features");
  std::vector<std::vector<int>> bins(f);
  std::vector<double> column(ds.n_samples());
  for (std::size_t c = 0; c < f; ++c) {
    for (std::size_t r = 0; r < ds.n_samples(); ++r) column[r] = ds.samples()(r, c);
    bins[c] = discretize(column, cfg);
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < f; ++i)
    for (std::size_t j = i + 1; j < f; ++j) pairs.emplace_back(i, j);
  std::vector<double> gains(pairs.size());
  parallel_for(pairs.size(), threads, [&](std::size_t p) {
    const auto [i, j] = pairs[p];
    gains[p] = interaction_gain(joint_distribution(bins[i], bins[j], ds.labels()));
  });
  Matrix out(f, f, 0.0);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    out(pairs[p].first, pairs[p].second) = gains[p];
    out(pairs[p].second, pairs[p].first) = gains[p];
  }
  return out;
}

/// Negative entries set to 0 (graph edge weights must be nonnegative).
inline Matrix floor_negative(Matrix m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = std::max(0.0, m(i, j));
  return m;
}

}  // namespace mvfc
