#pragma once

// Weighted undirected feature graph and community detection over it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "mvfc/error.hpp"
#include "mvfc/matrix.hpp"
#include "mvfc/partition.hpp"
#include "mvfc/random.hpp"

namespace mvfc {

struct Edge {
  std::size_t i = 0;  // i < j
  std::size_t j = 0;
  double weight = 0.0;

  bool operator==(const Edge&) const = default;
};

class FeatureGraph {
 public:
  explicit FeatureGraph(std::size_t n_nodes, std::vector<Edge> edges = {})
      : n_nodes_(n_nodes), edges_(std::move(edges)), adjacency_(n_nodes) {
    std::sort(edges_.begin(), edges_.end(),
              [](const Edge& a, const Edge& b) { return a.i != b.i ? a.i < b.i : a.j < b.j; });
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      const Edge& edge = edges_[e];
      if (edge.i >= edge.j) throw ConfigError("edges must satisfy i < j (no self-loops)");
      if (edge.j >= n_nodes_) throw ConfigError("edge endpoint out of range");
      if (!(edge.weight > 0.0) || !std::isfinite(edge.weight))
        throw ConfigError("edge weights must be finite and strictly positive");
      if (e > 0 && edges_[e - 1].i == edge.i && edges_[e - 1].j == edge.j)
        throw ConfigError("duplicate edge (" + std::to_string(edge.i) + ", " + std::to_string(edge.j) + ")");
      adjacency_[edge.i].push_back({edge.j, edge.weight});
      adjacency_[edge.j].push_back({edge.i, edge.weight});
    }
  }

  struct Neighbor {
    std::size_t node;
    double weight;
  };

  std::size_t n_nodes() const noexcept { return n_nodes_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::span<const Neighbor> neighbors(std::size_t node) const { return adjacency_[node]; }

  double degree(std::size_t node) const {
    double d = 0.0;
    for (const auto& nb : adjacency_[node]) d += nb.weight;
    return d;
  }

  double total_weight() const {
    double m = 0.0;
    for (const auto& e : edges_) m += e.weight;
    return m;
  }

 private:
  std::size_t n_nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
};

/// Edge (i, j, w) for every i < j with matrix(i, j) > tau.
inline FeatureGraph build_graph(const Matrix& matrix, double tau) {
  const std::size_t f = matrix.rows();
  if (matrix.cols() != f) throw DataError("collaboration matrix must be square");
  if (!(tau >= 0.0)) throw ConfigError("edge threshold must be nonnegative");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < f; ++i) {
    if (matrix(i, i) != 0.0) throw DataError("matrix diagonal must be zero");
    for (std::size_t j = i + 1; j < f; ++j) {
      const double a = matrix(i, j);
      const double b = matrix(j, i);
      if (!std::isfinite(a) || !std::isfinite(b) || std::abs(a - b) > 1e-12)
        throw DataError("matrix is not symmetric at (" + std::to_string(i) + ", " + std::to_string(j) + ")");
      if (a < 0.0) throw DataError("matrix has a negative entry at (" + std::to_string(i) + ", " + std::to_string(j) + ")");
      if (a > tau) edges.push_back({i, j, a});
    }
  }
  return FeatureGraph(f, std::move(edges));
}

/// Weighted modularity Q = sum_c (e_c / m - (d_c / 2m)^2), where e_c is the
/// edge weight inside community c, d_c its total degree and m the total edge
/// weight. Q = 0 for an edgeless graph.
inline double modularity(const FeatureGraph& g, std::span<const std::size_t> assignment) {
  const double m = g.total_weight();
  if (m <= 0.0) return 0.0;
  const std::size_t k = assignment.empty() ? 0 : *std::max_element(assignment.begin(), assignment.end()) + 1;
  std::vector<double> inside(k, 0.0), degree(k, 0.0);
  for (const auto& e : g.edges()) {
    degree[assignment[e.i]] += e.weight;
    degree[assignment[e.j]] += e.weight;
    if (assignment[e.i] == assignment[e.j]) inside[assignment[e.i]] += e.weight;
  }
  double q = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    const double frac = degree[c] / (2.0 * m);
    q += inside[c] / m - frac * frac;
  }
  return q;
}

inline double modularity(const FeatureGraph& g, const ViewPartition& p) {
  const auto a = p.assignment();
  return modularity(g, a);
}

// ---------------------------------------------------------------------------
// Community detection

enum class CommunityBackend { label_propagation, greedy_modularity, exhaustive_modularity };

struct CommunityConfig {
  CommunityBackend backend = CommunityBackend::greedy_modularity;
  std::size_t max_iters = 100;
  std::uint64_t seed = 0;
};

namespace detail {

// Relative tolerance for treating two accumulated weights / gains as equal.
inline bool nearly_equal(double a, double b, double scale) {
  return std::abs(a - b) <= 1e-12 * std::max(1.0, scale);
}

inline std::vector<std::size_t> label_propagation(const FeatureGraph& g, std::size_t max_iters,
                                                  std::uint64_t seed) {
  const std::size_t n = g.n_nodes();
  std::vector<std::size_t> label(n);
  std::iota(label.begin(), label.end(), 0);
  std::vector<std::size_t> order(n);
  std::vector<double> score(n, 0.0);
  std::vector<std::size_t> touched;
  for (std::size_t sweep = 0; sweep < max_iters; ++sweep) {
    std::iota(order.begin(), order.end(), 0);
    Rng rng(splitmix64(seed ^ splitmix64(sweep)));
    rng.shuffle(std::span<std::size_t>(order));
    bool changed = false;
    for (std::size_t node : order) {
      const auto nbs = g.neighbors(node);
      if (nbs.empty()) continue;
      touched.clear();
      double scale = 0.0;
      for (const auto& nb : nbs) {
        if (score[label[nb.node]] == 0.0) touched.push_back(label[nb.node]);
        score[label[nb.node]] += nb.weight;
        scale += nb.weight;
      }
      std::sort(touched.begin(), touched.end());
      std::size_t best = touched.front();
      for (std::size_t lab : touched)
        if (score[lab] > score[best] && !nearly_equal(score[lab], score[best], scale)) best = lab;
      for (std::size_t lab : touched) score[lab] = 0.0;
      if (best != label[node]) {
        label[node] = best;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return label;
}

inline std::vector<std::size_t> greedy_modularity(const FeatureGraph& g) {
  const std::size_t n = g.n_nodes();
  const double m = g.total_weight();
  std::vector<std::size_t> community(n);
  std::iota(community.begin(), community.end(), 0);
  if (m <= 0.0) return community;

  // between(a, b): edge weight joining communities a and b; a_c = d_c / 2m.
  Matrix between(n, n, 0.0);
  std::vector<double> share(n, 0.0);
  std::vector<bool> alive(n, true);
  for (const auto& e : g.edges()) {
    between(e.i, e.j) += e.weight;
    between(e.j, e.i) += e.weight;
    share[e.i] += e.weight / (2.0 * m);
    share[e.j] += e.weight / (2.0 * m);
  }
  // Community ids are the smallest member, so (a, b) order is the pair order.
  while (true) {
    double best_gain = 0.0;
    std::size_t best_a = n, best_b = n;
    for (std::size_t a = 0; a < n; ++a) {
      if (!alive[a]) continue;
      for (std::size_t b = a + 1; b < n; ++b) {
        if (!alive[b] || between(a, b) <= 0.0) continue;
        const double gain = between(a, b) / m - 2.0 * share[a] * share[b];
        if (gain > best_gain && !nearly_equal(gain, best_gain, 1.0)) {
          best_gain = gain;
          best_a = a;
          best_b = b;
        }
      }
    }
    if (best_a == n) break;
    for (std::size_t c = 0; c < n; ++c) {
      if (!alive[c] || c == best_a || c == best_b) continue;
      between(best_a, c) += between(best_b, c);
      between(c, best_a) = between(best_a, c);
    }
    share[best_a] += share[best_b];
    alive[best_b] = false;
    for (auto& c : community)
      if (c == best_b) c = best_a;
  }
  return community;
}

inline std::vector<std::size_t> exhaustive_modularity(const FeatureGraph& g) {
  std::vector<std::size_t> best;
  double best_q = -std::numeric_limits<double>::infinity();
  for_each_partition(g.n_nodes(), [&](std::span<const std::size_t> rgs) {
    const double q = modularity(g, rgs);
    if (q > best_q && !nearly_equal(q, best_q, 1.0)) {
      best_q = q;
      best.assign(rgs.begin(), rgs.end());
    }
  });
  return best;
}

}  // namespace detail

/// Disjoint communities of `g` as views. Nodes without edges always end up
/// as singleton views.
inline ViewPartition detect_views(const FeatureGraph& g, const CommunityConfig& cfg = {}) {
  const std::size_t n = g.n_nodes();
  if (n == 0) throw ConfigError("graph has no nodes");
  std::vector<std::size_t> assignment;
  switch (cfg.backend) {
    case CommunityBackend::label_propagation:
      assignment = detail::label_propagation(g, cfg.max_iters, cfg.seed);
      break;
    case CommunityBackend::greedy_modularity:
      assignment = detail::greedy_modularity(g);
      break;
    case CommunityBackend::exhaustive_modularity:
      if (n > kMaxExhaustiveFeatures)
        throw ConfigError("exhaustive_modularity supports at most " + std::to_string(kMaxExhaustiveFeatures) +
                          " nodes, graph has " + std::to_string(n));
      assignment = detail::exhaustive_modularity(g);
      break;
  }
  for (std::size_t node = 0; node < n; ++node)
    if (g.neighbors(node).empty()) assignment[node] = n + node;
  return ViewPartition::from_assignment(assignment);
}

inline std::string to_string(CommunityBackend b) {
  switch (b) {
    case CommunityBackend::label_propagation: return "label_propagation";
    case CommunityBackend::greedy_modularity: return "greedy_modularity";
    case CommunityBackend::exhaustive_modularity: return "exhaustive_modularity";
  }
  return "unknown";
}

inline CommunityBackend parse_backend(std::string_view name) {
  if (name == "label_propagation") return CommunityBackend::label_propagation;
  if (name == "greedy_modularity") return CommunityBackend::greedy_modularity;
  if (name == "exhaustive_modularity") return CommunityBackend::exhaustive_modularity;
  throw ConfigError("unknown community backend '" + std::string(name) + "'");
}

}  // namespace mvfc
