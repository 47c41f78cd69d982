#include <gtest/gtest.h>

#include "mvfc/collab.hpp"
#include "oracles.hpp"

using namespace mvfc;

namespace {

Dataset random_small(std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t n = 200 + rng.below(801);
  const std::size_t f = 3 + rng.below(6);
  Matrix x(n, f);
  std::vector<int> y(n);
  std::vector<double> w(f);
  for (double& v : w) v = rng.normal();
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t c = 0; c < f; ++c) s += w[c] * (x(i, c) = rng.normal());
    y[i] = s + 0.5 * rng.normal() > 0.0 ? 1 : 0;
  }
  y[0] = 0;
  y[1] = 1;
  return Dataset(std::move(x), std::move(y), default_feature_names(f));
}

}  // namespace

TEST(CollabValue, Bounds) {
  EXPECT_DOUBLE_EQ(collab_value({0.3, 0.2, 0.2, 0.2}), 0.0);
  EXPECT_DOUBLE_EQ(collab_value({0.25, 0.25, 0.0, 0.0}), 0.25);
}

TEST(PairErrors, SingleFeatureDecides) {
  Rng rng(3);
  Matrix x(600, 2);
  std::vector<int> y(600);
  for (std::size_t i = 0; i < 600; ++i) {
    x(i, 0) = rng.normal();
    x(i, 1) = rng.normal();
    y[i] = x(i, 0) > 0.0 ? 1 : 0;
  }
  const auto pe = pair_errors(Dataset(std::move(x), std::move(y), {"a", "b"}), 0, 1, CollabConfig{});
  EXPECT_LE(pe.e1, 0.03);
  EXPECT_LE(pe.e12, pe.e1);
  EXPECT_LE(pe.e12, 0.03);
}

TEST(PairErrors, DuplicateColumn) {
  const auto base = oracle::blobs(1000, 1, 0.5, 4);
  Matrix x(1000, 2);
  for (std::size_t i = 0; i < 1000; ++i) x(i, 0) = x(i, 1) = base.samples()(i, 0);
  const Dataset ds(std::move(x), {base.labels().begin(), base.labels().end()}, {"a", "copy"});
  const auto pe = pair_errors(ds, 0, 1, CollabConfig{});
  EXPECT_NEAR(pe.e1, pe.e2, 0.02);
  EXPECT_NEAR(pe.e12_raw, pe.e1, 0.02);
}

TEST(PairErrors, RotatedThreshold) {
  const auto ds = oracle::rotated_threshold(4000, 7);
  EXPECT_NEAR(oracle::sign_rule_error(ds, 0), 0.25, 0.03);
  const auto pe = pair_errors(ds, 0, 1, CollabConfig{});
  EXPECT_NEAR(pe.e1, 0.25, 0.03);
  EXPECT_NEAR(pe.e2, 0.25, 0.03);
  EXPECT_LE(pe.e12, 0.03);
  EXPECT_NEAR(collab_value(pe), 0.25, 0.05);
}

TEST(PairErrors, SymmetricInArguments) {
  const auto ds = oracle::rotated_threshold(500, 8);
  const auto a = pair_errors(ds, 0, 1, CollabConfig{.seed = 5});
  const auto b = pair_errors(ds, 1, 0, CollabConfig{.seed = 5});
  EXPECT_EQ(a.e12_raw, b.e12_raw);
  EXPECT_EQ(a.e1, b.e2);
  EXPECT_THROW(pair_errors(ds, 0, 0, CollabConfig{}), ConfigError);
}

TEST(CollabMatrixTest, TwoFeatures) {
  const auto cm = collab_matrix(oracle::rotated_threshold(400, 1), CollabConfig{});
  ASSERT_EQ(cm.values.rows(), 2u);
  EXPECT_EQ(cm.values(0, 0), 0.0);
  EXPECT_EQ(cm.values(1, 1), 0.0);
  EXPECT_EQ(cm.values(0, 1), cm.values(1, 0));
  EXPECT_GT(cm.values(0, 1), 0.1);
}

TEST(CollabMatrixTest, BoundsOverRandomDatasets) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto ds = random_small(seed);
    std::vector<PairErrors> log;
    const auto cm = collab_matrix(ds, CollabConfig{.seed = seed}, 1, &log);
    const std::size_t f = ds.n_features();
    std::size_t p = 0;
    for (std::size_t i = 0; i < f; ++i) {
      EXPECT_EQ(cm.values(i, i), 0.0);
      for (std::size_t j = i + 1; j < f; ++j, ++p) {
        const double c = cm.values(i, j);
        EXPECT_EQ(c, cm.values(j, i));
        EXPECT_GE(c, 0.0);
        EXPECT_LE(c, std::min(log[p].e1, log[p].e2));
        EXPECT_EQ(c, collab_value(log[p]));
      }
    }
    ASSERT_EQ(p, log.size());
  }
}

TEST(CollabMatrixTest, ThreadCountIndependent) {
  const auto ds = oracle::two_component_blocks(600, 2);
  const CollabConfig cfg{.seed = 9};
  const auto one = collab_matrix(ds, cfg, 1);
  for (std::size_t t : {2u, 4u, 8u}) {
    const auto many = collab_matrix(ds, cfg, t);
    EXPECT_EQ(one.values, many.values) << t << " threads";
    EXPECT_EQ(one.config_fingerprint, many.config_fingerprint);
  }
}

TEST(CollabMatrixTest, PairSeedDependsOnlyOnPair) {
  const auto ds = oracle::two_component_blocks(400, 3);
  const CollabConfig cfg{.seed = 4};
  const auto cm = collab_matrix(ds, cfg);
  const auto pe = pair_errors(ds, 2, 5, cfg);
  EXPECT_EQ(cm.values(2, 5), collab_value(pe));
  EXPECT_EQ(cm.values(5, 2), collab_value(pe));
}

TEST(CollabMatrixTest, CrossBlockNearZero) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto cm = collab_matrix(oracle::two_component_blocks(2000, seed), CollabConfig{.seed = seed});
    double cross = 0.0, block_a = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 4; j < 6; ++j) cross = std::max(cross, cm.values(i, j));
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i + 1; j < 4; ++j) block_a = std::max(block_a, cm.values(i, j));
    EXPECT_LT(cross, 0.03) << "seed " << seed;
    EXPECT_GT(block_a, cross) << "seed " << seed;
  }
}

TEST(CollabMatrixTest, NoiseNeverRaisesCollabMuch) {
  double previous = 1.0;
  for (double flip : {0.0, 0.1, 0.2, 0.3, 0.4}) {
    const auto ds = oracle::rotated_threshold(2000, 12, flip);
    const double c = collab_value(pair_errors(ds, 0, 1, CollabConfig{.seed = 12}));
    EXPECT_LE(c, previous + 0.05) << "flip " << flip;
    previous = c;
  }
}

TEST(CollabMatrixTest, FingerprintTracksConfig) {
  const auto ds = oracle::rotated_threshold(100, 1);
  EXPECT_NE(collab_fingerprint(ds, CollabConfig{.seed = 1}), collab_fingerprint(ds, CollabConfig{.seed = 2}));
  EXPECT_EQ(collab_fingerprint(ds, CollabConfig{.seed = 1}), collab_fingerprint(ds, CollabConfig{.seed = 1}));
}

TEST(CollabMatrixTest, RejectsBadConfig) {
  const auto ds = oracle::rotated_threshold(100, 1);
  EXPECT_THROW(collab_matrix(ds, CollabConfig{.k_folds = 1}), ConfigError);
  const Dataset constant(Matrix(20, 2), std::vector<int>(20, 0), {"a", "b"});
  EXPECT_THROW(collab_matrix(constant, CollabConfig{}), DataError);
}
