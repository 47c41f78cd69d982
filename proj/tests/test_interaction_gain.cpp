#include <gtest/gtest.h>

#include "mvfc/interaction_gain.hpp"
#include "oracles.hpp"

using namespace mvfc;

namespace {

DiscreteJointDistribution xor_distribution() {
  std::map<Outcome, double> p;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) p[{a, b, a ^ b}] = 0.25;
  return DiscreteJointDistribution::from_probabilities(p);
}

DiscreteJointDistribution independent_bits() {
  std::map<Outcome, double> p;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int y = 0; y < 2; ++y) p[{a, b, y}] = 0.125;
  return DiscreteJointDistribution::from_probabilities(p);
}

struct Bits {
  std::vector<int> a, b, y;
};

Bits random_bits(std::size_t n, std::uint64_t seed, bool xor_label) {
  Rng rng(seed);
  Bits out;
  for (std::size_t k = 0; k < n; ++k) {
    out.a.push_back(static_cast<int>(rng.below(2)));
    out.b.push_back(static_cast<int>(rng.below(2)));
    out.y.push_back(xor_label ? out.a.back() ^ out.b.back() : static_cast<int>(rng.below(2)));
  }
  return out;
}

}  // namespace

TEST(Discretize, MedianSplit) {
  const std::vector<double> col{1, 2, 3, 4};
  EXPECT_EQ(discretize(col, {.n_bins = 2}), (std::vector<int>{0, 0, 1, 1}));
}

TEST(Discretize, ConstantColumn) {
  EXPECT_EQ(discretize(std::vector<double>(7, 3.5)), std::vector<int>(7, 0));
}

TEST(Discretize, FewDistinctValuesKept) {
  const std::vector<double> col{5, -1, 5, 2, -1};
  EXPECT_EQ(discretize(col), (std::vector<int>{2, 0, 2, 1, 0}));
}

TEST(Discretize, EqualFrequencyOnNormal) {
  Rng rng(1);
  std::vector<double> col(10000);
  for (double& v : col) v = rng.normal();
  const auto bins = discretize(col);
  std::vector<int> counts(8, 0);
  for (int b : bins) {
    ASSERT_GE(b, 0);
    ASSERT_LT(b, 8);
    ++counts[static_cast<std::size_t>(b)];
  }
  for (int c : counts) EXPECT_NEAR(c, 1250, 1);
}

TEST(Joint, IdenticalTriples) {
  const std::vector<int> v{1, 1, 1, 1};
  const auto d = joint_distribution(v, v, v);
  ASSERT_EQ(d.joint().size(), 1u);
  EXPECT_EQ(d.joint().begin()->second, 1.0);
}

TEST(Joint, IndependentUniform) {
  const auto d = independent_bits();
  EXPECT_EQ(d.joint().size(), 8u);
  for (const auto& [o, p] : d.joint()) EXPECT_EQ(p, 0.125);
}

TEST(Joint, XorSupport) {
  const auto d = xor_distribution();
  EXPECT_EQ(d.joint().size(), 4u);
  for (const auto& [o, p] : d.joint()) {
    EXPECT_EQ(p, 0.25);
    EXPECT_EQ(o[2], o[0] ^ o[1]);
  }
}

TEST(Joint, RejectsBadInput) {
  EXPECT_THROW(joint_distribution(std::vector<int>{1}, std::vector<int>{1, 2}, std::vector<int>{0}), DataError);
  EXPECT_THROW(DiscreteJointDistribution::from_probabilities({{{0, 0, 0}, 0.5}}), DataError);
}

TEST(ThreeWayMi, IndependentIsZero) { EXPECT_EQ(three_way_mi(independent_bits()), 0.0); }

TEST(ThreeWayMi, XorIsOneBit) { EXPECT_NEAR(three_way_mi(xor_distribution()), 1.0, 1e-12); }

TEST(ThreeWayMi, LabelCopiesFeature) {
  std::map<Outcome, double> p;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) p[{a, b, a}] = 0.25;
  EXPECT_NEAR(three_way_mi(DiscreteJointDistribution::from_probabilities(p)), 0.0, 1e-12);
}

TEST(ThreeWayMi, MatchesEntropyIdentity) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    std::vector<int> a, b, y;
    for (int k = 0; k < 500; ++k) {
      a.push_back(static_cast<int>(rng.below(4)));
      b.push_back(static_cast<int>(rng.below(3)));
      y.push_back(rng.uniform() < 0.2 + 0.15 * a.back() ? 1 : 0);
    }
    EXPECT_NEAR(three_way_mi(joint_distribution(a, b, y)), oracle::interaction_information(a, b, y), 1e-12);
  }
}

TEST(ThreeWayMi, BinRelabelInvariant) {
  auto bits = random_bits(3000, 4, false);
  for (std::size_t k = 0; k < bits.a.size(); ++k)
    if (bits.b[k] == 1 && bits.y[k] == 1) bits.a[k] = 2;
  const double before = three_way_mi(joint_distribution(bits.a, bits.b, bits.y));
  const int perm[3] = {2, 0, 1};
  std::vector<int> relabeled;
  for (int v : bits.a) relabeled.push_back(perm[v]);
  EXPECT_NEAR(three_way_mi(joint_distribution(relabeled, bits.b, bits.y)), before, 1e-12);
}

TEST(Entropy, Examples) {
  EXPECT_EQ(entropy(std::map<int, double>{{0, 0.5}, {1, 0.5}}), 1.0);
  EXPECT_EQ(entropy(std::map<int, double>{{3, 1.0}}), 0.0);
  EXPECT_NEAR(entropy(std::map<int, double>{{0, 0.25}, {1, 0.75}}), 0.8113, 1e-4);
}

TEST(InteractionGain, XorAnalytic) { EXPECT_NEAR(interaction_gain(xor_distribution()), 0.5, 1e-9); }

TEST(InteractionGain, XorSampled) {
  const auto bits = random_bits(5000, 2, true);
  EXPECT_NEAR(interaction_gain(joint_distribution(bits.a, bits.b, bits.y)), 0.5, 0.03);
}

TEST(InteractionGain, IndependentSampled) {
  const auto bits = random_bits(5000, 3, false);
  EXPECT_NEAR(interaction_gain(joint_distribution(bits.a, bits.b, bits.y)), 0.0, 0.02);
}

TEST(InteractionGain, ConstantFeaturesGiveZero) {
  const std::vector<int> c(10, 0);
  const std::vector<int> y{0, 1, 0, 1, 0, 1, 0, 1, 0, 1};
  EXPECT_EQ(interaction_gain(joint_distribution(c, c, y)), 0.0);
}

TEST(InteractionGainMatrix, SymmetricZeroDiagonalAndXorStandsOut) {
  Rng rng(5);
  const std::size_t n = 4000;
  Matrix x(n, 4);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int a = static_cast<int>(rng.below(2));
    const int b = static_cast<int>(rng.below(2));
    x(i, 0) = a;
    x(i, 1) = b;
    x(i, 2) = rng.normal();
    x(i, 3) = rng.normal();
    y[i] = a ^ b;
  }
  const Dataset ds(std::move(x), std::move(y), default_feature_names(4));
  const auto m = interaction_gain_matrix(ds);
  const auto m4 = interaction_gain_matrix(ds, {}, 4);
  EXPECT_EQ(m, m4);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(m(i, i), 0.0);
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(m(i, j), m(j, i));
  }
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j)
      if (!(i == 0 && j == 1)) {
        EXPECT_GT(m(0, 1), m(i, j));
      }
  EXPECT_NEAR(m(0, 1), 0.5, 0.03);
}

TEST(InteractionGainMatrix, FloorNegative) {
  Matrix m(2, 2, std::vector<double>{0.0, -0.2, -0.2, 0.0});
  const auto floored = floor_negative(m);
  EXPECT_EQ(floored(0, 1), 0.0);
  EXPECT_EQ(floored(1, 0), 0.0);
}
