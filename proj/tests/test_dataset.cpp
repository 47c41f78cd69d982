#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <set>
#include <sstream>

#include "mvfc/csv.hpp"
#include "mvfc/dataset.hpp"
#include "mvfc/linear_model.hpp"

using namespace mvfc;

namespace {

Dataset parse(const std::string& text) {
  std::istringstream in(text);
  return parse_csv(in, std::string("y"));
}

Dataset strip_meta(const Dataset& ds) {
  return Dataset(ds.samples(), {ds.labels().begin(), ds.labels().end()}, ds.feature_names());
}

Dataset balanced(std::size_t n, std::size_t f, std::uint64_t seed) {
  Rng rng(seed);
  Matrix x(n, f);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = static_cast<int>(i % 2);
    for (std::size_t c = 0; c < f; ++c) x(i, c) = rng.normal();
  }
  return Dataset(std::move(x), std::move(y), default_feature_names(f));
}

}  // namespace

TEST(CsvParse, ThreeRowExample) {
  const auto ds = parse("a,b,y\n1,2,0\n3,4,1\n5,6,1");
  EXPECT_EQ(ds.n_samples(), 3u);
  EXPECT_EQ(ds.n_features(), 2u);
  EXPECT_EQ(std::vector<int>(ds.labels().begin(), ds.labels().end()), (std::vector<int>{0, 1, 1}));
  EXPECT_EQ(ds.feature_names(), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(ds.samples()(2, 1), 6.0);
}

TEST(CsvParse, LabelByIndex) {
  std::istringstream in("y,a\n0,1.5\n1,2.5\n");
  const auto ds = parse_csv(in, std::size_t{0});
  EXPECT_EQ(ds.feature_names(), std::vector<std::string>{"a"});
  EXPECT_EQ(ds.labels()[1], 1);
}

TEST(CsvParse, LabelTwoNamesOffendingLine) {
  try {
    parse("a,b,y\n1,2,0\n3,4,2\n");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(CsvParse, RejectsRaggedAndNonNumeric) {
  EXPECT_THROW(parse("a,b,y\n1,2\n"), DataError);
  EXPECT_THROW(parse("a,b,y\n1,x,0\n2,3,1\n"), DataError);
  EXPECT_THROW(parse("a,b,y\n1,nan,0\n2,3,1\n"), DataError);
  EXPECT_THROW(parse("a,b\n1,2\n"), DataError);
  EXPECT_THROW(parse(""), DataError);
}

TEST(CsvParse, AcceptsAnyColumnCount) {
  const auto ds = parse("a,b,c,d,e,y\n1,2,3,4,5,0\n1,2,3,4,5,1\n");
  EXPECT_EQ(ds.n_features(), 5u);
}

TEST(CsvRoundTrip, BitExact) {
  Rng rng(9);
  Matrix x(50, 4);
  std::vector<int> y(50);
  for (std::size_t i = 0; i < 50; ++i) {
    y[i] = static_cast<int>(rng.below(2));
    for (std::size_t c = 0; c < 4; ++c) x(i, c) = rng.normal() * std::pow(10.0, static_cast<double>(c) * 3 - 4);
  }
  x(0, 0) = 0.1 + 0.2;
  x(1, 1) = -0.0;
  x(2, 2) = 1e-300;
  const Dataset ds(std::move(x), std::move(y), {"p", "q", "r", "s"});
  std::istringstream in(to_csv_string(ds));
  const auto back = parse_csv(in, std::string("label"));
  EXPECT_EQ(back, ds);
  for (std::size_t i = 0; i < ds.samples().data().size(); ++i)
    EXPECT_EQ(std::bit_cast<std::uint64_t>(back.samples().data()[i]),
              std::bit_cast<std::uint64_t>(ds.samples().data()[i]));
}

TEST(CsvRoundTrip, FileAtomicWrite) {
  const auto dir = std::filesystem::temp_directory_path() / "mvfc_test_dataset";
  std::filesystem::create_directories(dir);
  const auto ds = strip_meta(generate_synthetic({.n_samples = 40, .n_features = 5, .seed = 3}));
  write_file_atomic(dir / "d.csv", to_csv_string(ds));
  EXPECT_EQ(load_csv(dir / "d.csv"), ds);
  EXPECT_THROW(load_csv(dir / "missing.csv"), DataError);
  std::filesystem::remove_all(dir);
}

TEST(DatasetInvariants, Rejected) {
  EXPECT_THROW(Dataset(Matrix(2, 1), {0, 2}, {"a"}), DataError);
  EXPECT_THROW(Dataset(Matrix(2, 2), {0, 1}, {"a", "a"}), DataError);
  EXPECT_THROW(Dataset(Matrix(3, 1), {0, 1}, {"a"}), DataError);
}

TEST(Synthetic, DeterministicForSeed) {
  const SyntheticSpec spec{.n_samples = 1000, .n_features = 20, .seed = 42};
  EXPECT_EQ(generate_synthetic(spec), generate_synthetic(spec));
  auto other = spec;
  other.seed = 43;
  EXPECT_NE(generate_synthetic(spec).samples(), generate_synthetic(other).samples());
}

TEST(Synthetic, SyntheticOneShape) {
  const auto ds = generate_synthetic(
      {.n_samples = 1000, .n_features = 20, .n_informative = 10, .n_redundant = 4, .seed = 1});
  EXPECT_EQ(ds.n_samples(), 1000u);
  EXPECT_EQ(ds.n_features(), 20u);
  EXPECT_TRUE(ds.has_both_classes());
  ASSERT_TRUE(ds.meta());
  EXPECT_EQ(ds.meta()->informative.size(), 10u);
  EXPECT_EQ(ds.meta()->redundant.size(), 4u);
  EXPECT_EQ(ds.meta()->noise.size(), 6u);
  std::set<std::size_t> all;
  for (const auto* v : {&ds.meta()->informative, &ds.meta()->redundant, &ds.meta()->noise})
    all.insert(v->begin(), v->end());
  EXPECT_EQ(all.size(), 20u);
}

TEST(Synthetic, BalancedWithoutFlips) {
  for (std::size_t n : {999u, 1000u, 7u}) {
    const auto ds = generate_synthetic({.n_samples = n, .n_features = 3, .n_redundant = 0, .flip_y = 0.0, .seed = n});
    const auto c0 = static_cast<long>(ds.count_class(0));
    const auto c1 = static_cast<long>(ds.count_class(1));
    EXPECT_LE(std::abs(c0 - c1), 1);
  }
}

TEST(Synthetic, WellSeparatedIsLinearlyLearnable) {
  const auto ds = generate_synthetic(
      {.n_samples = 10000, .n_features = 10, .n_informative = 10, .n_redundant = 0, .class_sep = 2.0,
       .flip_y = 0.0, .seed = 5});
  const auto sp = split(ds, {.seed = 5});
  const auto model = train(sp.train, TrainConfig{});
  const auto pred = predict(model, sp.test);
  EXPECT_GE(accuracy(pred, sp.test.labels()), 0.9);
}

TEST(Synthetic, InvalidSpecRejected) {
  EXPECT_THROW(generate_synthetic({.n_features = 3, .n_informative = 3, .n_redundant = 1}), ConfigError);
  EXPECT_THROW(generate_synthetic({.n_informative = 0}), ConfigError);
  EXPECT_THROW(generate_synthetic({.flip_y = 0.5}), ConfigError);
  EXPECT_THROW(generate_synthetic({.class_sep = 0.0}), ConfigError);
}

TEST(Blocks, PlantedBlocksRecorded) {
  const auto ds = generate_blocks({.n_samples = 300, .seed = 2});
  EXPECT_EQ(ds.n_features(), 6u);
  ASSERT_TRUE(ds.meta());
  EXPECT_EQ(ds.meta()->blocks,
            (std::vector<std::vector<std::size_t>>{{0, 1}, {2, 3}, {4, 5}}));
  EXPECT_EQ(generate_blocks({.n_samples = 300, .seed = 2}), ds);
  EXPECT_THROW(generate_blocks({.agreement = 0.5}), ConfigError);
}

TEST(Split, TenBalancedStratified) {
  const auto ds = balanced(10, 2, 1);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto sp = split(ds, {.test_fraction = 0.3, .stratified = true, .seed = seed});
    EXPECT_EQ(sp.test.n_samples(), 3u);
    const auto ones = sp.test.count_class(1);
    EXPECT_TRUE(ones == 1 || ones == 2);
  }
}

TEST(Split, EegSizedCounts) {
  Matrix x(14980, 1);
  std::vector<int> y(14980, 0);
  std::fill(y.begin(), y.begin() + 6723, 1);
  const Dataset ds(std::move(x), std::move(y), {"a"});
  const auto sp = split(ds, {.test_fraction = 0.3, .stratified = true, .seed = 1});
  EXPECT_EQ(sp.train.n_samples(), 10486u);
  EXPECT_EQ(sp.test.n_samples(), 4494u);
  const auto plain = split(ds, {.test_fraction = 0.3, .stratified = false, .seed = 1});
  EXPECT_EQ(plain.test.n_samples(), 4494u);
}

TEST(Split, DeterministicAndPartitioning) {
  const auto ds = balanced(101, 2, 4);
  for (bool strat : {true, false}) {
    const auto a = split(ds, {.test_fraction = 0.25, .stratified = strat, .seed = 8});
    const auto b = split(ds, {.test_fraction = 0.25, .stratified = strat, .seed = 8});
    EXPECT_EQ(a.test_rows, b.test_rows);
    std::vector<std::size_t> all(a.train_rows);
    all.insert(all.end(), a.test_rows.begin(), a.test_rows.end());
    std::sort(all.begin(), all.end());
    std::vector<std::size_t> expect(101);
    std::iota(expect.begin(), expect.end(), 0);
    EXPECT_EQ(all, expect);
    EXPECT_TRUE(std::is_sorted(a.test_rows.begin(), a.test_rows.end()));
  }
  EXPECT_THROW(split(ds, {.test_fraction = 1.0}), ConfigError);
}

TEST(Project, IdentityAndRepeat) {
  const auto ds = balanced(20, 4, 2);
  EXPECT_EQ(project(ds, {0, 1, 2, 3}), ds);
  EXPECT_EQ(project(ds, {2}), project(ds, {2}));
}

TEST(Project, ViewColumnsMatchOriginal) {
  const auto ds = balanced(30, 6, 3);
  const auto view = project(ds, {4, 5});
  ASSERT_EQ(view.n_features(), 2u);
  for (std::size_t r = 0; r < 30; ++r) {
    EXPECT_EQ(view.samples()(r, 0), ds.samples()(r, 4));
    EXPECT_EQ(view.samples()(r, 1), ds.samples()(r, 5));
  }
  EXPECT_EQ(view.feature_names(), (std::vector<std::string>{"x5", "x6"}));
}

TEST(Project, Composes) {
  const auto ds = balanced(25, 6, 5);
  const std::vector<std::size_t> a{5, 1, 3, 0};
  const std::vector<std::size_t> b{3, 5};
  std::vector<std::size_t> pos;
  for (std::size_t idx : b) pos.push_back(static_cast<std::size_t>(std::find(a.begin(), a.end(), idx) - a.begin()));
  EXPECT_EQ(project(project(ds, a), pos), project(ds, b));
}

TEST(Project, RejectsBadIndices) {
  const auto ds = balanced(10, 3, 1);
  EXPECT_THROW(project(ds, {3}), ConfigError);
  EXPECT_THROW(project(ds, {1, 1}), ConfigError);
}
