#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>

#include "mvfc/csv.hpp"
#include "mvfc/serialize.hpp"

namespace fs = std::filesystem;
using namespace mvfc;

namespace {

const std::string kCli = MVFC_CLI_PATH;
const std::string kFixtures = MVFC_FIXTURE_DIR;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("mvfc_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args) const {
    const std::string cmd = kCli + " " + args + " > " + (dir_ / "stdout.txt").string() + " 2> " +
                            (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string file(const std::string& name) const { return read_file(dir_ / name); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, SynthSyntheticOneShape) {
  ASSERT_EQ(run("synth --n-samples 1000 --n-features 20 --n-informative 10 --n-redundant 4 --out " +
                path("s1.csv")),
            0)
      << file("stderr.txt");
  const auto ds = load_csv(path("s1.csv"));
  EXPECT_EQ(ds.n_samples(), 1000u);
  EXPECT_EQ(ds.n_features(), 20u);
  const auto header = file("s1.csv").substr(0, file("s1.csv").find('\n'));
  EXPECT_EQ(std::count(header.begin(), header.end(), ','), 20);
}

TEST_F(Cli, SynthByteIdentical) {
  ASSERT_EQ(run("--seed 7 synth --n-samples 300 --out " + path("a.csv")), 0);
  ASSERT_EQ(run("--seed 7 synth --n-samples 300 --out " + path("b.csv")), 0);
  EXPECT_EQ(file("a.csv"), file("b.csv"));
  ASSERT_EQ(run("--seed 8 synth --n-samples 300 --out " + path("c.csv")), 0);
  EXPECT_NE(file("a.csv"), file("c.csv"));
}

TEST_F(Cli, InvalidSpecExitsNonzero) {
  EXPECT_EQ(run("synth --n-features 3 --n-informative 5 --out " + path("x.csv")), 1);
  EXPECT_NE(file("stderr.txt").find("n_informative"), std::string::npos);
  EXPECT_EQ(run("synth --bogus"), 1);
  EXPECT_EQ(run(""), 1);
}

TEST_F(Cli, DataErrorExitCode) {
  write_file_atomic(dir_ / "bad.csv", "a,label\n1,0\n2,2\n");
  EXPECT_EQ(run("--out-dir " + dir_.string() + " collab --data " + path("bad.csv")), 2);
  EXPECT_NE(file("stderr.txt").find("line 3"), std::string::npos);
}

TEST_F(Cli, ViewsOnFig2Fixture) {
  ASSERT_EQ(run("views --matrix " + kFixtures + "/fig2_collab.csv --tau 0 --backend exhaustive_modularity --out " +
                path("views.json")),
            0)
      << file("stderr.txt");
  const auto doc = json::parse(file("views.json"));
  EXPECT_EQ(partition_from_json(doc), partition_from_json(json::parse(read_file(kFixtures + "/fig4_views.json"))));
  EXPECT_EQ(doc.at("names"), json({"1", "2", "3", "4", "5", "6"}));
  const auto graph = file("views_graph.csv");
  EXPECT_EQ(std::count(graph.begin(), graph.end(), '\n'), 10);
}

TEST_F(Cli, ViewsOnEmptyMatrix) {
  write_file_atomic(dir_ / "zero.csv", ",a,b,c\na,0,0,0\nb,0,0,0\nc,0,0,0\n");
  ASSERT_EQ(run("views --matrix " + path("zero.csv") + " --out " + path("v.json")), 0);
  EXPECT_EQ(partition_from_json(json::parse(file("v.json"))), ViewPartition::singletons(3));
}

TEST_F(Cli, CollabThreadsIdenticalFiles) {
  ASSERT_EQ(run("--seed 3 synth --blocks --n-samples 400 --out " + path("blocks.csv")), 0);
  for (int t : {1, 4, 8}) {
    const auto out = dir_ / ("t" + std::to_string(t));
    ASSERT_EQ(run("--seed 3 --threads " + std::to_string(t) + " --out-dir " + out.string() + " collab --data " +
                  path("blocks.csv")),
              0)
        << file("stderr.txt");
  }
  for (const char* f : {"collab_matrix.csv", "collab_matrix.json"}) {
    EXPECT_EQ(read_file(dir_ / "t1" / f), read_file(dir_ / "t4" / f)) << f;
    EXPECT_EQ(read_file(dir_ / "t1" / f), read_file(dir_ / "t8" / f)) << f;
  }
}

TEST_F(Cli, CollabTwoFeatures) {
  write_file_atomic(dir_ / "two.csv", "p,q,label\n1,0,1\n-1,0.5,0\n2,1,1\n-2,0,0\n0.5,2,1\n-0.5,1,0\n"
                                      "1.5,0,1\n-1.5,1,0\n3,2,1\n-3,0,0\n");
  ASSERT_EQ(run("--out-dir " + dir_.string() + " collab --data " + path("two.csv")), 0) << file("stderr.txt");
  const auto m = load_matrix_csv(dir_ / "collab_matrix.csv");
  ASSERT_EQ(m.values.rows(), 2u);
  EXPECT_EQ(m.values(0, 1), m.values(1, 0));
  EXPECT_EQ(m.values(0, 0), 0.0);
  EXPECT_EQ(json::parse(file("collab_matrix.json")).at("pairs").size(), 1u);
}

TEST_F(Cli, IgTrainEvalPipeline) {
  ASSERT_EQ(run("--seed 4 synth --blocks --n-samples 400 --out " + path("d.csv")), 0);
  ASSERT_EQ(run("--out-dir " + dir_.string() + " ig --data " + path("d.csv")), 0) << file("stderr.txt");
  ASSERT_EQ(run("views --matrix " + path("ig_matrix.csv") + " --floor-negative --out " + path("ig_views.json")), 0);
  ASSERT_EQ(run("train --data " + path("d.csv") + " --views " + path("ig_views.json") + " --rounds 5 --out " +
                path("model.json")),
            0)
      << file("stderr.txt");
  ASSERT_EQ(run("eval --data " + path("d.csv") + " --model " + path("model.json") + " --out " + path("eval.json")), 0);
  const auto report = json::parse(file("eval.json"));
  EXPECT_EQ(report.at("schema"), "mvfc.eval/1");
  EXPECT_GT(report.at("accuracy").get<double>(), 0.6);
  EXPECT_TRUE(fs::exists(dir_ / "eval.csv"));
}

TEST_F(Cli, BenchWithConfigAndEnvOutputDir) {
  write_file_atomic(dir_ / "run.json",
                    R"({"seed": 2, "dataset": {"blocks": {"n_samples": 400}}, "boost": {"rounds": 4},
                        "methods": ["whole_set", "collaboration"]})");
  const std::string env = "MVFC_OUTPUT_DIR=" + path("env_out") + " ";
  const std::string cmd = env + kCli + " --config " + path("run.json") + " bench > " + path("stdout.txt");
  ASSERT_EQ(WEXITSTATUS(std::system(cmd.c_str())), 0);
  const auto report = json::parse(read_file(dir_ / "env_out" / "report.json"));
  EXPECT_EQ(report.at("methods").size(), 2u);
  EXPECT_NE(file("stdout.txt").find("Collaboration Value"), std::string::npos);

  ASSERT_EQ(run("--config " + path("run.json") + " --out-dir " + path("flag_out") + " bench --methods whole_set"), 0);
  EXPECT_EQ(json::parse(read_file(dir_ / "flag_out" / "report.json")).at("methods").size(), 1u);
}

TEST_F(Cli, BenchThreadsIdentical) {
  write_file_atomic(dir_ / "run.json",
                    R"({"seed": 5, "dataset": {"blocks": {"n_samples": 400}}, "boost": {"rounds": 4}})");
  for (int t : {1, 4, 8})
    ASSERT_EQ(run("--config " + path("run.json") + " --threads " + std::to_string(t) + " --out-dir " +
                  path("b" + std::to_string(t)) + " bench"),
              0)
        << file("stderr.txt");
  for (const char* f : {"report.json", "report.txt", "collab_matrix.json", "ig_matrix.json", "collab_views.json"}) {
    EXPECT_EQ(read_file(dir_ / "b1" / f), read_file(dir_ / "b4" / f)) << f;
    EXPECT_EQ(read_file(dir_ / "b1" / f), read_file(dir_ / "b8" / f)) << f;
  }
}

TEST_F(Cli, BenchFailedMethodExitCode) {
  write_file_atomic(dir_ / "run.json",
                    R"({"dataset": {"synthetic": {"n_samples": 200, "n_features": 13}},
                        "methods": ["whole_set", "exhaustive"]})");
  EXPECT_EQ(run("--config " + path("run.json") + " --out-dir " + path("o") + " bench"), 2);
  const auto report = json::parse(read_file(dir_ / "o" / "report.json"));
  EXPECT_EQ(report.at("methods").at("exhaustive").at("status"), "failed");
}

TEST_F(Cli, BadConfigRejected) {
  write_file_atomic(dir_ / "run.json", R"({"sed": 1})");
  EXPECT_EQ(run("--config " + path("run.json") + " bench"), 1);
  write_file_atomic(dir_ / "broken.json", "{");
  EXPECT_EQ(run("--config " + path("broken.json") + " bench"), 1);
}
