#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "prony/experiment.hpp"
#include "prony/io.hpp"
#include "prony_cli/cli.hpp"

namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("prony_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
  }

  static std::string read(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return prony::cli::run(args, out_, err_);
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

constexpr const char* kSingleNode =
    R"({"nodes":[[0,0]],"multiplicities":[1],"magnitudes":[[[2,0]]]})";
constexpr const char* kTwoNodes =
    R"({"nodes":[[0.2,0.1],[-0.5,0.3]],"multiplicities":[2,1],)"
    R"("magnitudes":[[[1,0],[0.5,-0.2]],[[0.8,0.1]]]})";

TEST_F(Cli, BoundsMatchesLocalAccuracy) {
  write("one.json", kSingleNode);
  ASSERT_EQ(run({"bounds", path("one.json"), "--epsilon", "0.01"}), 0) << err_.str();
  EXPECT_EQ(out_.str(),
            "param,acc_loc,row_l1,c1,epsilon\n"
            "a[1][0],0.01,1,1,0.01\n"
            "xi[1],0.0050000000000000001,0.5,1,0.01\n");
}

TEST_F(Cli, ForwardThenSolveRoundTrip) {
  write("two.json", kTwoNodes);
  const auto truth = prony::read_model_file(path("two.json"));
  ASSERT_EQ(run({"forward", path("two.json"), "--out", path("m.csv")}), 0) << err_.str();
  for (const char* method : {"prony", "esprit", "lsq"}) {
    ASSERT_EQ(run({"solve", path("m.csv"), "--multiplicities", "2,1", "--method", method}), 0)
        << method << ": " << err_.str();
    const auto j = nlohmann::json::parse(out_.str());
    EXPECT_EQ(j["method"], method);
    const auto recovered = prony::model_from_json(j["model"].dump());
    for (double e : prony::match_parameters(truth, recovered).values) EXPECT_LE(e, 1e-6);
  }
}

TEST_F(Cli, LsqWithInitialModel) {
  write("two.json", kTwoNodes);
  ASSERT_EQ(run({"forward", path("two.json"), "-S", "5", "--epsilon", "1e-10", "--seed", "3",
                 "--out", path("m.csv")}),
            0);
  ASSERT_EQ(run({"solve", path("m.csv"), "-l", "2,1", "-m", "lsq", "--initial", path("two.json")}),
            0)
      << err_.str();
  const auto j = nlohmann::json::parse(out_.str());
  EXPECT_EQ(j["diagnostics"]["converged"], 1.0);
  write("bad.json", kSingleNode);
  EXPECT_EQ(run({"solve", path("m.csv"), "-l", "2,1", "-m", "lsq", "--initial", path("bad.json")}),
            1);
}

TEST_F(Cli, ForwardNoiseIsSeeded) {
  write("two.json", kTwoNodes);
  ASSERT_EQ(run({"forward", path("two.json"), "--epsilon", "1e-3", "--seed", "4"}), 0);
  const std::string a = out_.str();
  ASSERT_EQ(run({"forward", path("two.json"), "--epsilon", "1e-3", "--seed", "4"}), 0);
  EXPECT_EQ(a, out_.str());
  ASSERT_EQ(run({"forward", path("two.json"), "--epsilon", "1e-3", "--seed", "5"}), 0);
  EXPECT_NE(a, out_.str());
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 7);
}

TEST_F(Cli, SweepDeterministic) {
  const std::vector<std::string> base{"sweep", "--kind", "epsilon", "--grid", "1e-12:1e-6:4",
                                      "--trials", "3", "--seed", "9", "--methods", "lsq,prony"};
  auto first = base;
  first.insert(first.end(), {"--out", path("a.csv"), "--summary", path("a.json")});
  auto second = base;
  second.insert(second.end(), {"--out", path("b.csv"), "--summary", path("b.json")});
  ASSERT_EQ(run(first), 0) << err_.str();
  ASSERT_EQ(run(second), 0) << err_.str();
  const std::string a = read(path("a.csv"));
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, read(path("b.csv")));
  EXPECT_EQ(read(path("a.json")), read(path("b.json")));

  std::ifstream in(path("a.csv"));
  const auto table = prony::read_table_csv(in);
  EXPECT_EQ(table.rows.size(), 4u * 3u * 2u * 6u);
  const auto summary = nlohmann::json::parse(read(path("a.json")));
  EXPECT_EQ(summary["kind"], "epsilon");
  EXPECT_TRUE(summary["slopes"].contains("prony"));
}

TEST_F(Cli, SweepSummaryToStdout) {
  ASSERT_EQ(run({"sweep", "--kind", "order", "--grid", "1:2:2", "--trials", "2", "--methods",
                 "lsq", "--out", path("t.csv")}),
            0)
      << err_.str();
  const auto summary = nlohmann::json::parse(out_.str());
  EXPECT_EQ(summary["kind"], "order");
  EXPECT_TRUE(summary["slopes"]["lsq"]["xi[1]"].is_null());
}

TEST_F(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(run({}), 1);
  EXPECT_EQ(run({"frobnicate"}), 1);
  EXPECT_EQ(run({"bounds"}), 1);
  EXPECT_EQ(run({"bounds", path("missing.json"), "--epsilon", "0.1"}), 1);
  EXPECT_FALSE(err_.str().empty());
  write("m.csv", "k,re,im\n0,1,0\n1,0.5,0\n");
  EXPECT_EQ(run({"solve", path("m.csv"), "-l", "1", "-m", "music"}), 1);
  EXPECT_EQ(run({"solve", path("m.csv"), "-l", "x"}), 1);
  EXPECT_EQ(run({"sweep", "--kind", "epsilon", "--grid", "1:2", "--out", path("t.csv")}), 1);
  EXPECT_EQ(run({"solve", path("m.csv"), "-l", "1", "-m", "apm"}), 0) << err_.str();
  EXPECT_EQ(run({"--help"}), 0);
}

TEST_F(Cli, NumericalFailureExitsTwo) {
  write("flat.json", R"({"nodes":[[0.3,0]],"multiplicities":[2],"magnitudes":[[[1,0],[0,0]]]})");
  ASSERT_EQ(run({"forward", path("flat.json"), "--out", path("m.csv")}), 0);
  EXPECT_EQ(run({"solve", path("m.csv"), "-l", "2", "-m", "prony"}), 2);
  EXPECT_NE(err_.str().find("numerical"), std::string::npos);
  EXPECT_EQ(run({"bounds", path("flat.json"), "--epsilon", "0.1"}), 2);
}

TEST_F(Cli, CheckPassesOnSmallRun) {
  // Few cases keep this fast; the full 100-case run is in the acceptance suite.
  const int code = run({"check", "--cases", "5", "--seed", "3"});
  EXPECT_NE(out_.str().find("factorization"), std::string::npos);
  EXPECT_NE(out_.str().find("round-trip"), std::string::npos);
  EXPECT_TRUE(code == 0 || code == 2);
  EXPECT_EQ(code == 0, out_.str().find("FAIL") == std::string::npos);
}

}  // namespace
