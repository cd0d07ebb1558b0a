#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "derfolio/cli.hpp"

namespace fs = std::filesystem;
using derfolio::cli::run;

namespace {

const std::string kData = DERFOLIO_DATA_DIR;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("derfolio_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name) << text;
    return path(name);
  }
  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, FrontierWritesAllOutputs) {
  const auto r = invoke({"frontier", "-i", kData + "/newark_2021.csv", "--points", "10", "--out-csv", path("f.csv"),
                         "--out-json", path("f.json"), "--out-svg", path("f.svg")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("Minimum Variance Portfolio"), std::string::npos);
  const auto j = nlohmann::json::parse(slurp(path("f.json")));
  EXPECT_EQ(j["scenario"], "newark_2021");
  EXPECT_EQ(j["asset_names"].size(), 3u);
  EXPECT_NE(slurp(path("f.svg")).find("</svg>"), std::string::npos);
  std::istringstream csv(slurp(path("f.csv")));
  std::string line;
  int lines = 0;
  while (std::getline(csv, line)) ++lines;
  EXPECT_EQ(lines, 11);
}

TEST_F(CliTest, MissingInputExitsTwo) {
  const auto r = invoke({"frontier", "-i", path("nope.csv")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("nope.csv"), std::string::npos);
}

TEST_F(CliTest, MalformedFileExitsTwoWithLocation) {
  const auto f = write("bad.csv", "period,a,b\n2021-01,1,2\n2021-02,x,3\n");
  const auto r = invoke({"correlate", "-i", f});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("bad.csv:3"), std::string::npos) << r.err;
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"bogus"}).code, 2);
  EXPECT_EQ(invoke({"frontier"}).code, 2);
  EXPECT_EQ(invoke({"frontier", "-i", kData + "/newark_2021.csv", "--points", "1"}).code, 2);
  EXPECT_EQ(invoke({"frontier", "-i", kData + "/newark_2021.csv", "--transform", "solar=square"}).code, 2);
  EXPECT_EQ(invoke({"compare", "--scenario", "a=" + kData + "/newark_2021.csv"}).code, 2);
}

TEST_F(CliTest, NoExcessReturnExitsThree) {
  const auto r = invoke({"frontier", "-i", kData + "/newark_2021.csv", "--risk-free", "0.5"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("NoExcessReturn"), std::string::npos) << r.err;
}

TEST_F(CliTest, CubeTransformNeedsSpeedUnit) {
  // canonical files carry no unit, so the cube transform is accepted there
  EXPECT_EQ(invoke({"correlate", "-i", kData + "/newark_2021.csv", "--transform", "wind=cube"}).code, 0);
  EXPECT_EQ(invoke({"correlate", "-i", kData + "/newark_2021.csv", "--transform", "tidal=cube"}).code, 2);
}

TEST_F(CliTest, ConfigFileWithCommandLineOverride) {
  const auto cfg = write("run.conf", "# defaults\npoints = 5\nrisk-free=0.001\nout-json=" + path("cfg.json") + "\n");
  auto r = invoke({"frontier", "-i", kData + "/newark_2021.csv", "--config", cfg, "--out-csv", path("a.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(slurp(path("cfg.json")));
  EXPECT_EQ(j["risk_free"], 0.001);

  r = invoke({"frontier", "-i", kData + "/newark_2021.csv", "--config", cfg, "--risk-free", "0.002", "--points", "3",
              "--out-csv", path("b.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  j = nlohmann::json::parse(slurp(path("cfg.json")));
  EXPECT_EQ(j["risk_free"], 0.002);
  std::istringstream csv(slurp(path("b.csv")));
  std::string line;
  int lines = 0;
  while (std::getline(csv, line)) ++lines;
  EXPECT_EQ(lines, 4);
}

TEST_F(CliTest, BadConfigExitsTwo) {
  const auto cfg = write("bad.conf", "points\n");
  EXPECT_EQ(invoke({"frontier", "-i", kData + "/newark_2021.csv", "--config", cfg}).code, 2);
  EXPECT_EQ(invoke({"frontier", "-i", kData + "/newark_2021.csv", "--config", path("missing.conf")}).code, 2);
}

TEST_F(CliTest, CompareSameFileTwiceKeepsInputOrderOnTies) {
  const auto f = kData + "/newark_2021.csv";
  const auto r = invoke({"compare", "--scenario", "second=" + f, "--scenario", "first=" + f, "--out-json",
                         path("c.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(slurp(path("c.json")));
  EXPECT_EQ(j["ranking_by_mvp_risk"], nlohmann::json({"second", "first"}));
  EXPECT_EQ(j["scenarios"][0]["mvp"], j["scenarios"][1]["mvp"]);
}

TEST_F(CliTest, CompareRejectsDuplicateNames) {
  const auto f = kData + "/newark_2021.csv";
  EXPECT_EQ(invoke({"compare", "--scenario", "a=" + f, "--scenario", "a=" + f}).code, 2);
}

TEST_F(CliTest, IngestMergesExports) {
  const auto e = kData + "/exports/";
  const auto r = invoke({"ingest", "--spec", "asset=solar,path=" + e + "newark_solar.csv", "--spec",
                         "asset=wind,kind=wide,path=" + e + "newark_wind.csv", "--spec",
                         "asset=diesel,path=" + e + "newark_diesel.csv,period=Month,value=Generation", "-o",
                         path("merged.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(path("merged.csv")), slurp(kData + "/newark_2021.csv"));
}

TEST_F(CliTest, IngestUnknownColumnExitsTwo) {
  const auto r = invoke({"ingest", "--spec", "asset=solar,path=" + kData + "/exports/newark_solar.csv,value=kwh",
                         "-o", path("x.csv")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("kwh"), std::string::npos);
}

TEST_F(CliTest, UnwritableOutputExitsTwo) {
  const auto r = invoke({"correlate", "-i", kData + "/newark_2021.csv", "--out-json", path("no/such/dir/c.json")});
  EXPECT_EQ(r.code, 2);
}

TEST_F(CliTest, HelpExitsZero) { EXPECT_EQ(invoke({"--help"}).code, 0); }
