// Copyright 2026 The madiff Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "csv_io.hpp"
#include "gtest/gtest.h"
#include "json.hpp"
#include "madiff/covariance.hpp"
#include "madiff/solver.hpp"

namespace madiff::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json ReadJson(const fs::path& path) { return json::parse(Slurp(path)); }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("madiff_cli_" + std::string(info->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int Run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return run(args, out_, err_);
  }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  void Simulate(const std::string& out, const std::string& seed = "11",
                const std::string& p = "10", const std::string& n = "100",
                const std::string& delta_prob = "0.2") {
    ASSERT_EQ(Run({"simulate", "--p", p, "--m", "2", "--n", n, "--delta-prob", delta_prob,
                   "--seed", seed, "--out", Path(out)}),
              0)
        << err_.str();
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

void ExpectSingleErrorLine(const std::string& err, const std::string& category) {
  EXPECT_EQ(err.rfind("error: " + category + ": ", 0), 0u) << err;
  EXPECT_EQ(std::count(err.begin(), err.end(), '\n'), 1) << err;
}

TEST(FormatDoubleTest, RoundTrips) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal(0.0, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double v = normal(rng);
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(-2.0), "-2");
}

TEST(DatasetHeaderTest, NodeMajorNames) {
  const std::vector<std::string> want = {"n1_a1", "n1_a2", "n2_a1", "n2_a2"};
  EXPECT_EQ(dataset_header(2, 2), want);
}

TEST_F(CliTest, SimulateWritesShapesAndManifest) {
  Simulate("sim");
  const auto x = read_csv(Path("sim/x.csv"), true);
  EXPECT_EQ(x.values.rows(), 100);
  EXPECT_EQ(x.values.cols(), 20);
  EXPECT_EQ(x.header.front(), "n1_a1");
  EXPECT_EQ(x.header.back(), "n10_a2");
  EXPECT_EQ(read_csv(Path("sim/omega_x.csv"), false).values.rows(), 20);

  const json manifest = ReadJson(Path("sim/manifest.json"));
  EXPECT_EQ(manifest["command"], "simulate");
  EXPECT_EQ(manifest["seed"], 11);
  EXPECT_TRUE(manifest.contains("duration_seconds"));
  EXPECT_TRUE(manifest.contains("version"));
  for (const auto& name : manifest["outputs"]) EXPECT_TRUE(fs::exists(Path("sim/" + name.get<std::string>())));
  EXPECT_EQ(manifest["outputs"].size(), 5u);

  const json truth = ReadJson(Path("sim/truth.json"));
  EXPECT_EQ(truth["m"], 2);
  EXPECT_EQ(truth["p"], 10);
  EXPECT_GE(truth["gamma"].get<double>(), 0.5);
  for (const auto& e : truth["edges"]) {
    EXPECT_GE(e[0].get<int>(), 1);
    EXPECT_LT(e[0].get<int>(), e[1].get<int>());
    EXPECT_LE(e[1].get<int>(), 10);
  }
}

TEST_F(CliTest, SimulateIsByteIdenticalForSeed) {
  Simulate("a", "5");
  Simulate("b", "5");
  for (const char* name : {"x.csv", "y.csv", "omega_x.csv", "omega_y.csv", "truth.json"})
    EXPECT_EQ(Slurp(Path(std::string("a/") + name)), Slurp(Path(std::string("b/") + name)))
        << name;
  Simulate("c", "6");
  EXPECT_NE(Slurp(Path("a/x.csv")), Slurp(Path("c/x.csv")));
}

TEST_F(CliTest, SimulateWithoutDifferences) {
  Simulate("sim", "3", "10", "50", "0");
  EXPECT_TRUE(ReadJson(Path("sim/truth.json"))["edges"].empty());
  EXPECT_EQ(Slurp(Path("sim/omega_x.csv")), Slurp(Path("sim/omega_y.csv")));
}

TEST_F(CliTest, SimulateDrawsAndRecordsSeed) {
  ASSERT_EQ(Run({"simulate", "--p", "5", "--m", "1", "--n", "10", "--out", Path("sim")}), 0);
  const json manifest = ReadJson(Path("sim/manifest.json"));
  ASSERT_TRUE(manifest["seed"].is_number_unsigned());
  const auto seed = manifest["seed"].get<std::uint64_t>();
  ASSERT_EQ(Run({"simulate", "--p", "5", "--m", "1", "--n", "10", "--seed",
                 std::to_string(seed), "--out", Path("again")}),
            0);
  EXPECT_EQ(Slurp(Path("sim/x.csv")), Slurp(Path("again/x.csv")));
}

TEST_F(CliTest, SimulateUnwritableDirectory) {
  std::ofstream(Path("blocker")) << "file";
  EXPECT_EQ(Run({"simulate", "--p", "4", "--m", "1", "--n", "5", "--seed", "1", "--out",
                 Path("blocker/sub")}),
            1);
  ExpectSingleErrorLine(err_.str(), "io");
  EXPECT_NE(err_.str().find("blocker"), std::string::npos);
}

TEST_F(CliTest, SimulateRejectsBadArguments) {
  EXPECT_EQ(Run({"simulate", "--kind", "ws", "--out", Path("s")}), 2);
  ExpectSingleErrorLine(err_.str(), "usage");
  EXPECT_EQ(Run({"simulate", "--er-prob", "2", "--seed", "1", "--out", Path("s")}), 1);
  ExpectSingleErrorLine(err_.str(), "argument");
  EXPECT_EQ(Run({}), 2);
}

TEST_F(CliTest, EstimateIdenticalInputsGiveNoEdges) {
  Simulate("sim");
  ASSERT_EQ(Run({"estimate", "--x", Path("sim/x.csv"), "--y", Path("sim/x.csv"), "--m", "2",
                 "--lambda", "0.1", "--seed", "1", "--out", Path("est")}),
            0)
      << err_.str();
  EXPECT_EQ(Slurp(Path("est/edges.csv")), "k,l,norm\n");
  const auto delta = read_csv(Path("est/delta.csv"), false).values;
  EXPECT_EQ(delta.rows(), 20);
  EXPECT_EQ(delta.cwiseAbs().maxCoeff(), 0.0);
}

TEST_F(CliTest, EstimateAboveLambdaMaxGivesNoEdges) {
  Simulate("sim");
  const auto x = read_csv(Path("sim/x.csv"), true).values;
  const auto y = read_csv(Path("sim/y.csv"), true).values;
  const double lmax = lambda_max(sample_covariance(MultiAttributeDataset(x, 2, 10)),
                                 sample_covariance(MultiAttributeDataset(y, 2, 10)));
  for (const char* solver : {"admm", "pgd"}) {
    ASSERT_EQ(Run({"estimate", "--x", Path("sim/x.csv"), "--y", Path("sim/y.csv"), "--m", "2",
                   "--lambda", format_double(lmax), "--solver", solver, "--seed", "1", "--out",
                   Path("est")}),
              0)
        << err_.str();
    EXPECT_EQ(Slurp(Path("est/edges.csv")), "k,l,norm\n") << solver;
    const json report = ReadJson(Path("est/report.json"));
    EXPECT_EQ(report["lambda_max"].get<double>(), lmax);
  }
}

TEST_F(CliTest, EstimateEdgesAndKkt) {
  Simulate("sim", "11", "10", "400");
  ASSERT_EQ(Run({"estimate", "--x", Path("sim/x.csv"), "--y", Path("sim/y.csv"), "--m", "2",
                 "--lambda", "0.05", "--check-kkt", "--tol-abs", "1e-9", "--tol-rel", "1e-9",
                 "--max-iter", "20000", "--seed", "1", "--out", Path("est")}),
            0)
      << err_.str();
  const auto edges = read_csv(Path("est/edges.csv"), true);
  EXPECT_EQ(edges.header, (std::vector<std::string>{"k", "l", "norm"}));
  const auto delta = read_csv(Path("est/delta.csv"), false).values;
  for (Eigen::Index r = 0; r < edges.values.rows(); ++r) {
    const int k = static_cast<int>(edges.values(r, 0)) - 1;
    const int l = static_cast<int>(edges.values(r, 1)) - 1;
    EXPECT_LT(k, l);
    EXPECT_DOUBLE_EQ(edges.values(r, 2), delta.block(2 * k, 2 * l, 2, 2).norm());
  }
  const json kkt = ReadJson(Path("est/kkt.json"));
  EXPECT_LE(kkt["relative_active_violation"].get<double>(), 1e-3);
  EXPECT_LE(kkt["relative_inactive_violation"].get<double>(), 1e-3);
  const json report = ReadJson(Path("est/report.json"));
  EXPECT_TRUE(report["report"]["converged"].get<bool>());
  EXPECT_EQ(report["edge_count"].get<std::size_t>(), static_cast<std::size_t>(edges.values.rows()));
}

TEST_F(CliTest, EstimateBicRecordsTable) {
  Simulate("sim", "11", "10", "200");
  ASSERT_EQ(Run({"estimate", "--x", Path("sim/x.csv"), "--y", Path("sim/y.csv"), "--m", "2",
                 "--bic", "--grid-size", "6", "--jobs", "2", "--seed", "1", "--out",
                 Path("est")}),
            0)
      << err_.str();
  const json bic = ReadJson(Path("est/report.json"))["bic"];
  EXPECT_EQ(bic["rows"].size(), 6u);
  EXPECT_EQ(bic["grid_solves"], 6);
  EXPECT_NE(bic["scaling"].get<std::string>().find("D^-1/2"), std::string::npos);
  bool found = false;
  for (const auto& row : bic["rows"]) found |= row["lambda"] == bic["selected_lambda"];
  EXPECT_TRUE(found);
}

TEST_F(CliTest, EstimateEdgesAreDeterministic) {
  Simulate("sim");
  for (const char* out : {"e1", "e2"}) {
    ASSERT_EQ(Run({"estimate", "--x", Path("sim/x.csv"), "--y", Path("sim/y.csv"), "--m", "2",
                   "--bic", "--seed", "1", "--out", Path(out)}),
              0);
  }
  EXPECT_EQ(Slurp(Path("e1/edges.csv")), Slurp(Path("e2/edges.csv")));
  EXPECT_EQ(Slurp(Path("e1/delta.csv")), Slurp(Path("e2/delta.csv")));
}

TEST_F(CliTest, EstimateArgumentErrors) {
  Simulate("sim");
  EXPECT_EQ(Run({"estimate", "--x", Path("sim/x.csv"), "--y", Path("sim/y.csv"), "--m", "3",
                 "--lambda", "0.1", "--out", Path("est")}),
            1);
  ExpectSingleErrorLine(err_.str(), "argument");
  EXPECT_EQ(Run({"estimate", "--x", Path("sim/x.csv"), "--y", Path("sim/y.csv"), "--m", "2",
                 "--out", Path("est")}),
            1);
  ExpectSingleErrorLine(err_.str(), "argument");
  EXPECT_EQ(Run({"estimate", "--x", Path("sim/x.csv"), "--y", Path("sim/y.csv"), "--m", "2",
                 "--lambda", "0.1", "--bic", "--out", Path("est")}),
            2);
  ExpectSingleErrorLine(err_.str(), "usage");
  EXPECT_EQ(Run({"estimate", "--x", Path("sim/x.csv"), "--y", Path("sim/y.csv"), "--m", "2",
                 "--lambda", "-1", "--out", Path("est")}),
            1);
  ExpectSingleErrorLine(err_.str(), "argument");
  EXPECT_EQ(Run({"estimate", "--x", Path("missing.csv"), "--y", Path("sim/y.csv"), "--m", "2",
                 "--lambda", "0.1", "--out", Path("est")}),
            1);
  ExpectSingleErrorLine(err_.str(), "io");
}

TEST_F(CliTest, MalformedCsvReportsLine) {
  std::ofstream(Path("bad.csv")) << "n1_a1,n2_a1\n1,2\n3,oops\n";
  EXPECT_EQ(Run({"estimate", "--x", Path("bad.csv"), "--y", Path("bad.csv"), "--m", "1",
                 "--lambda", "0.1", "--out", Path("est")}),
            1);
  ExpectSingleErrorLine(err_.str(), "parse");
  EXPECT_NE(err_.str().find("bad.csv:3:"), std::string::npos) << err_.str();

  std::ofstream(Path("ragged.csv")) << "n1_a1,n2_a1\n1,2\n3\n";
  EXPECT_EQ(Run({"estimate", "--x", Path("ragged.csv"), "--y", Path("ragged.csv"), "--m", "1",
                 "--lambda", "0.1", "--out", Path("est")}),
            1);
  EXPECT_NE(err_.str().find("ragged.csv:3:"), std::string::npos) << err_.str();
}

std::vector<std::vector<double>> RocRows(const std::string& path) {
  const auto table = read_csv(path, true);
  EXPECT_EQ(table.header, (std::vector<std::string>{"lambda", "tpr", "fpr", "f1"}));
  std::vector<std::vector<double>> rows;
  for (Eigen::Index r = 0; r < table.values.rows(); ++r)
    rows.push_back({table.values(r, 0), table.values(r, 1), table.values(r, 2),
                    table.values(r, 3)});
  return rows;
}

TEST_F(CliTest, RocSingleLambda) {
  Simulate("sim");
  ASSERT_EQ(Run({"roc", "--x", Path("sim/x.csv"), "--y", Path("sim/y.csv"), "--truth",
                 Path("sim/truth.json"), "--lambdas", "0.2", "--seed", "1", "--out",
                 Path("roc")}),
            0)
      << err_.str();
  EXPECT_EQ(RocRows(Path("roc/roc.csv")).size(), 1u);
}

TEST_F(CliTest, RocGridStartsAtEmptyGraphAndDecreases) {
  Simulate("sim", "11", "10", "300");
  ASSERT_EQ(Run({"roc", "--x", Path("sim/x.csv"), "--y", Path("sim/y.csv"), "--truth",
                 Path("sim/truth.json"), "--grid-size", "8", "--seed", "1", "--out",
                 Path("roc")}),
            0)
      << err_.str();
  const auto rows = RocRows(Path("roc/roc.csv"));
  ASSERT_EQ(rows.size(), 8u);
  EXPECT_EQ(rows[0][1], 0.0);
  EXPECT_EQ(rows[0][2], 0.0);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LT(rows[i][0], rows[i - 1][0]);
}

TEST_F(CliTest, RocSolversAgree) {
  Simulate("sim", "11", "10", "300");
  for (const char* solver : {"admm", "pgd"}) {
    ASSERT_EQ(Run({"roc", "--x", Path("sim/x.csv"), "--y", Path("sim/y.csv"), "--truth",
                   Path("sim/truth.json"), "--grid-size", "10", "--solver", solver, "--seed",
                   "1", "--out", Path(std::string("roc_") + solver)}),
              0)
        << err_.str();
  }
  const auto a = RocRows(Path("roc_admm/roc.csv"));
  const auto p = RocRows(Path("roc_pgd/roc.csv"));
  ASSERT_EQ(a.size(), p.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i][0], p[i][0]);
    EXPECT_LE(std::abs(a[i][3] - p[i][3]), 0.1) << "lambda " << a[i][0];
  }
}

TEST_F(CliTest, RocRejectsMismatchedTruth) {
  Simulate("sim");
  Simulate("other", "3", "5", "50");
  EXPECT_EQ(Run({"roc", "--x", Path("sim/x.csv"), "--y", Path("sim/y.csv"), "--truth",
                 Path("other/truth.json"), "--out", Path("roc")}),
            1);
  ExpectSingleErrorLine(err_.str(), "argument");
  std::ofstream(Path("broken.json")) << "{\"m\": 2,";
  EXPECT_EQ(Run({"roc", "--x", Path("sim/x.csv"), "--y", Path("sim/y.csv"), "--truth",
                 Path("broken.json"), "--out", Path("roc")}),
            1);
  ExpectSingleErrorLine(err_.str(), "parse");
}

void WriteSeries(const fs::path& path, const std::vector<std::string>& header,
                 const Eigen::MatrixXd& values) {
  write_csv(path, values, header);
}

TEST_F(CliTest, PreprocessPipeline) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unif(1.0, 5.0);
  const int T = 40;
  Eigen::MatrixXd pm(T, 3);
  Eigen::MatrixXd temp(T, 2);
  for (int t = 0; t < T; ++t) {
    for (int c = 0; c < 3; ++c) pm(t, c) = unif(rng);
    for (int c = 0; c < 2; ++c) temp(t, c) = unif(rng) - 3.0;  // Celsius, may be negative
  }
  WriteSeries(dir_ / "pm.csv", {"dongsi", "tiantan", "extra"}, pm);
  WriteSeries(dir_ / "temp.csv", {"dongsi", "tiantan"}, temp);
  std::ofstream(Path("config.json")) << R"({
    "positivity_floor": 1e-6,
    "nodes": [
      {"name": "pm25", "file": "pm.csv", "columns": ["dongsi", "tiantan"]},
      {"name": "temp", "file": "temp.csv", "scale": 1.0, "offset": 273.15}
    ]
  })";
  ASSERT_EQ(Run({"preprocess", "--config", Path("config.json"), "--seed", "1", "--out",
                 Path("pre")}),
            0)
      << err_.str();
  const auto out = read_csv(Path("pre/x.csv"), true);
  EXPECT_EQ(out.values.rows(), T - 1);
  EXPECT_EQ(out.values.cols(), 4);
  EXPECT_EQ(out.header, (std::vector<std::string>{"n1_a1", "n1_a2", "n2_a1", "n2_a2"}));
  for (Eigen::Index c = 0; c < out.values.cols(); ++c)
    EXPECT_NEAR(out.values.col(c).squaredNorm() / (T - 1), 1.0, 1e-10);
  const json manifest = ReadJson(Path("pre/manifest.json"));
  EXPECT_EQ(manifest["params"]["nodes"], json({"pm25", "temp"}));
}

TEST_F(CliTest, PreprocessConstantFeatureNamesFeature) {
  WriteSeries(dir_ / "flat.csv", {"a"}, Eigen::MatrixXd::Constant(10, 1, 2.0));
  std::ofstream(Path("config.json"))
      << R"({"nodes": [{"name": "humidity", "file": "flat.csv"}]})";
  EXPECT_EQ(Run({"preprocess", "--config", Path("config.json"), "--out", Path("pre")}), 1);
  ExpectSingleErrorLine(err_.str(), "degenerate_input");
  EXPECT_NE(err_.str().find("humidity"), std::string::npos);
}

TEST_F(CliTest, PreprocessDomainAndConfigErrors) {
  Eigen::MatrixXd v = Eigen::MatrixXd::Constant(5, 1, 2.0);
  v(3, 0) = -1.0;
  WriteSeries(dir_ / "neg.csv", {"a"}, v);
  std::ofstream(Path("config.json")) << R"({"nodes": [{"name": "wind", "file": "neg.csv"}]})";
  EXPECT_EQ(Run({"preprocess", "--config", Path("config.json"), "--out", Path("pre")}), 1);
  ExpectSingleErrorLine(err_.str(), "domain");
  EXPECT_NE(err_.str().find("wind"), std::string::npos);

  std::ofstream(Path("bad.json")) << "{\"nodes\": [\n{\"name\": }]}";
  EXPECT_EQ(Run({"preprocess", "--config", Path("bad.json"), "--out", Path("pre")}), 1);
  ExpectSingleErrorLine(err_.str(), "parse");
  EXPECT_NE(err_.str().find("line 2"), std::string::npos) << err_.str();
}

}  // namespace
}  // namespace madiff::cli
