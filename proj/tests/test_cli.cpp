#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "freeevt/cli.hpp"
#include "json.hpp"

using namespace freeevt;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "freeevt-cli");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("freeevt_test_" + name);
  std::ofstream(path) << content;
  return path.string();
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST(Cli, LawFreeGumbelAtZero) {
  const auto r = run_cli({"law", "--family", "gumbel", "--free", "--x", "0"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "x,F\n0,0\n");
}

TEST(Cli, LawClassicalJson) {
  const auto r = run_cli({"law", "--family", "frechet", "--gamma", "1", "--classical", "--x", "1",
                          "--format", "json"});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j[0]["F"].get<double>(), std::exp(-1.0), 1e-14);
}

TEST(Cli, BoundFrechetJson) {
  const auto r = run_cli({"bound", "--family", "frechet", "--gamma", "2", "--n", "10", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["total"].get<double>(), 0.1, 1e-8);
  EXPECT_EQ(j["n"].get<int>(), 10);
  EXPECT_LE(j["measured_dk"].get<double>(), 0.1 + 1e-6);
  for (const char* key : {"gamma", "integral_term", "boundary_term", "reference_rate"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
}

TEST(Cli, TableGumbel) {
  const auto r = run_cli({"table", "--family", "gumbel", "--gamma", "0", "--n-max", "100", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 100u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"n", "dk", "stein_total", "integral_term",
                                               "boundary_term", "reference"}));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const int n = std::stoi(rows[i][0]);
    EXPECT_EQ(n, static_cast<int>(i) + 1);
    EXPECT_NEAR(std::stod(rows[i][2]), 1.0 / n, 1e-8);
    EXPECT_LE(std::stod(rows[i][1]), 1.0 / n + 1e-6);
  }
}

TEST(Cli, ByteStableOutput) {
  const std::vector<std::string> args{"table", "--family", "weibull", "--gamma", "-0.5", "--n-max", "6",
                                      "--format", "json"};
  EXPECT_EQ(run_cli(args).out, run_cli(args).out);
}

TEST(Cli, ValidateWorkedFamily) {
  const auto r = run_cli({"validate", "--family", "weibull", "--gamma", "-2", "--n", "3"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("W-Cond4,true"), std::string::npos);
}

TEST(Cli, HypothesisViolationNamesCondition) {
  // Uniform sample law with a Gumbel index: u_n does not vanish at B.
  const auto path = temp_file("uniform.json", "{\"x\":[0,1],\"F\":[0,1]}");
  const auto r = run_cli({"bound", "--family", "custom", "--gamma", "0", "--input", path, "--n", "2",
                          "--a", "1", "--b", "0"});
  EXPECT_EQ(r.code, cli::kHypothesisViolation);
  EXPECT_NE(r.err.find("G-Cond1-1"), std::string::npos) << r.err;
  const auto v = run_cli({"validate", "--family", "custom", "--gamma", "0", "--input", path, "--n", "2",
                          "--a", "1", "--b", "0"});
  EXPECT_EQ(v.code, cli::kHypothesisViolation);
}

TEST(Cli, CustomUniformIsExact) {
  const auto path = temp_file("uniform2.json", "{\"x\":[0,1],\"F\":[0,1],\"law\":{\"uniform\":[0,1]}}");
  const auto r = run_cli({"bound", "--family", "custom", "--gamma", "-1", "--input", path, "--n", "4",
                          "--a", "0.25", "--b", "1", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["total"].get<double>(), 0.0, 1e-12);
  EXPECT_FALSE(j.contains("warning"));
}

TEST(Cli, CustomClassicalTagUsesKnownNorming) {
  const auto path = temp_file("gumbel.json",
                              "{\"x\":[0,1],\"F\":[0,1],\"law\":{\"calculus\":\"classical\",\"gamma\":0}}");
  const auto r = run_cli({"bound", "--family", "custom", "--gamma", "0", "--input", path, "--n", "5",
                          "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(nlohmann::json::parse(r.out)["total"].get<double>(), 0.2, 1e-8);
}

TEST(Cli, MalformedInputIsParseError) {
  const auto path = temp_file("broken.json", "{\"x\": [0, 1], \"F\": ");
  const auto r = run_cli({"bound", "--family", "custom", "--gamma", "0", "--input", path, "--n", "2",
                          "--a", "1", "--b", "0"});
  EXPECT_EQ(r.code, cli::kParseError);
  EXPECT_NE(r.err.find("parse error"), std::string::npos);
}

TEST(Cli, InvalidConfig) {
  EXPECT_EQ(run_cli({"bound", "--family", "gumbel", "--gamma", "1", "--n", "3"}).code, cli::kInvalidConfig);
  EXPECT_EQ(run_cli({"bound", "--family", "frechet", "--n", "3"}).code, cli::kInvalidConfig);
  EXPECT_EQ(run_cli({"bound", "--family", "custom", "--gamma", "0", "--n", "3"}).code, cli::kInvalidConfig);
  EXPECT_EQ(run_cli({"bound", "--family", "nope", "--n", "3"}).code, cli::kInvalidConfig);
  EXPECT_EQ(run_cli({}).code, cli::kInvalidConfig);
  EXPECT_EQ(run_cli({"law", "--free", "--classical", "--x", "1"}).code, cli::kInvalidConfig);
}

TEST(Cli, ConvolveRoundTrip) {
  const auto path = temp_file("conv.json", "{\"x\":[0,0.5,1],\"F\":[0,0.5,1]}");
  const auto r = run_cli({"convolve", "--input", path, "--n", "2", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  const auto x = j["x"].get<std::vector<double>>();
  const auto F = j["F"].get<std::vector<double>>();
  ASSERT_EQ(x.size(), F.size());
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(F[i], std::max(2 * x[i] - 1, 0.0), 1e-15);

  const auto path2 = temp_file("conv_out.json", r.out);
  const auto again = run_cli({"law", "--family", "custom", "--gamma", "-1", "--input", path2, "--x", "0.75"});
  EXPECT_EQ(again.out, "x,F\n0.75,0.5\n");
}

TEST(Cli, OutputPath) {
  const auto path = (std::filesystem::temp_directory_path() / "freeevt_test_out.csv").string();
  const auto r = run_cli({"law", "--family", "weibull", "--gamma", "-1", "--x", "-0.5", "--output", path});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  EXPECT_EQ(s.str(), "x,F\n-0.5,0.5\n");
}

TEST(Cli, ToleranceEnvironment) {
  ::setenv(cli::kToleranceEnv, "garbage", 1);
  EXPECT_EQ(run_cli({"law", "--x", "1"}).code, cli::kInvalidConfig);
  ::setenv(cli::kToleranceEnv, "1e-9", 1);
  EXPECT_EQ(run_cli({"bound", "--n", "4"}).code, 0);
  ::unsetenv(cli::kToleranceEnv);
}
