// Copyright 2026 The assistmpl Authors
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

// Drives the installed command-line tool as a subprocess.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "assist/dataset_io.h"

namespace assist {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() /
           ("assist_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  static void TearDownTestSuite() { fs::remove_all(dir_); }

  static int Run(const std::string& args) {
    const std::string command = std::string(ASSIST_CLI_PATH) + " " + args +
                                " >" + (dir_ / "stdout.txt").string() +
                                " 2>" + (dir_ / "stderr.txt").string();
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  static std::string Slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  static std::string Path(const std::string& name) {
    return (dir_ / name).string();
  }
  static std::string Stdout() { return Slurp(dir_ / "stdout.txt"); }

  // A small pipeline shared by the eval tests.
  static void EnsureModel() {
    if (fs::exists(Path("small.bin"))) return;
    std::ofstream(Path("small.json"))
        << R"({"seed": 5, "model": {"hidden_dim": 8, "epochs": 5},)"
           R"( "eval": {"n_episodes": 2}})";
    ASSERT_EQ(Run("collect --config " + Path("small.json") + " --n 4 --out " +
                  Path("small.jsonl")),
              0);
    ASSERT_EQ(Run("train " + Path("small.jsonl") + " --out " +
                  Path("small.bin")),
              0);
  }

  static inline fs::path dir_;
};

TEST_F(CliTest, CollectWritesRequestedEpisodes) {
  ASSERT_EQ(Run("collect --n 3 --seed 2 --out " + Path("c.jsonl")), 0);
  const Dataset dataset = LoadDataset(Path("c.jsonl"));
  EXPECT_EQ(dataset.episodes.size(), 3u);
  const auto config = nlohmann::json::parse(dataset.header.run_config);
  EXPECT_EQ(config["seed"], 2);
  EXPECT_EQ(config["collect"]["n"], 3);
  EXPECT_NE(Stdout().find("intervention-step fraction"), std::string::npos);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(Run(""), 1);
  EXPECT_EQ(Run("frobnicate"), 1);
  EXPECT_EQ(Run("collect"), 1);  // --out is required
  EXPECT_EQ(Run("eval x --condition sideways"), 1);
  std::ofstream(Path("bad.json")) << R"({"no_such_key": 1})";
  EXPECT_EQ(Run("collect --config " + Path("bad.json") + " --out " +
                Path("x.jsonl")),
            1);
  EXPECT_EQ(Run("collect --n 1 --out " + Path("missing_dir/x.jsonl")), 2);
  EXPECT_EQ(Run("train " + Path("nope.jsonl") + " --out " + Path("m.bin")), 2);
  EXPECT_EQ(Run("eval " + Path("nope.bin")), 2);
  EXPECT_EQ(Run("--help"), 0);
}

TEST_F(CliTest, CollectionFailureHasHint) {
  std::ofstream(Path("hard.json")) << R"({"env": {"max_steps": 3}})";
  EXPECT_EQ(Run("collect --config " + Path("hard.json") + " --n 2 --out " +
                Path("h.jsonl")),
            2);
  EXPECT_NE(Slurp(dir_ / "stderr.txt").find("hint:"), std::string::npos);
}

TEST_F(CliTest, TrainWritesModelAndFallingLossCurve) {
  EnsureModel();
  const std::string curve = Slurp(Path("small.bin") + ".loss.csv");
  std::istringstream lines(curve);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "epoch,loss");
  std::vector<double> losses;
  while (std::getline(lines, line)) {
    losses.push_back(std::stod(line.substr(line.find(',') + 1)));
  }
  ASSERT_EQ(losses.size(), 5u);
  EXPECT_LT(losses.back(), losses.front());
}

TEST_F(CliTest, EvalReportHasFourRowsAndRegenerates) {
  EnsureModel();
  const int code = Run("eval " + Path("small.bin") + " --check --out " +
                       Path("r1.json"));
  const auto report = nlohmann::json::parse(Slurp(Path("r1.json")));
  ASSERT_EQ(report["rows"].size(), 4u);
  EXPECT_EQ(report["episode_seeds"].size(), 2u);
  EXPECT_TRUE(report["rows"][0].contains("reference"));
  bool all_passed = true;
  for (const auto& check : report["checks"]) all_passed = all_passed && check["passed"].get<bool>();
  EXPECT_EQ(code, all_passed ? 0 : 3);

  std::ofstream(Path("embedded.json")) << report["run_config"].dump();
  Run("eval " + Path("small.bin") + " --config " + Path("embedded.json") +
      " --out " + Path("r2.json"));
  EXPECT_EQ(Slurp(Path("r1.json")), Slurp(Path("r2.json")));
}

TEST_F(CliTest, EvalSingleConditionCsv) {
  EnsureModel();
  ASSERT_EQ(Run("eval " + Path("small.bin") + " --condition bpu --csv"), 0);
  const std::string out = Stdout();
  EXPECT_EQ(out.rfind("condition,", 0), 0u);
  EXPECT_NE(out.find("\nbpu,2,"), std::string::npos);
  EXPECT_EQ(out.find("nobp"), std::string::npos);
  EXPECT_EQ(Run("eval " + Path("small.bin") + " --condition bpu --check"), 1);
}

}  // namespace
}  // namespace assist
