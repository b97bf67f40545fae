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

// assist: collect, train, eval and serve.
//
// Each subcommand reads and writes files only, so stages can be rerun
// independently. Exit codes: 0 success, 1 usage or config error, 2 data,
// I/O or collection error, 3 failed ordinal checks (eval --check).

#include <cstdint>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <system_error>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "assist/config.h"
#include "assist/dataset_io.h"
#include "assist/errors.h"
#include "assist/executor.h"
#include "assist/model_io.h"
#include "assist/trajectory_optimizer.h"
#include "assist/workflow.h"
#include "server/teach_server.h"

namespace assist {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitCheck = 3;

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> n;
  std::optional<int> epochs;
  std::optional<int> port;
  std::optional<double> abort_threshold;
  std::optional<std::string> condition;
  std::string out;
  std::string input;  // dataset or model path
  bool csv = false;
  bool check = false;
};

// Base config: --config if given, else the config embedded in the input
// artifact, else defaults. Flags override on top.
RunConfig BuildConfig(const Options& o, const std::string& embedded) {
  RunConfig config;
  if (!o.config_path.empty()) {
    config = LoadRunConfig(o.config_path);
  } else if (!embedded.empty()) {
    config = ParseRunConfig(embedded);
  }
  if (o.seed) config.seed = *o.seed;
  if (o.n) config.collect.n = *o.n;
  if (o.epochs) config.model.epochs = *o.epochs;
  if (o.port) config.serve.port = *o.port;
  if (o.abort_threshold) {
    config.execution.abort_enabled = true;
    config.execution.abort_threshold = *o.abort_threshold;
  }
  if (o.condition && *o.condition != "all") {
    config.eval.conditions = {ParseCondition(*o.condition)};
  } else if (o.condition) {
    config.eval.conditions.assign(kAllConditions.begin(), kAllConditions.end());
  }
  config.Materialize();
  return config;
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.flush();
  if (!out) throw DataError(fmt::format("cannot write '{}'", path.string()));
}

int CmdCollect(const Options& o) {
  const RunConfig config = BuildConfig(o, "");
  CollectionStats stats;
  Dataset dataset;
  try {
    dataset = CollectStage(config, &stats);
  } catch (const CollectionError& e) {
    fmt::print(stderr,
               "error: {}\nhint: the teacher keeps too few games. Lower "
               "env.obstacle_bias or env.obstacle_speed, raise "
               "teacher.danger_radius, or raise env.max_steps.\n",
               e.what());
    return kExitData;
  }
  SaveDataset(dataset, o.out);
  fmt::print("collected {} episodes in {} attempts; intervention-step "
             "fraction {:.4f}\nwrote {}\n",
             dataset.episodes.size(), stats.attempts,
             stats.intervention_fraction, o.out);
  return kExitOk;
}

int CmdTrain(const Options& o) {
  const Dataset raw = LoadDataset(o.input);
  const RunConfig config = BuildConfig(o, raw.header.run_config);
  const int every = std::max(1, config.model.epochs / 20);
  const TrainedModel model =
      TrainStage(raw, config, [&](int epoch, double loss) {
        if (epoch % every == 0 || epoch + 1 == config.model.epochs) {
          fmt::print("epoch {:>6} loss {:.6f}\n", epoch, loss);
        }
      });
  SaveModel(model, o.out);
  std::string curve = "epoch,loss\n";
  for (std::size_t i = 0; i < model.loss_curve.size(); ++i) {
    curve += fmt::format("{},{}\n", i, FormatReal(model.loss_curve[i]));
  }
  const std::string sidecar = o.out + ".loss.csv";
  WriteText(sidecar, curve);
  fmt::print("wrote {} and {}\n", o.out, sidecar);
  return kExitOk;
}

void PrintTable(const MetricsTable& table) {
  fmt::print("{:<6} {:>6} {:>7} {:>7} {:>9}   reference (reach/avoid/steps)\n",
             "cond", "n", "reach", "avoid", "steps");
  for (const ConditionMetrics& row : table.rows) {
    std::string ref;
    for (const ReferenceRow& r : kReferenceTable) {
      if (r.condition == row.condition) {
        ref = fmt::format("{:.2f}/{:.2f}/{:.1f}", r.reach_rate, r.avoid_rate,
                          r.avg_steps);
      }
    }
    fmt::print("{:<6} {:>6} {:>7.3f} {:>7.3f} {:>9.2f}   {}\n",
               ToString(row.condition), row.n_episodes, row.reach_rate,
               row.avoid_rate, row.avg_steps, ref);
  }
}

int CmdEval(const Options& o) {
  const TrainedModel model = LoadModel(o.input);
  const RunConfig config = BuildConfig(o, model.run_config);
  const bool all_rows = config.eval.conditions.size() == kAllConditions.size();
  if (o.check && !all_rows) {
    fmt::print(stderr, "error: --check needs all four conditions\n");
    return kExitUsage;
  }
  const MetricsTable table = EvaluateStage(model, config);
  std::vector<OrdinalCheck> checks;
  if (all_rows) checks = CheckOrdinals(table);

  if (o.csv) {
    fmt::print("{}", MetricsToCsv(table));
  } else {
    PrintTable(table);
    fmt::print("paired seeds: base {} ({} episodes)\n", table.seed,
               table.episode_seeds.size());
    for (const OrdinalCheck& c : checks) {
      fmt::print("{} {} ({})\n", c.passed ? "PASS" : "FAIL", c.name, c.detail);
    }
  }
  if (!o.out.empty()) {
    WriteText(o.out, MetricsToJson(table, checks, RunConfigToJson(config)));
  }
  if (o.check) {
    for (const OrdinalCheck& c : checks) {
      if (!c.passed) return kExitCheck;
    }
  }
  return kExitOk;
}

server::TeachServer* g_server = nullptr;

void OnSignal(int) {
  if (g_server != nullptr) g_server->Stop();
}

int CmdServe(const Options& o) {
  std::string embedded;
  std::optional<Dataset> existing;
  if (std::filesystem::exists(o.input) &&
      std::filesystem::file_size(o.input) > 0) {
    existing = LoadDataset(o.input);
    embedded = existing->header.run_config;
  }
  const RunConfig config = BuildConfig(o, embedded);
  if (config.serve.port < 0 || config.serve.port > 65535) {
    throw ConfigError("serve.port must be in [0, 65535]");
  }
  DatasetHeader header;
  header.env = existing ? existing->header.env : config.env;
  header.run_config = RunConfigToJson(config);
  DatasetAppender appender(o.input, header);

  server::TeachServerOptions options;
  options.port = static_cast<unsigned short>(config.serve.port);
  options.tick_rate_hz = config.serve.tick_rate_hz;
  options.static_dir = config.serve.static_dir;
  options.env = header.env;
  options.seed = config.seed;
  server::TeachServer server(options, appender);
  const unsigned short port = server.Listen();
  fmt::print("serving on http://127.0.0.1:{} (ws at /ws), appending to {}\n",
             port, o.input);
  std::fflush(stdout);
  g_server = &server;
  std::signal(SIGINT, OnSignal);
  std::signal(SIGTERM, OnSignal);
  server.Run();
  g_server = nullptr;
  fmt::print("stored {} episodes\n", appender.episodes_written());
  return kExitOk;
}

void AddCommonFlags(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config_path, "run config JSON")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "top-level seed");
}

int Main(int argc, char** argv) {
  CLI::App app{"Interruptive teaching and input optimization pipeline"};
  app.require_subcommand(1);
  Options o;

  CLI::App* collect = app.add_subcommand("collect", "teacher demonstrations");
  AddCommonFlags(collect, o);
  collect->add_option("--n", o.n, "episodes to keep");
  collect->add_option("--out", o.out, "dataset file")->required();

  CLI::App* train = app.add_subcommand("train", "train the dynamics model");
  AddCommonFlags(train, o);
  train->add_option("dataset", o.input, "dataset file")->required();
  train->add_option("--epochs", o.epochs, "training epochs");
  train->add_option("--out", o.out, "model file")->required();

  CLI::App* eval = app.add_subcommand("eval", "evaluate a trained model");
  AddCommonFlags(eval, o);
  eval->add_option("model", o.input, "model file")->required();
  eval->add_option("--out", o.out, "JSON report path");
  eval->add_option("--abort-threshold", o.abort_threshold,
                   "enable abort when predicted p reaches this value");
  eval->add_option("--condition", o.condition, "condition to run")
      ->check(CLI::IsMember({"nobp", "bpu", "bpp", "bpup", "all"}));
  eval->add_flag("--csv", o.csv, "print CSV rows instead of the table");
  eval->add_flag("--check", o.check, "exit 3 if an ordinal check fails");

  CLI::App* serve = app.add_subcommand("serve", "human teaching server");
  AddCommonFlags(serve, o);
  serve->add_option("dataset", o.input, "dataset file to append to")
      ->required();
  serve->add_option("--port", o.port, "TCP port (0 picks one)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (collect->parsed()) return CmdCollect(o);
    if (train->parsed()) return CmdTrain(o);
    if (eval->parsed()) return CmdEval(o);
    return CmdServe(o);
  } catch (const ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kExitUsage;
  } catch (const ContractError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const std::system_error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitData;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitData;
  }
}

}  // namespace
}  // namespace assist

int main(int argc, char** argv) { return assist::Main(argc, argv); }
