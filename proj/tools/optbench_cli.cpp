// Copyright 2026 The optbench Authors.
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

// optbench command-line front end.
//
//   optbench train    --config C.json [--out result.json] [--seed N]
//   optbench tune     --config C.json --space S.json --trials N [--offset K] [--budget B] [--out trials.jsonl]
//   optbench ablate   --config C.json --overrides O.json [--seeds N] [--out summaries.json]
//   optbench schedule export --config C.json --out lr.csv
//   optbench report   --in trials.jsonl|summaries.json [--out table.csv]
//
// Exit codes: 0 success, 1 runtime failure, 2 invalid input, 3 divergence of a
// single train run.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "optbench/config_io.hpp"
#include "optbench/error.hpp"
#include "optbench/harness.hpp"
#include "optbench/schedule.hpp"
#include "optbench/training.hpp"
#include "optbench/tuner.hpp"

namespace {

using namespace optbench;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitDiverged = 3;

struct CommonOptions {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  int workers = 1;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool config_required) {
  auto* c = cmd->add_option("--config", o.config, "Experiment config (JSON)")->check(CLI::ExistingFile);
  if (config_required) c->required();
  cmd->add_option("--out", o.out, "Output path");
  cmd->add_option("--seed", o.seed, "Override base_seed");
  cmd->add_option("--workers", o.workers, "Parallel trials or seeds")->check(CLI::PositiveNumber);
}

ExperimentConfig load_config(const CommonOptions& o) {
  auto config = parse_config(read_text_file(o.config));
  if (o.seed) config.base_seed = *o.seed;
  return config;
}

int cmd_train(const CommonOptions& o) {
  const auto config = load_config(o);
  const auto result = run_training(config);
  if (!o.out.empty()) write_text_file(o.out, to_json(result).dump(2) + "\n");
  for (const auto& p : result.history) {
    std::printf("step %6lld  lr %.6g  loss %.6f  train_acc %.4f  eval_acc %.4f\n", static_cast<long long>(p.step),
                p.lr, p.train_loss, p.train_accuracy, p.eval_accuracy);
  }
  if (result.status == TrainStatus::diverged) {
    std::fprintf(stderr, "diverged at step %lld: %s\n", static_cast<long long>(*result.divergence_step),
                 result.message.c_str());
    return kExitDiverged;
  }
  return kExitOk;
}

int cmd_tune(const CommonOptions& o, const std::string& space_path, std::size_t trials, std::uint64_t offset,
             std::optional<std::int64_t> budget) {
  const auto config = load_config(o);
  const auto space = search_space_from_json(json::parse(read_text_file(space_path)));
  StudyOptions opts{trials, budget.value_or(config.budget_steps), offset, o.workers};
  const auto records = run_study(space, config, opts);
  if (!o.out.empty()) append_trials(o.out, records);
  std::cout << report(records).text;
  const Metric metric = parse_metric(config.target_metric);
  try {
    const auto best = select_best(records, metric, default_mode(metric));
    std::cout << "best trial " << best.trial_index << " " << to_json(best.assignment).dump() << "\n";
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoCompletedTrials) throw;
    std::cout << "no trial completed\n";
  }
  return kExitOk;
}

int cmd_ablate(const CommonOptions& o, const std::string& overrides_path, std::size_t n_seeds) {
  const auto config = load_config(o);
  const auto overrides = overrides_from_json(json::parse(read_text_file(overrides_path)));
  std::vector<std::uint64_t> seeds(n_seeds);
  for (std::size_t i = 0; i < n_seeds; ++i) seeds[i] = config.base_seed + i;
  const auto rows = run_ablation(config, overrides, seeds, o.workers);
  if (!o.out.empty()) write_summaries(o.out, rows);
  std::cout << report(rows).text;
  return kExitOk;
}

int cmd_schedule_export(const CommonOptions& o) {
  const auto config = load_config(o);
  if (o.out.empty()) {
    write_schedule_csv(config.schedule, std::cout);
  } else {
    export_schedule(config.schedule, o.out);
  }
  return kExitOk;
}

int cmd_report(const CommonOptions& o, const std::string& in) {
  const auto text = read_text_file(in);
  const auto first = text.find_first_not_of(" \t\r\n");
  Table table;
  if (first != std::string::npos && text[first] == '[') {
    table = report(read_summaries(in));
  } else {
    table = report(read_trials(in));
  }
  std::cout << table.text;
  if (!o.out.empty()) write_text_file(o.out, table.csv);
  return kExitOk;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::ValidationError:
    case ErrorCode::ConfigPathUnknown:
    case ErrorCode::InvalidConfig:
    case ErrorCode::CorruptRecord:
    case ErrorCode::TooManyDims:
    case ErrorCode::EmptyInput:
      return kExitInvalid;
    default:
      return kExitFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Desk-scale optimizer benchmarking toolkit"};
  app.require_subcommand(1);

  CommonOptions train_opts;
  auto* train = app.add_subcommand("train", "Run one training job");
  add_common(train, train_opts, true);

  CommonOptions tune_opts;
  std::string space_path;
  std::size_t trials = 1;
  std::uint64_t offset = 0;
  std::optional<std::int64_t> budget;
  auto* tune = app.add_subcommand("tune", "Quasi-random search over a search space");
  add_common(tune, tune_opts, true);
  tune->add_option("--space", space_path, "Search space (JSON list)")->required()->check(CLI::ExistingFile);
  tune->add_option("--trials", trials, "Number of trials")->check(CLI::PositiveNumber);
  tune->add_option("--offset", offset, "Halton index offset");
  tune->add_option("--budget", budget, "Step budget per trial (default: config budget_steps)");

  CommonOptions ablate_opts;
  std::string overrides_path;
  std::size_t n_seeds = 5;
  auto* ablate = app.add_subcommand("ablate", "Single-field ablations over several seeds");
  add_common(ablate, ablate_opts, true);
  ablate->add_option("--overrides", overrides_path, "Override list (JSON)")->required()->check(CLI::ExistingFile);
  ablate->add_option("--seeds", n_seeds, "Seeds per arm, starting at base_seed")->check(CLI::PositiveNumber);

  CommonOptions schedule_opts;
  auto* schedule = app.add_subcommand("schedule", "Learning-rate schedule tools");
  schedule->require_subcommand(1);
  auto* sched_export = schedule->add_subcommand("export", "Write the config's schedule as step,lr CSV");
  add_common(sched_export, schedule_opts, true);

  CommonOptions report_opts;
  std::string report_in;
  auto* rep = app.add_subcommand("report", "Tabulate a trial log or ablation summary");
  add_common(rep, report_opts, false);
  rep->add_option("--in", report_in, "Trial log (JSONL) or summaries (JSON)")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*train) return cmd_train(train_opts);
    if (*tune) return cmd_tune(tune_opts, space_path, trials, offset, budget);
    if (*ablate) return cmd_ablate(ablate_opts, overrides_path, n_seeds);
    if (*sched_export) return cmd_schedule_export(schedule_opts);
    if (*rep) return cmd_report(report_opts, report_in);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e.code());
  } catch (const json::exception& e) {
    std::fprintf(stderr, "error: ParseError: %s\n", e.what());
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFailure;
  }
  return kExitFailure;
}
