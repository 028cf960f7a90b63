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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "optbench/model.hpp"
#include "optbench/optim.hpp"
#include "optbench/param_store.hpp"
#include "optbench/schedule.hpp"

namespace optbench {

/// Parameters of the Gaussian-blob workload.
struct DataConfig {
  std::size_t classes = 2;
  std::size_t features = 2;
  std::size_t per_class = 256;
  double spread = 0.3;
  std::uint64_t seed = 0;

  std::size_t train_rows() const;
  friend bool operator==(const DataConfig&, const DataConfig&) = default;
};

enum class Metric { final_train_accuracy, final_eval_accuracy, final_loss };

std::string_view to_string(Metric metric);
Metric parse_metric(std::string_view text);

struct ExperimentConfig {
  MlpConfig model;
  DataConfig data;
  RoutingRule optimizer = RoutingRule::uniform(OptimizerConfig::defaults_for(OptimizerKind::nesterov));
  ScheduleSpec schedule;
  std::int64_t budget_steps = 1;
  std::size_t batch_size = 64;
  std::int64_t eval_every = 50;
  std::uint64_t base_seed = 0;
  std::string target_metric = "final_eval_accuracy";
  double target_value = 0.0;

  /// Cross-field checks; throws ValidationError naming the dotted path.
  void validate() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

enum class TrainStatus { completed, diverged };

std::string_view to_string(TrainStatus status);

struct HistoryPoint {
  std::int64_t step = 0;
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  double eval_accuracy = 0.0;
  double lr = 0.0;

  friend bool operator==(const HistoryPoint&, const HistoryPoint&) = default;
};

struct TrainResult {
  TrainStatus status = TrainStatus::completed;
  std::vector<HistoryPoint> history;
  ParamStore final_params;
  BnRunningStats final_stats;
  std::int64_t steps_run = 0;
  std::optional<std::int64_t> divergence_step;
  std::string message;

  /// Last logged value of `metric`; nullopt when nothing was logged.
  std::optional<double> final_metric(Metric metric) const;

  friend bool operator==(const TrainResult&, const TrainResult&) = default;
};

/// splitmix64 over (a, b, stream); used to derive independent RNG streams.
std::uint64_t derive_seed(std::uint64_t a, std::uint64_t b, std::uint64_t stream);

/// Loss and accuracy of `batch` in eval mode.
struct EvalMetrics {
  double loss = 0.0;
  double accuracy = 0.0;
};
EvalMetrics evaluate(const ParamStore& params, const BnRunningStats& stats, const Batch& batch,
                     const MlpConfig& config);

/// Trains for config.budget_steps with lr_t = eval_schedule(schedule, t),
/// t = 1..T. Batches come from seeded shuffled passes over the training set
/// (the tail of a pass that does not fill a batch is dropped). Metrics are
/// logged every eval_every steps and at step T. A NaN/Inf anywhere ends the
/// run with status diverged and the history up to the last good point.
TrainResult run_training(const ExperimentConfig& config);

}  // namespace optbench
