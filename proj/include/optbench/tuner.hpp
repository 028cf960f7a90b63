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
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "optbench/training.hpp"

namespace optbench {

using json = nlohmann::json;

enum class DimKind { continuous, discrete_set };
enum class Scaling { linear, log };

std::string_view to_string(DimKind kind);
std::string_view to_string(Scaling scaling);

/// One tunable field, addressed by dotted path into the experiment config
/// (e.g. "optimizer.0.decay", "schedule.eta_peak").
struct SearchDim {
  std::string name;
  DimKind kind = DimKind::continuous;
  double lo = 0.0;
  double hi = 1.0;
  std::vector<json> values;
  Scaling scaling = Scaling::linear;

  /// Throws ValidationError.
  void validate() const;

  friend bool operator==(const SearchDim&, const SearchDim&) = default;
};

inline constexpr std::size_t kMaxSearchDims = 20;

/// Radical inverse of `index` in `base`, computed as an exact integer ratio
/// before the single rounding to double.
double radical_inverse(std::uint64_t index, std::uint64_t base);

/// Halton point: dimension d uses the d-th prime as base. index >= 1.
std::vector<double> halton_point(std::uint64_t index, std::size_t n_dims);

/// Throws InvalidUnit for u outside [0, 1].
json map_unit(const SearchDim& dim, double u);

using Assignment = std::vector<std::pair<std::string, json>>;

/// Point halton_point(trial_index + 1 + offset) mapped through each dim.
/// Throws TooManyDims past kMaxSearchDims.
Assignment sample_trial(std::span<const SearchDim> space, std::uint64_t trial_index, std::uint64_t offset);

enum class TrialStatus { completed, diverged, error };

std::string_view to_string(TrialStatus status);
TrialStatus parse_trial_status(std::string_view text);

struct TrialRecord {
  std::int64_t trial_index = 0;
  Assignment assignment;
  std::uint64_t seed = 0;
  TrialStatus status = TrialStatus::completed;
  double final_train_accuracy = 0.0;
  double final_eval_accuracy = 0.0;
  double final_loss = 0.0;
  std::int64_t steps_run = 0;
  std::optional<std::int64_t> divergence_step;
  std::string message;

  double metric(Metric m) const;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

struct StudyOptions {
  std::size_t n_trials = 1;
  std::int64_t budget_steps = 1;
  std::uint64_t offset = 0;
  int workers = 1;
};

/// Patches base_config with sample_trial(space, i, offset) for each trial i,
/// sets the step budget, uses seed base_seed + i, and trains. Diverged and
/// invalid trials are recorded and the study continues. Results are in
/// trial_index order regardless of `workers`. Throws ConfigPathUnknown before
/// running anything when a dimension names a missing config field.
std::vector<TrialRecord> run_study(std::span<const SearchDim> space, const ExperimentConfig& base_config,
                                   const StudyOptions& options);

enum class SelectMode { max, min };

/// Best completed record by `metric`; ties go to the lower trial_index.
/// Throws NoCompletedTrials.
TrialRecord select_best(std::span<const TrialRecord> records, Metric metric, SelectMode mode);

struct SeedSummary {
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double min = 0.0;
  double max = 0.0;
  double target_fraction = 0.0;
  std::size_t n_seeds = 0;

  friend bool operator==(const SeedSummary&, const SeedSummary&) = default;
};

/// Linear-interpolation quantile of sorted data (position q * (n - 1)).
double quantile_sorted(std::span<const double> sorted, double q);

/// Order statistics of `values` plus the fraction meeting `target`
/// (>= for max mode, <= for min mode). Throws EmptyInput.
SeedSummary summarize(std::span<const double> values, double target, SelectMode mode);

/// Per-seed final metric; diverged runs count as -inf (max mode) or +inf
/// (min mode).
std::vector<double> multi_seed_values(const ExperimentConfig& config, std::span<const std::uint64_t> seeds,
                                      Metric metric, SelectMode mode, int workers = 1);

/// Throws InvalidConfig for an empty or repeated seed list.
SeedSummary multi_seed_eval(const ExperimentConfig& config, std::span<const std::uint64_t> seeds, double target,
                            Metric metric, SelectMode mode = SelectMode::max, int workers = 1);

}  // namespace optbench
