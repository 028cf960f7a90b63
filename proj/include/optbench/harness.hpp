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

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "optbench/training.hpp"
#include "optbench/tuner.hpp"

namespace optbench {

// ---------------------------------------------------------------------------
// Ablation

/// One arm of an ablation: `path` in the canonical config set to `value`.
struct Override {
  std::string label;
  std::string path;
  json value;
};

struct AblationRow {
  std::string label;
  SeedSummary summary;

  friend bool operator==(const AblationRow&, const AblationRow&) = default;
};

/// Max for accuracies, min for loss.
SelectMode default_mode(Metric metric);

/// Runs "Base" and then each single-field override over `seeds`, summarizing
/// config.target_metric against config.target_value. Every override path is
/// checked before the first run (ConfigPathUnknown).
std::vector<AblationRow> run_ablation(const ExperimentConfig& base_config, std::span<const Override> overrides,
                                      std::span<const std::uint64_t> seeds, int workers = 1);

std::vector<Override> overrides_from_json(const json& j);

// ---------------------------------------------------------------------------
// Persistence

/// Appends one JSON line per record. Throws IoFailure.
void append_trials(const std::filesystem::path& path, std::span<const TrialRecord> records);

/// Throws IoFailure, or CorruptRecord naming the 1-based line number.
std::vector<TrialRecord> read_trials(const std::filesystem::path& path);

void write_summaries(const std::filesystem::path& path, std::span<const AblationRow> rows);
std::vector<AblationRow> read_summaries(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

// ---------------------------------------------------------------------------
// Reports

struct Table {
  std::string text;
  std::string csv;
};

/// Columns label, median, q1, q3, min, max, target_fraction, n in input order.
/// Throws EmptyInput.
Table report(std::span<const AblationRow> rows);

/// One row per trial, ordered by trial_index. Throws EmptyInput.
Table report(std::span<const TrialRecord> records);

}  // namespace optbench
