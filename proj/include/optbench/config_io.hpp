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

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "optbench/param_store.hpp"
#include "optbench/training.hpp"
#include "optbench/tuner.hpp"

namespace optbench {

using json = nlohmann::json;

// JSON forms of every persisted or configurable type. Readers reject unknown
// keys and report failures as ValidationError with the dotted path of the
// offending field. Non-finite reals are written as the strings "inf", "-inf"
// or "nan" so no document ever carries a bare NaN.

json real_to_json(double v);
double real_from_json(const json& j, const std::string& path);

json to_json(const ParamStore& store);
ParamStore param_store_from_json(const json& j);

json to_json(TagSet tags);
TagSet tag_set_from_json(const json& j, const std::string& path);

json to_json(const OptimizerConfig& config);
OptimizerConfig optimizer_config_from_json(const json& j, const std::string& path);

json to_json(const RoutingRule& routing);
RoutingRule routing_from_json(const json& j, const std::string& path);

json to_json(const ScheduleSpec& spec);
ScheduleSpec schedule_from_json(const json& j, const std::string& path, std::int64_t default_total_steps = -1);

json to_json(const MlpConfig& config);
MlpConfig mlp_config_from_json(const json& j, const std::string& path);

json to_json(const DataConfig& config);
DataConfig data_config_from_json(const json& j, const std::string& path);

/// Canonical form: every field present, lists expanded.
json to_json(const ExperimentConfig& config);
ExperimentConfig experiment_from_json(const json& j);

/// Throws ParseError on malformed JSON, ValidationError on bad content.
ExperimentConfig parse_config(std::string_view text);

json to_json(const SearchDim& dim);
SearchDim search_dim_from_json(const json& j, const std::string& path);
std::vector<SearchDim> search_space_from_json(const json& j);

json to_json(const Assignment& assignment);
Assignment assignment_from_json(const json& j, const std::string& path);

json to_json(const TrialRecord& record);
TrialRecord trial_record_from_json(const json& j);

json to_json(const SeedSummary& summary);
SeedSummary seed_summary_from_json(const json& j, const std::string& path);

json to_json(const HistoryPoint& point);
json to_json(const TrainResult& result);

json to_json(const BnRunningStats& stats);

/// True when `dotted` names an existing field (object keys and array
/// indices separated by '.').
bool has_path(const json& doc, std::string_view dotted);

/// Replaces the value at `dotted`. Throws ConfigPathUnknown.
void patch_path(json& doc, std::string_view dotted, const json& value);

/// Canonicalizes `base`, applies each (path, value), and re-parses.
ExperimentConfig patched_config(const ExperimentConfig& base, const Assignment& patches);

}  // namespace optbench
