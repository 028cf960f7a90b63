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
#include <iosfwd>
#include <string_view>
#include <vector>

namespace optbench {

enum class ScheduleFamily { poly_warmup_decay, cosine, legacy_bert, constant };

std::string_view to_string(ScheduleFamily family);
ScheduleFamily parse_schedule_family(std::string_view text);

/// Learning-rate schedule over integer steps 0..total_steps.
///
/// poly_warmup_decay rises from eta_init to eta_peak as (t / t_warmup)^p_warmup
/// and falls to eta_final as ((T - t) / (T - t_warmup))^p_decay. cosine and
/// constant read only eta_peak and total_steps. legacy_bert reproduces the
/// schedule whose linear decay is measured from step 0 rather than from the
/// end of warmup, which produces a drop at t_warmup.
struct ScheduleSpec {
  ScheduleFamily family = ScheduleFamily::poly_warmup_decay;
  double eta_init = 0.0;
  double eta_peak = 1.0;
  double eta_final = 0.0;
  double p_warmup = 1.0;
  double p_decay = 1.0;
  std::int64_t t_warmup = 0;
  std::int64_t total_steps = 1;

  /// Throws ValidationError.
  void validate() const;

  friend bool operator==(const ScheduleSpec&, const ScheduleSpec&) = default;
};

/// Throws OutOfRangeStep unless 0 <= t <= total_steps.
double eval_schedule(const ScheduleSpec& spec, std::int64_t t);

/// Value at t of the formula that governs the open interval (t - 1, t), i.e.
/// the left limit of the schedule at t when read as a function of real time.
double left_limit(const ScheduleSpec& spec, std::int64_t t);

struct Discontinuity {
  std::int64_t step = 0;
  double gap = 0.0;
};

/// Largest jump |eta_t - left_limit(t)| over t in 1..T. A continuous schedule
/// reports (0, 0.0) or a rounding-level gap; ties go to the earliest step.
Discontinuity max_discontinuity(const ScheduleSpec& spec);

/// Largest plain step-to-step change |eta_t - eta_{t-1}|.
Discontinuity max_step_change(const ScheduleSpec& spec);

std::vector<double> schedule_values(const ScheduleSpec& spec);

/// `step,lr` header then one row per t in [0, T], 17 significant digits.
void write_schedule_csv(const ScheduleSpec& spec, std::ostream& out);

/// Throws IoFailure.
void export_schedule(const ScheduleSpec& spec, const std::filesystem::path& path);

}  // namespace optbench
