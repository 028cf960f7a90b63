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

#include "optbench/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <set>
#include <string>

#include "optbench/config_io.hpp"
#include "optbench/error.hpp"

namespace optbench {

namespace {

constexpr std::uint64_t kPrimes[kMaxSearchDims] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                                                   31, 37, 41, 43, 47, 53, 59, 61, 67, 71};

}  // namespace

std::string_view to_string(DimKind kind) { return kind == DimKind::continuous ? "continuous" : "discrete_set"; }
std::string_view to_string(Scaling scaling) { return scaling == Scaling::linear ? "linear" : "log"; }

void SearchDim::validate() const {
  if (name.empty()) fail(ErrorCode::ValidationError, "search dimension needs a name");
  if (kind == DimKind::continuous) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
      fail(ErrorCode::ValidationError, name + ": continuous range needs finite lo < hi");
    }
    if (scaling == Scaling::log && !(lo > 0.0)) fail(ErrorCode::ValidationError, name + ": log scaling needs lo > 0");
  } else if (values.empty()) {
    fail(ErrorCode::ValidationError, name + ": discrete_set needs at least one value");
  }
}

double radical_inverse(std::uint64_t index, std::uint64_t base) {
  // Reversed digits over base^k; both stay exact in 64 bits for any index a
  // study will reach.
  std::uint64_t reversed = 0;
  std::uint64_t denom = 1;
  while (index > 0) {
    reversed = reversed * base + index % base;
    denom *= base;
    index /= base;
  }
  return static_cast<double>(reversed) / static_cast<double>(denom);
}

std::vector<double> halton_point(std::uint64_t index, std::size_t n_dims) {
  if (n_dims == 0) fail(ErrorCode::InvalidConfig, "halton_point needs at least one dimension");
  if (n_dims > kMaxSearchDims) fail(ErrorCode::TooManyDims, "at most " + std::to_string(kMaxSearchDims) + " dimensions");
  if (index == 0) fail(ErrorCode::InvalidConfig, "Halton indices start at 1");
  std::vector<double> out(n_dims);
  for (std::size_t d = 0; d < n_dims; ++d) out[d] = radical_inverse(index, kPrimes[d]);
  return out;
}

json map_unit(const SearchDim& dim, double u) {
  if (!(u >= 0.0 && u <= 1.0)) fail(ErrorCode::InvalidUnit, "unit coordinate must lie in [0, 1]");
  if (dim.kind == DimKind::discrete_set) {
    const std::size_t n = dim.values.size();
    const auto idx = std::min(static_cast<std::size_t>(std::floor(u * static_cast<double>(n))), n - 1);
    return dim.values[idx];
  }
  if (dim.scaling == Scaling::log) {
    const double log_lo = std::log(dim.lo);
    return std::exp(log_lo + u * (std::log(dim.hi) - log_lo));
  }
  return dim.lo + u * (dim.hi - dim.lo);
}

Assignment sample_trial(std::span<const SearchDim> space, std::uint64_t trial_index, std::uint64_t offset) {
  if (space.size() > kMaxSearchDims) {
    fail(ErrorCode::TooManyDims, "search spaces are limited to " + std::to_string(kMaxSearchDims) + " dimensions");
  }
  Assignment out;
  if (space.empty()) return out;
  const auto point = halton_point(trial_index + 1 + offset, space.size());
  for (std::size_t d = 0; d < space.size(); ++d) out.emplace_back(space[d].name, map_unit(space[d], point[d]));
  return out;
}

std::string_view to_string(TrialStatus status) {
  switch (status) {
    case TrialStatus::completed: return "completed";
    case TrialStatus::diverged: return "diverged";
    case TrialStatus::error: return "error";
  }
  return "?";
}

TrialStatus parse_trial_status(std::string_view text) {
  for (auto s : {TrialStatus::completed, TrialStatus::diverged, TrialStatus::error}) {
    if (to_string(s) == text) return s;
  }
  fail(ErrorCode::ValidationError, "unknown trial status '" + std::string(text) + "'");
}

double TrialRecord::metric(Metric m) const {
  switch (m) {
    case Metric::final_train_accuracy: return final_train_accuracy;
    case Metric::final_eval_accuracy: return final_eval_accuracy;
    case Metric::final_loss: return final_loss;
  }
  return 0.0;
}

std::vector<TrialRecord> run_study(std::span<const SearchDim> space, const ExperimentConfig& base_config,
                                   const StudyOptions& options) {
  if (options.n_trials == 0) fail(ErrorCode::InvalidConfig, "a study needs at least one trial");
  if (options.budget_steps <= 0) fail(ErrorCode::InvalidConfig, "budget_steps must be > 0");
  if (space.size() > kMaxSearchDims) fail(ErrorCode::TooManyDims, "too many search dimensions");
  for (const auto& dim : space) dim.validate();
  const json canonical = to_json(base_config);
  for (const auto& dim : space) {
    if (!has_path(canonical, dim.name)) fail(ErrorCode::ConfigPathUnknown, "no config field at '" + dim.name + "'");
  }

  std::vector<TrialRecord> records(options.n_trials);
  const auto n = static_cast<std::int64_t>(options.n_trials);
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, options.workers))
  for (std::int64_t i = 0; i < n; ++i) {
    TrialRecord& rec = records[static_cast<std::size_t>(i)];
    rec.trial_index = i;
    rec.seed = base_config.base_seed + static_cast<std::uint64_t>(i);
    try {
      rec.assignment = sample_trial(space, static_cast<std::uint64_t>(i), options.offset);
      Assignment patches = rec.assignment;
      patches.emplace_back("budget_steps", options.budget_steps);
      patches.emplace_back("schedule.total_steps", options.budget_steps);
      patches.emplace_back("base_seed", rec.seed);
      const auto config = patched_config(base_config, patches);
      const auto result = run_training(config);
      rec.steps_run = result.steps_run;
      if (result.status == TrainStatus::diverged) {
        rec.status = TrialStatus::diverged;
        rec.divergence_step = result.divergence_step;
        rec.message = result.message;
      } else {
        rec.status = TrialStatus::completed;
        rec.final_train_accuracy = *result.final_metric(Metric::final_train_accuracy);
        rec.final_eval_accuracy = *result.final_metric(Metric::final_eval_accuracy);
        rec.final_loss = *result.final_metric(Metric::final_loss);
      }
    } catch (const std::exception& e) {
      rec.status = TrialStatus::error;
      rec.message = e.what();
    }
  }
  return records;
}

TrialRecord select_best(std::span<const TrialRecord> records, Metric metric, SelectMode mode) {
  const TrialRecord* best = nullptr;
  for (const auto& r : records) {
    if (r.status != TrialStatus::completed) continue;
    if (best == nullptr) {
      best = &r;
      continue;
    }
    const double a = r.metric(metric);
    const double b = best->metric(metric);
    const bool better = mode == SelectMode::max ? a > b : a < b;
    if (better || (a == b && r.trial_index < best->trial_index)) best = &r;
  }
  if (best == nullptr) fail(ErrorCode::NoCompletedTrials, "no trial completed without diverging");
  return *best;
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) fail(ErrorCode::EmptyInput, "quantile of an empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  if (lo == hi) return sorted[lo];
  const double frac = pos - static_cast<double>(lo);
  // Diverged seeds are +-inf; any positive weight on an infinite end wins.
  const bool inf_lo = std::isinf(sorted[lo]);
  const bool inf_hi = std::isinf(sorted[hi]);
  if (inf_lo && inf_hi) return frac < 0.5 ? sorted[lo] : sorted[hi];
  if (inf_lo) return sorted[lo];
  if (inf_hi) return sorted[hi];
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

SeedSummary summarize(std::span<const double> values, double target, SelectMode mode) {
  if (values.empty()) fail(ErrorCode::EmptyInput, "cannot summarize zero seeds");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  SeedSummary s;
  s.n_seeds = sorted.size();
  s.min = sorted.front();
  s.max = sorted.back();
  s.q1 = quantile_sorted(sorted, 0.25);
  s.median = quantile_sorted(sorted, 0.5);
  s.q3 = quantile_sorted(sorted, 0.75);
  const auto hits = std::count_if(sorted.begin(), sorted.end(),
                                  [&](double v) { return mode == SelectMode::max ? v >= target : v <= target; });
  s.target_fraction = static_cast<double>(hits) / static_cast<double>(sorted.size());
  return s;
}

std::vector<double> multi_seed_values(const ExperimentConfig& config, std::span<const std::uint64_t> seeds,
                                      Metric metric, SelectMode mode, int workers) {
  if (seeds.empty()) fail(ErrorCode::InvalidConfig, "need at least one seed");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    fail(ErrorCode::InvalidConfig, "seeds must be distinct");
  }
  config.validate();
  const double diverged_value =
      mode == SelectMode::max ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
  std::vector<double> values(seeds.size(), diverged_value);
  std::vector<std::exception_ptr> errors(seeds.size());
  const auto n = static_cast<std::int64_t>(seeds.size());
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, workers))
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      ExperimentConfig c = config;
      c.base_seed = seeds[static_cast<std::size_t>(i)];
      const auto result = run_training(c);
      if (result.status == TrainStatus::completed) values[static_cast<std::size_t>(i)] = *result.final_metric(metric);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return values;
}

SeedSummary multi_seed_eval(const ExperimentConfig& config, std::span<const std::uint64_t> seeds, double target,
                            Metric metric, SelectMode mode, int workers) {
  const auto values = multi_seed_values(config, seeds, metric, mode, workers);
  return summarize(values, target, mode);
}

}  // namespace optbench
