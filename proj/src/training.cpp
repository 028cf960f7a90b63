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

#include "optbench/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "optbench/error.hpp"

namespace optbench {

namespace {

[[noreturn]] void invalid(const std::string& path, const std::string& what) {
  fail(ErrorCode::ValidationError, path + ": " + what);
}

// Rethrows `e` as a ValidationError prefixed with `path`.
template <typename Fn>
void validate_at(const std::string& path, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    invalid(path, e.what());
  }
}

bool is_divergence(const Error& e) {
  return e.code() == ErrorCode::NonFiniteInput || e.code() == ErrorCode::DivisionHazard;
}

}  // namespace

std::size_t DataConfig::train_rows() const {
  return static_cast<std::size_t>(std::llround(0.8 * static_cast<double>(classes * per_class)));
}

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::final_train_accuracy: return "final_train_accuracy";
    case Metric::final_eval_accuracy: return "final_eval_accuracy";
    case Metric::final_loss: return "final_loss";
  }
  return "?";
}

Metric parse_metric(std::string_view text) {
  for (auto m : {Metric::final_train_accuracy, Metric::final_eval_accuracy, Metric::final_loss}) {
    if (to_string(m) == text) return m;
  }
  fail(ErrorCode::ValidationError, "unknown metric '" + std::string(text) + "'");
}

std::string_view to_string(TrainStatus status) {
  return status == TrainStatus::completed ? "completed" : "diverged";
}

void ExperimentConfig::validate() const {
  validate_at("model", [&] { model.validate(); });
  if (data.classes != model.num_classes()) invalid("data.classes", "must equal the last model layer width");
  if (data.features != model.layer_widths.front()) invalid("data.features", "must equal the first model layer width");
  if (data.classes < 2) invalid("data.classes", "must be >= 2");
  if (data.features == 0) invalid("data.features", "must be positive");
  if (data.per_class == 0) invalid("data.per_class", "must be positive");
  if (!(data.spread > 0.0) || !std::isfinite(data.spread)) invalid("data.spread", "must be > 0");
  if (optimizer.routes().empty()) invalid("optimizer", "needs at least one route");
  for (std::size_t i = 0; i < optimizer.routes().size(); ++i) {
    validate_at("optimizer." + std::to_string(i), [&] { optimizer.routes()[i].config.validate(true); });
  }
  validate_at("optimizer", [&] { optimizer.require_coverage(); });
  validate_at("schedule", [&] { schedule.validate(); });
  if (budget_steps <= 0) invalid("budget_steps", "must be > 0");
  if (schedule.total_steps != budget_steps) invalid("schedule.total_steps", "must equal budget_steps");
  if (batch_size == 0) invalid("batch_size", "must be > 0");
  if (model.num_bn_layers() > 0 && batch_size % model.virtual_batch_size != 0) {
    invalid("batch_size", "must be divisible by model.virtual_batch_size");
  }
  if (batch_size > data.train_rows()) invalid("batch_size", "exceeds the number of training rows");
  if (data.classes * data.per_class - data.train_rows() == 0) invalid("data.per_class", "no rows left for evaluation");
  if (eval_every <= 0) invalid("eval_every", "must be > 0");
  validate_at("target_metric", [&] { (void)parse_metric(target_metric); });
  if (!std::isfinite(target_value)) invalid("target_value", "must be finite");
}

std::optional<double> TrainResult::final_metric(Metric metric) const {
  if (history.empty()) return std::nullopt;
  const auto& last = history.back();
  switch (metric) {
    case Metric::final_train_accuracy: return last.train_accuracy;
    case Metric::final_eval_accuracy: return last.eval_accuracy;
    case Metric::final_loss: return last.train_loss;
  }
  return std::nullopt;
}

std::uint64_t derive_seed(std::uint64_t a, std::uint64_t b, std::uint64_t stream) {
  auto splitmix = [](std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  };
  return splitmix(splitmix(splitmix(a) ^ b) ^ stream);
}

EvalMetrics evaluate(const ParamStore& params, const BnRunningStats& stats, const Batch& batch,
                     const MlpConfig& config) {
  const auto out = forward(params, stats, batch, config, Mode::eval);
  return {out.loss, accuracy(out.logits, batch.labels)};
}

TrainResult run_training(const ExperimentConfig& config) {
  config.validate();
  const auto data = gen_synthetic_dataset(config.data.classes, config.data.features, config.data.per_class,
                                          config.data.spread, config.data.seed);

  TrainResult result;
  result.final_params = init_mlp(config.model, derive_seed(config.base_seed, config.model.init_seed, 0));
  result.final_stats = BnRunningStats::initial(config.model);
  auto& params = result.final_params;
  auto& stats = result.final_stats;
  OptimizerState state = OptimizerState::zeros(params);

  std::mt19937_64 shuffle_rng(derive_seed(config.base_seed, config.model.init_seed, 1));
  const std::size_t n_train = data.train.size();
  std::vector<std::size_t> order(n_train);
  std::size_t cursor = n_train;  // forces a shuffle before the first batch
  std::vector<std::size_t> rows(config.batch_size);

  for (std::int64_t t = 1; t <= config.budget_steps; ++t) {
    if (cursor + config.batch_size > n_train) {
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::shuffle(order.begin(), order.end(), shuffle_rng);
      cursor = 0;
    }
    std::copy_n(order.begin() + static_cast<std::ptrdiff_t>(cursor), config.batch_size, rows.begin());
    cursor += config.batch_size;
    const Batch batch = gather_rows(data.train, rows);
    const double lr = eval_schedule(config.schedule, t);

    try {
      auto fwd = forward(params, stats, batch, config.model, Mode::train);
      const auto grads = backward(fwd.cache, params, config.model);
      composite_step(params, grads, config.optimizer, lr, state);
      stats = std::move(fwd.stats);
      result.steps_run = t;

      if (t % config.eval_every == 0 || t == config.budget_steps) {
        const auto train_m = evaluate(params, stats, data.train, config.model);
        const auto eval_m = evaluate(params, stats, data.eval, config.model);
        result.history.push_back({t, train_m.loss, train_m.accuracy, eval_m.accuracy, lr});
      }
    } catch (const Error& e) {
      if (!is_divergence(e)) throw;
      result.status = TrainStatus::diverged;
      result.divergence_step = t;
      result.message = e.what();
      return result;
    }
  }
  return result;
}

}  // namespace optbench
