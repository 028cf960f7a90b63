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

#include <gtest/gtest.h>

#include <cmath>

#include "optbench/error.hpp"
#include "optbench/training.hpp"
#include "test_support.hpp"

namespace optbench {
namespace {

TEST(Training, HistoryStepsAndLearningRates) {
  const auto c = testing::tiny_experiment(45);
  const auto r = run_training(c);
  ASSERT_EQ(r.status, TrainStatus::completed);
  EXPECT_EQ(r.steps_run, 45);
  std::vector<std::int64_t> steps;
  for (const auto& p : r.history) {
    steps.push_back(p.step);
    EXPECT_EQ(p.lr, eval_schedule(c.schedule, p.step));
    EXPECT_TRUE(std::isfinite(p.train_loss));
  }
  EXPECT_EQ(steps, (std::vector<std::int64_t>{10, 20, 30, 40, 45}));
}

TEST(Training, DeterministicBitwise) {
  const auto c = testing::tiny_experiment(30);
  EXPECT_EQ(run_training(c), run_training(c));
  auto other = c;
  other.base_seed = 1;
  EXPECT_NE(run_training(other).final_params, run_training(c).final_params);
}

TEST(Training, PlainSgdSeparatesBlobs) {
  auto c = testing::tiny_experiment(150);
  c.model.use_bn = {false};
  c.model.bn_gamma_init = {};
  c.optimizer = RoutingRule::uniform([] {
    auto o = OptimizerConfig::defaults_for(OptimizerKind::heavy_ball);
    o.momentum = 0.0;
    return o;
  }());
  c.schedule = ScheduleSpec{ScheduleFamily::constant, 0.0, 0.5, 0.0, 1.0, 1.0, 0, 150};
  c.data.spread = 0.05;
  c.data.seed = 3;
  const auto r = run_training(c);
  ASSERT_EQ(r.status, TrainStatus::completed);
  EXPECT_EQ(*r.final_metric(Metric::final_train_accuracy), 1.0);
}

TEST(Training, HugeLearningRateDiverges) {
  auto c = testing::tiny_experiment(50);
  c.model.layer_widths = {2, 8, 8, 2};
  c.model.use_bn = {false, false};
  c.model.bn_gamma_init = {};
  c.schedule = ScheduleSpec{ScheduleFamily::constant, 0.0, 1e300, 0.0, 1.0, 1.0, 0, 50};
  const auto r = run_training(c);
  EXPECT_EQ(r.status, TrainStatus::diverged);
  ASSERT_TRUE(r.divergence_step.has_value());
  EXPECT_EQ(r.steps_run + 1, *r.divergence_step);
  for (const auto& p : r.history) EXPECT_LT(p.step, *r.divergence_step);
  for (std::size_t g = 0; g < r.final_params.size(); ++g) {
    for (double v : r.final_params.group(g).values) EXPECT_TRUE(std::isfinite(v));
  }
}

TEST(Training, ValidationNamesTheField) {
  auto c = testing::tiny_experiment(20);
  c.schedule.total_steps = 21;
  try {
    c.validate();
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ValidationError);
    EXPECT_NE(std::string(e.what()).find("schedule.total_steps"), std::string::npos);
  }
  c = testing::tiny_experiment(20);
  c.batch_size = 24;  // not a multiple of 16
  EXPECT_THROW(c.validate(), Error);
  c = testing::tiny_experiment(20);
  c.budget_steps = 0;
  c.schedule.total_steps = 0;
  EXPECT_THROW(c.validate(), Error);
  c = testing::tiny_experiment(20);
  c.target_metric = "f1";
  EXPECT_THROW(c.validate(), Error);
}

TEST(Training, DerivedSeedsDiffer) {
  EXPECT_NE(derive_seed(1, 0, 0), derive_seed(1, 0, 1));
  EXPECT_NE(derive_seed(1, 0, 0), derive_seed(2, 0, 0));
  EXPECT_EQ(derive_seed(5, 6, 7), derive_seed(5, 6, 7));
}

TEST(Training, TrainRowsFollowSplit) {
  DataConfig d;
  EXPECT_EQ(d.train_rows(), 410u);
}

}  // namespace
}  // namespace optbench
