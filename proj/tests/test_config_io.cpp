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
#include <functional>
#include <limits>

#include "optbench/config_io.hpp"
#include "optbench/error.hpp"
#include "test_support.hpp"

namespace optbench {
namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an optbench::Error";
  return ErrorCode::InvalidConfig;
}

std::string error_text(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

constexpr const char* kReferenceConfig = R"({
  "model": {"layer_widths": [2, 16, 16, 2], "use_bn": true, "bn_gamma_init": [1.0, 0.4138],
            "virtual_batch_size": 64, "label_smoothing": 0.15},
  "data": {"per_class": 256, "spread": 0.3, "seed": 1},
  "optimizer": [{"kind": "nesterov", "momentum": 0.97603, "decay": 5.8e-5}],
  "schedule": {"family": "poly_warmup_decay", "eta_peak": 7.05, "eta_final": 6e-6, "p_warmup": 2, "p_decay": 2,
               "t_warmup": 706},
  "budget_steps": 2512,
  "batch_size": 128
})";

TEST(ParseConfig, ReferenceConfigValuesAcceptedVerbatim) {
  const auto c = parse_config(kReferenceConfig);
  EXPECT_EQ(c.schedule.eta_peak, 7.05);
  EXPECT_EQ(c.schedule.total_steps, 2512);
  EXPECT_EQ(c.optimizer.routes()[0].config.momentum, 0.97603);
  EXPECT_EQ(c.optimizer.routes()[0].config.decay, 5.8e-5);
  EXPECT_EQ(c.optimizer.routes()[0].tags, TagSet::all());
  EXPECT_EQ(c.model.label_smoothing, 0.15);
  EXPECT_EQ(c.model.bn_gamma_init, (std::vector<double>{1.0, 0.4138}));
  EXPECT_EQ(c.model.use_bn, (std::vector<bool>{true, true}));
}

TEST(ParseConfig, CanonicalRoundTrip) {
  const auto c = parse_config(kReferenceConfig);
  EXPECT_EQ(parse_config(to_json(c).dump()), c);
  const auto tiny = testing::tiny_experiment();
  EXPECT_EQ(parse_config(to_json(tiny).dump(2)), tiny);
}

TEST(ParseConfig, MalformedJsonIsParseError) {
  EXPECT_EQ(code_of([] { parse_config("{\"budget_steps\": "); }), ErrorCode::ParseError);
}

TEST(ParseConfig, CrossFieldRules) {
  auto j = json::parse(kReferenceConfig);
  j["schedule"]["total_steps"] = 100;
  EXPECT_EQ(code_of([&] { parse_config(j.dump()); }), ErrorCode::ValidationError);
  j = json::parse(kReferenceConfig);
  j["batch_size"] = 96;
  EXPECT_NE(error_text([&] { parse_config(j.dump()); }).find("batch_size"), std::string::npos);
}

TEST(ParseConfig, UnknownKeysRejectedWithPath) {
  auto j = json::parse(kReferenceConfig);
  j["model"]["dropout"] = 0.1;
  const auto text = error_text([&] { parse_config(j.dump()); });
  EXPECT_NE(text.find("model.dropout"), std::string::npos);
  j = json::parse(kReferenceConfig);
  j["optimizer"][0]["lr"] = 0.1;
  EXPECT_NE(error_text([&] { parse_config(j.dump()); }).find("optimizer.0.lr"), std::string::npos);
}

TEST(ParseConfig, TypeErrorsAreValidationErrors) {
  auto j = json::parse(kReferenceConfig);
  j["budget_steps"] = "many";
  EXPECT_EQ(code_of([&] { parse_config(j.dump()); }), ErrorCode::ValidationError);
  j = json::parse(kReferenceConfig);
  j["optimizer"][0]["kind"] = "sgdw";
  EXPECT_EQ(code_of([&] { parse_config(j.dump()); }), ErrorCode::ValidationError);
  j = json::parse(kReferenceConfig);
  j["optimizer"][0]["kind"] = "adam";
  j["optimizer"][0]["epsilon"] = 0.0;
  EXPECT_EQ(code_of([&] { parse_config(j.dump()); }), ErrorCode::ValidationError);
}

TEST(ParseConfig, RoutingMustCoverAllTags) {
  auto j = json::parse(kReferenceConfig);
  j["optimizer"] = json::array({{{"tags", {"weight", "bias", "bn_scale"}}, {"kind", "nesterov"}}});
  EXPECT_EQ(code_of([&] { parse_config(j.dump()); }), ErrorCode::ValidationError);
  j["optimizer"].push_back({{"tags", {"bn_shift"}}, {"kind", "heavy_ball"}});
  EXPECT_NO_THROW(parse_config(j.dump()));
}

TEST(PatchPath, DottedPathsAndIndices) {
  const auto base = parse_config(kReferenceConfig);
  const auto patched = patched_config(base, {{"model.bn_gamma_init.1", 1.0},
                                             {"optimizer.0.exclude_tags", json::array()},
                                             {"model.virtual_batch_size", 128}});
  EXPECT_EQ(patched.model.bn_gamma_init[1], 1.0);
  EXPECT_TRUE(patched.optimizer.routes()[0].config.exclude_tags.empty());
  EXPECT_EQ(patched.model.virtual_batch_size, 128u);
  EXPECT_EQ(code_of([&] { patched_config(base, {{"model.gamma", 1.0}}); }), ErrorCode::ConfigPathUnknown);
  EXPECT_EQ(code_of([&] { patched_config(base, {{"optimizer.5.decay", 1.0}}); }), ErrorCode::ConfigPathUnknown);
  const json doc = to_json(base);
  EXPECT_TRUE(has_path(doc, "schedule.eta_peak"));
  EXPECT_FALSE(has_path(doc, "schedule.eta_peak.x"));
}

TEST(Reals, NonFiniteValuesAreStrings) {
  EXPECT_EQ(real_to_json(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(real_to_json(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_TRUE(std::isnan(real_from_json("nan", "x")));
  EXPECT_EQ(real_from_json(json(0.1), "x"), 0.1);
  EXPECT_EQ(code_of([] { real_from_json("fast", "x"); }), ErrorCode::ValidationError);
}

TEST(SearchSpace, JsonRoundTrip) {
  const auto j = json::parse(R"([
    {"name": "schedule.eta_peak", "kind": "continuous", "lo": 0.01, "hi": 10, "scaling": "log"},
    {"name": "optimizer.0.momentum", "kind": "discrete_set", "values": [0.9, 0.99]}
  ])");
  const auto space = search_space_from_json(j);
  ASSERT_EQ(space.size(), 2u);
  EXPECT_EQ(space[0].scaling, Scaling::log);
  EXPECT_EQ(space[1].values.size(), 2u);
  json back = json::array();
  for (const auto& d : space) back.push_back(to_json(d));
  EXPECT_EQ(search_space_from_json(back), space);
  EXPECT_EQ(code_of([] { search_space_from_json(json::parse(R"([{"name": "x", "lo": 1, "hi": 0}])")); }),
            ErrorCode::ValidationError);
}

TEST(TrialRecordJson, DivergedRecordsCarryNoMetrics) {
  TrialRecord r;
  r.trial_index = 4;
  r.status = TrialStatus::diverged;
  r.final_loss = std::nan("");
  r.divergence_step = 12;
  r.steps_run = 11;
  r.assignment = {{"schedule.eta_peak", 1e6}};
  const auto j = to_json(r);
  EXPECT_FALSE(j.contains("final_loss"));
  const auto back = trial_record_from_json(j);
  EXPECT_EQ(back.divergence_step, 12);
  EXPECT_EQ(back.assignment, r.assignment);
}

}  // namespace
}  // namespace optbench
