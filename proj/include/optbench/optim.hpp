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
#include <span>
#include <string_view>
#include <vector>

#include "optbench/param_store.hpp"

namespace optbench {

enum class OptimizerKind { heavy_ball, nesterov, adam, lars, lamb };
enum class DecayMode { l2_into_gradient, decoupled };

std::string_view to_string(OptimizerKind kind);
std::string_view to_string(DecayMode mode);
OptimizerKind parse_optimizer_kind(std::string_view text);
DecayMode parse_decay_mode(std::string_view text);

/// Hyperparameters for one update rule. Fields irrelevant to `kind` are kept
/// but ignored.
struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::nesterov;
  double momentum = 0.9;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-6;
  bool bias_correction = true;
  double trust_coefficient = 0.001;
  DecayMode decay_mode = DecayMode::l2_into_gradient;
  double decay = 0.0;
  // Exempt from decay and from layer-wise normalization.
  TagSet exclude_tags{Tag::bias, Tag::bn_scale, Tag::bn_shift};

  /// L2-into-gradient for the momentum family, decoupled for the Adam family.
  static DecayMode default_decay_mode(OptimizerKind kind);
  static OptimizerConfig defaults_for(OptimizerKind kind);

  /// Range checks. With `strict`, epsilon must also be positive for adam and
  /// lamb; the bare update functions accept epsilon = 0 for oracle work.
  void validate(bool strict = true) const;

  friend bool operator==(const OptimizerConfig&, const OptimizerConfig&) = default;
};

/// Slot buffers for one parameter group; all start at zero.
struct GroupSlots {
  std::vector<double> velocity;
  std::vector<double> first_moment;
  std::vector<double> second_moment;

  static GroupSlots zeros(std::size_t n);
  friend bool operator==(const GroupSlots&, const GroupSlots&) = default;
};

struct OptimizerState {
  std::vector<GroupSlots> slots;
  std::int64_t step = 0;

  static OptimizerState zeros(const ParamStore& store);
  friend bool operator==(const OptimizerState&, const OptimizerState&) = default;
};

/// g + decay * theta when decay is folded into the gradient and the tag is not
/// excluded; g unchanged otherwise.
std::vector<double> effective_gradient(std::span<const double> grad, std::span<const double> theta,
                                       const OptimizerConfig& config, Tag tag);

// The update rules below take the raw gradient, apply effective_gradient
// themselves, and update `theta` and `slots` in place. Nothing is written if
// they throw (LengthMismatch, NonFiniteInput, DivisionHazard).
//
// `step` is the 1-based index of the update being taken; only the Adam family
// reads it (bias correction).

void heavy_ball_update(std::span<double> theta, std::span<const double> grad, GroupSlots& slots, double lr,
                       const OptimizerConfig& config, Tag tag = Tag::weight);

void nesterov_update(std::span<double> theta, std::span<const double> grad, GroupSlots& slots, double lr,
                     const OptimizerConfig& config, Tag tag = Tag::weight);

void adam_update(std::span<double> theta, std::span<const double> grad, GroupSlots& slots, double lr,
                 std::int64_t step, const OptimizerConfig& config, Tag tag = Tag::weight);

/// Trust ratio r = trust_coefficient * |theta| / |g'| (1 when either norm is
/// zero or the tag is excluded), then v' = mu v + r lr g', theta' = theta - v'.
void lars_update(std::span<double> theta, std::span<const double> grad, GroupSlots& slots, double lr,
                 const OptimizerConfig& config, Tag tag = Tag::weight);

/// Adam direction plus decoupled decay, rescaled by |theta| / |u| (1 when
/// either norm is zero or the tag is excluded).
void lamb_update(std::span<double> theta, std::span<const double> grad, GroupSlots& slots, double lr,
                 std::int64_t step, const OptimizerConfig& config, Tag tag = Tag::weight);

/// Dispatches on config.kind.
void apply_update(std::span<double> theta, std::span<const double> grad, GroupSlots& slots, double lr,
                  std::int64_t step, const OptimizerConfig& config, Tag tag);

struct Route {
  TagSet tags;
  OptimizerConfig config;

  friend bool operator==(const Route&, const Route&) = default;
};

/// Ordered tag-set -> rule table. The first route whose tag set contains a
/// group's tag handles that group.
class RoutingRule {
 public:
  RoutingRule() = default;
  explicit RoutingRule(std::vector<Route> routes) : routes_(std::move(routes)) {}

  static RoutingRule uniform(const OptimizerConfig& config) { return RoutingRule({Route{TagSet::all(), config}}); }

  std::span<const Route> routes() const { return routes_; }
  std::vector<Route>& mutable_routes() { return routes_; }

  /// Throws UncoveredTag.
  const OptimizerConfig& config_for(Tag tag) const;
  bool covers_all() const;
  void require_coverage() const;

  friend bool operator==(const RoutingRule&, const RoutingRule&) = default;

 private:
  std::vector<Route> routes_;
};

/// One optimizer step over every group with a shared learning rate. The step
/// counter advances once. Either every group is updated or none is.
void composite_step(ParamStore& store, std::span<const std::vector<double>> grads, const RoutingRule& routing,
                    double lr, OptimizerState& state);

}  // namespace optbench
