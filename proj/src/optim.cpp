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

#include "optbench/optim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "optbench/error.hpp"

namespace optbench {

namespace {

void require_same_length(std::span<const double> theta, std::span<const double> grad, const GroupSlots& slots) {
  const std::size_t n = theta.size();
  if (grad.size() != n || slots.velocity.size() != n || slots.first_moment.size() != n ||
      slots.second_moment.size() != n) {
    fail(ErrorCode::LengthMismatch, "parameter, gradient and slot lengths differ (theta has " + std::to_string(n) +
                                        ", gradient has " + std::to_string(grad.size()) + ")");
  }
}

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) fail(ErrorCode::NonFiniteInput, std::string(what) + " contains NaN or Inf");
  }
}

void check_inputs(std::span<const double> theta, std::span<const double> grad, const GroupSlots& slots) {
  require_same_length(theta, grad, slots);
  require_finite(grad, "gradient");
  require_finite(theta, "parameters");
}

bool decoupled_applies(const OptimizerConfig& config, Tag tag) {
  return config.decay_mode == DecayMode::decoupled && config.decay != 0.0 && !config.exclude_tags.contains(tag);
}

// Copies `next` into `dst` only when every entry is finite, so a diverging
// step never leaves NaN/Inf behind in parameters or slots.
void commit(std::span<double> dst, const std::vector<double>& next, const char* what) {
  require_finite(next, what);
  std::copy(next.begin(), next.end(), dst.begin());
}

// m_hat / (sqrt(s_hat) + eps). A zero denominator is only harmless when the
// numerator is zero too (that coordinate has never seen a gradient).
double adam_direction(double m_hat, double s_hat, double eps) {
  const double denom = std::sqrt(s_hat) + eps;
  if (denom == 0.0) {
    if (m_hat == 0.0) return 0.0;
    fail(ErrorCode::DivisionHazard, "epsilon is zero and the second moment vanished under a nonzero first moment");
  }
  return m_hat / denom;
}

struct AdamMoments {
  std::vector<double> m;
  std::vector<double> s;
  std::vector<double> direction;
};

AdamMoments adam_moments(std::span<const double> g, const GroupSlots& slots, std::int64_t step,
                         const OptimizerConfig& config) {
  if (step < 1) fail(ErrorCode::InvalidConfig, "Adam-family step index must be >= 1");
  const std::size_t n = g.size();
  AdamMoments out{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
  const double b1 = config.beta1;
  const double b2 = config.beta2;
  double c1 = 1.0;
  double c2 = 1.0;
  if (config.bias_correction) {
    c1 = 1.0 - std::pow(b1, static_cast<double>(step));
    c2 = 1.0 - std::pow(b2, static_cast<double>(step));
  }
  for (std::size_t i = 0; i < n; ++i) {
    out.m[i] = b1 * slots.first_moment[i] + (1.0 - b1) * g[i];
    out.s[i] = b2 * slots.second_moment[i] + (1.0 - b2) * g[i] * g[i];
    out.direction[i] = adam_direction(out.m[i] / c1, out.s[i] / c2, config.epsilon);
  }
  return out;
}

}  // namespace

std::string_view to_string(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::heavy_ball: return "heavy_ball";
    case OptimizerKind::nesterov: return "nesterov";
    case OptimizerKind::adam: return "adam";
    case OptimizerKind::lars: return "lars";
    case OptimizerKind::lamb: return "lamb";
  }
  return "?";
}

std::string_view to_string(DecayMode mode) {
  return mode == DecayMode::decoupled ? "decoupled" : "l2_into_gradient";
}

OptimizerKind parse_optimizer_kind(std::string_view text) {
  for (auto k : {OptimizerKind::heavy_ball, OptimizerKind::nesterov, OptimizerKind::adam, OptimizerKind::lars,
                 OptimizerKind::lamb}) {
    if (to_string(k) == text) return k;
  }
  fail(ErrorCode::ValidationError, "unknown optimizer kind '" + std::string(text) + "'");
}

DecayMode parse_decay_mode(std::string_view text) {
  if (text == "decoupled") return DecayMode::decoupled;
  if (text == "l2_into_gradient") return DecayMode::l2_into_gradient;
  fail(ErrorCode::ValidationError, "unknown decay_mode '" + std::string(text) + "'");
}

DecayMode OptimizerConfig::default_decay_mode(OptimizerKind kind) {
  return (kind == OptimizerKind::adam || kind == OptimizerKind::lamb) ? DecayMode::decoupled
                                                                      : DecayMode::l2_into_gradient;
}

OptimizerConfig OptimizerConfig::defaults_for(OptimizerKind kind) {
  OptimizerConfig c;
  c.kind = kind;
  c.decay_mode = default_decay_mode(kind);
  return c;
}

void OptimizerConfig::validate(bool strict) const {
  auto in_unit = [](double v) { return std::isfinite(v) && v >= 0.0 && v < 1.0; };
  if (!in_unit(momentum)) fail(ErrorCode::ValidationError, "momentum must lie in [0, 1)");
  if (!in_unit(beta1)) fail(ErrorCode::ValidationError, "beta1 must lie in [0, 1)");
  if (!in_unit(beta2)) fail(ErrorCode::ValidationError, "beta2 must lie in [0, 1)");
  if (!std::isfinite(epsilon) || epsilon < 0.0) fail(ErrorCode::ValidationError, "epsilon must be >= 0");
  if (strict && epsilon <= 0.0 && (kind == OptimizerKind::adam || kind == OptimizerKind::lamb)) {
    fail(ErrorCode::ValidationError, "epsilon must be > 0 for adam and lamb");
  }
  if (!std::isfinite(trust_coefficient) || trust_coefficient <= 0.0) {
    fail(ErrorCode::ValidationError, "trust_coefficient must be > 0");
  }
  if (!std::isfinite(decay) || decay < 0.0) fail(ErrorCode::ValidationError, "decay must be >= 0");
}

GroupSlots GroupSlots::zeros(std::size_t n) {
  return GroupSlots{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
}

OptimizerState OptimizerState::zeros(const ParamStore& store) {
  OptimizerState state;
  state.slots.reserve(store.size());
  for (const auto& g : store.groups()) state.slots.push_back(GroupSlots::zeros(g.values.size()));
  return state;
}

std::vector<double> effective_gradient(std::span<const double> grad, std::span<const double> theta,
                                       const OptimizerConfig& config, Tag tag) {
  if (grad.size() != theta.size()) fail(ErrorCode::LengthMismatch, "gradient and parameter lengths differ");
  std::vector<double> out(grad.begin(), grad.end());
  if (config.decay_mode == DecayMode::l2_into_gradient && config.decay != 0.0 && !config.exclude_tags.contains(tag)) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += config.decay * theta[i];
  }
  return out;
}

void heavy_ball_update(std::span<double> theta, std::span<const double> grad, GroupSlots& slots, double lr,
                       const OptimizerConfig& config, Tag tag) {
  check_inputs(theta, grad, slots);
  const auto g = effective_gradient(grad, theta, config, tag);
  const double mu = config.momentum;
  const double wd = decoupled_applies(config, tag) ? config.decay : 0.0;
  std::vector<double> v(theta.size());
  std::vector<double> next(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    v[i] = mu * slots.velocity[i] + g[i];
    next[i] = theta[i] - lr * v[i] - lr * wd * theta[i];
  }
  require_finite(v, "velocity");
  commit(theta, next, "updated parameters");
  slots.velocity = std::move(v);
}

void nesterov_update(std::span<double> theta, std::span<const double> grad, GroupSlots& slots, double lr,
                     const OptimizerConfig& config, Tag tag) {
  check_inputs(theta, grad, slots);
  const auto g = effective_gradient(grad, theta, config, tag);
  const double mu = config.momentum;
  const double wd = decoupled_applies(config, tag) ? config.decay : 0.0;
  std::vector<double> v(theta.size());
  std::vector<double> next(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    v[i] = mu * slots.velocity[i] + g[i];
    next[i] = theta[i] - lr * (mu * v[i] + g[i]) - lr * wd * theta[i];
  }
  require_finite(v, "velocity");
  commit(theta, next, "updated parameters");
  slots.velocity = std::move(v);
}

void adam_update(std::span<double> theta, std::span<const double> grad, GroupSlots& slots, double lr,
                 std::int64_t step, const OptimizerConfig& config, Tag tag) {
  check_inputs(theta, grad, slots);
  const auto g = effective_gradient(grad, theta, config, tag);
  auto moments = adam_moments(g, slots, step, config);
  const double wd = decoupled_applies(config, tag) ? config.decay : 0.0;
  std::vector<double> next(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    next[i] = theta[i] - lr * (moments.direction[i] + wd * theta[i]);
  }
  require_finite(moments.m, "first moment");
  require_finite(moments.s, "second moment");
  commit(theta, next, "updated parameters");
  slots.first_moment = std::move(moments.m);
  slots.second_moment = std::move(moments.s);
}

void lars_update(std::span<double> theta, std::span<const double> grad, GroupSlots& slots, double lr,
                 const OptimizerConfig& config, Tag tag) {
  check_inputs(theta, grad, slots);
  const auto g = effective_gradient(grad, theta, config, tag);
  double ratio = 1.0;
  if (!config.exclude_tags.contains(tag)) {
    const double w_norm = l2_norm(theta);
    const double g_norm = l2_norm(g);
    if (w_norm > 0.0 && g_norm > 0.0) ratio = config.trust_coefficient * w_norm / g_norm;
  }
  const double mu = config.momentum;
  const double wd = decoupled_applies(config, tag) ? config.decay : 0.0;
  std::vector<double> v(theta.size());
  std::vector<double> next(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    v[i] = mu * slots.velocity[i] + ratio * lr * g[i];
    next[i] = theta[i] - v[i] - lr * wd * theta[i];
  }
  require_finite(v, "velocity");
  commit(theta, next, "updated parameters");
  slots.velocity = std::move(v);
}

void lamb_update(std::span<double> theta, std::span<const double> grad, GroupSlots& slots, double lr,
                 std::int64_t step, const OptimizerConfig& config, Tag tag) {
  check_inputs(theta, grad, slots);
  const auto g = effective_gradient(grad, theta, config, tag);
  auto moments = adam_moments(g, slots, step, config);
  const double wd = decoupled_applies(config, tag) ? config.decay : 0.0;
  std::vector<double> u(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) u[i] = moments.direction[i] + wd * theta[i];
  double ratio = 1.0;
  if (!config.exclude_tags.contains(tag)) {
    const double w_norm = l2_norm(theta);
    const double u_norm = l2_norm(u);
    if (w_norm > 0.0 && u_norm > 0.0) ratio = w_norm / u_norm;
  }
  std::vector<double> next(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) next[i] = theta[i] - lr * ratio * u[i];
  require_finite(moments.m, "first moment");
  require_finite(moments.s, "second moment");
  commit(theta, next, "updated parameters");
  slots.first_moment = std::move(moments.m);
  slots.second_moment = std::move(moments.s);
}

void apply_update(std::span<double> theta, std::span<const double> grad, GroupSlots& slots, double lr,
                  std::int64_t step, const OptimizerConfig& config, Tag tag) {
  switch (config.kind) {
    case OptimizerKind::heavy_ball: heavy_ball_update(theta, grad, slots, lr, config, tag); return;
    case OptimizerKind::nesterov: nesterov_update(theta, grad, slots, lr, config, tag); return;
    case OptimizerKind::adam: adam_update(theta, grad, slots, lr, step, config, tag); return;
    case OptimizerKind::lars: lars_update(theta, grad, slots, lr, config, tag); return;
    case OptimizerKind::lamb: lamb_update(theta, grad, slots, lr, step, config, tag); return;
  }
}

const OptimizerConfig& RoutingRule::config_for(Tag tag) const {
  for (const auto& r : routes_) {
    if (r.tags.contains(tag)) return r.config;
  }
  fail(ErrorCode::UncoveredTag, "no route handles tag '" + std::string(to_string(tag)) + "'");
}

bool RoutingRule::covers_all() const {
  return std::all_of(std::begin(kAllTags), std::end(kAllTags), [this](Tag t) {
    return std::any_of(routes_.begin(), routes_.end(), [t](const Route& r) { return r.tags.contains(t); });
  });
}

void RoutingRule::require_coverage() const {
  for (Tag t : kAllTags) (void)config_for(t);
}

void composite_step(ParamStore& store, std::span<const std::vector<double>> grads, const RoutingRule& routing,
                    double lr, OptimizerState& state) {
  routing.require_coverage();
  if (grads.size() != store.size() || state.slots.size() != store.size()) {
    fail(ErrorCode::LengthMismatch, "expected one gradient and one slot set per parameter group");
  }
  if (!std::isfinite(lr) || lr < 0.0) fail(ErrorCode::NonFiniteInput, "learning rate must be finite and >= 0");

  const std::int64_t next_step = state.step + 1;
  std::vector<std::vector<double>> new_values(store.size());
  std::vector<GroupSlots> new_slots(store.size());
  for (std::size_t i = 0; i < store.size(); ++i) {
    const auto& group = store.group(i);
    new_values[i] = group.values;
    new_slots[i] = state.slots[i];
    apply_update(new_values[i], grads[i], new_slots[i], lr, next_step, routing.config_for(group.tag), group.tag);
  }
  for (std::size_t i = 0; i < store.size(); ++i) {
    auto dst = store.values(i);
    std::copy(new_values[i].begin(), new_values[i].end(), dst.begin());
    state.slots[i] = std::move(new_slots[i]);
  }
  state.step = next_step;
}

}  // namespace optbench
