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

#include "optbench/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <string>

#include "optbench/error.hpp"

namespace optbench {

namespace {

struct LayerSlots {
  std::size_t weight = 0;
  std::size_t bias = 0;
  bool bn = false;
  std::size_t scale = 0;
  std::size_t shift = 0;
};

// Group indices per layer in store order: w, b, [bn_scale, bn_shift] for each
// hidden layer, then w, b for the output layer.
std::vector<LayerSlots> layout(const MlpConfig& config) {
  std::vector<LayerSlots> out;
  std::size_t next = 0;
  const std::size_t layers = config.layer_widths.size() - 1;
  for (std::size_t l = 0; l < layers; ++l) {
    LayerSlots s;
    s.weight = next++;
    s.bias = next++;
    if (l < config.num_hidden() && config.use_bn[l]) {
      s.bn = true;
      s.scale = next++;
      s.shift = next++;
    }
    out.push_back(s);
  }
  return out;
}

std::vector<LayerSlots> checked_layout(const ParamStore& params, const MlpConfig& config) {
  auto slots = layout(config);
  const std::size_t expected = slots.empty() ? 0 : (slots.back().bias + 1);
  if (params.size() != expected) {
    fail(ErrorCode::ShapeMismatch, "parameter store has " + std::to_string(params.size()) + " groups, model needs " +
                                       std::to_string(expected));
  }
  for (std::size_t l = 0; l < slots.size(); ++l) {
    const std::size_t in = config.layer_widths[l];
    const std::size_t out = config.layer_widths[l + 1];
    if (params.group(slots[l].weight).values.size() != in * out || params.group(slots[l].bias).values.size() != out ||
        (slots[l].bn && (params.group(slots[l].scale).values.size() != out ||
                         params.group(slots[l].shift).values.size() != out))) {
      fail(ErrorCode::ShapeMismatch, "layer " + std::to_string(l + 1) + " parameters do not match the widths");
    }
  }
  return slots;
}

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) fail(ErrorCode::NonFiniteInput, std::string(what) + " contains NaN or Inf");
  }
}

Matrix relu(const Matrix& a) {
  Matrix out = a;
  for (double& v : out.data) v = v > 0.0 ? v : 0.0;
  return out;
}

}  // namespace

std::size_t MlpConfig::num_bn_layers() const {
  return static_cast<std::size_t>(std::count(use_bn.begin(), use_bn.end(), true));
}

void MlpConfig::validate() const {
  if (layer_widths.size() < 2) fail(ErrorCode::InvalidConfig, "need at least an input and an output width");
  for (std::size_t w : layer_widths) {
    if (w == 0) fail(ErrorCode::InvalidConfig, "layer widths must be positive");
  }
  if (num_classes() < 2) fail(ErrorCode::InvalidConfig, "need at least two classes");
  if (use_bn.size() != num_hidden()) {
    fail(ErrorCode::InvalidConfig, "use_bn needs one entry per hidden layer (" + std::to_string(num_hidden()) + ")");
  }
  if (bn_gamma_init.size() != num_bn_layers()) {
    fail(ErrorCode::InvalidConfig, "bn_gamma_init needs one entry per BN layer (" + std::to_string(num_bn_layers()) + ")");
  }
  for (double g : bn_gamma_init) {
    if (!std::isfinite(g)) fail(ErrorCode::InvalidConfig, "bn_gamma_init must be finite");
  }
  if (!std::isfinite(bn_epsilon) || bn_epsilon <= 0.0) fail(ErrorCode::InvalidConfig, "bn_epsilon must be > 0");
  if (!(bn_stats_decay >= 0.0 && bn_stats_decay < 1.0)) fail(ErrorCode::InvalidConfig, "bn_stats_decay must lie in [0, 1)");
  if (virtual_batch_size == 0) fail(ErrorCode::InvalidConfig, "virtual_batch_size must be positive");
  if (!(label_smoothing >= 0.0 && label_smoothing <= 1.0)) {
    fail(ErrorCode::InvalidConfig, "label_smoothing must lie in [0, 1]");
  }
}

BnRunningStats BnRunningStats::initial(const MlpConfig& config) {
  BnRunningStats stats;
  for (std::size_t l = 0; l < config.num_hidden(); ++l) {
    BnLayerStats s;
    if (config.use_bn[l]) {
      s.running_mean.assign(config.layer_widths[l + 1], 0.0);
      s.running_var.assign(config.layer_widths[l + 1], 1.0);
    }
    stats.layers.push_back(std::move(s));
  }
  return stats;
}

BnOutput bn_forward(const Matrix& x, std::span<const double> gamma, std::span<const double> beta, double eps,
                    std::size_t virtual_batch_size, Mode mode, const BnLayerStats& stats, double rho,
                    std::span<const double> input_shift) {
  const std::size_t cols = x.cols;
  if (gamma.size() != cols || beta.size() != cols || (!input_shift.empty() && input_shift.size() != cols)) {
    fail(ErrorCode::ShapeMismatch, "BN parameter length differs from feature count");
  }
  if (stats.running_mean.size() != cols || stats.running_var.size() != cols) {
    fail(ErrorCode::ShapeMismatch, "BN running statistics have the wrong length");
  }
  require_finite(x.data, "BN input");
  auto shift = [&](std::size_t c) { return input_shift.empty() ? 0.0 : input_shift[c]; };

  BnOutput out;
  out.y = Matrix(x.rows, cols);
  out.stats = stats;

  if (mode == Mode::eval) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double denom = stats.running_var[c] + eps;
      const double inv = denom > 0.0 ? 1.0 / std::sqrt(denom) : 0.0;
      for (std::size_t n = 0; n < x.rows; ++n) {
        out.y(n, c) = gamma[c] * ((x(n, c) + shift(c) - stats.running_mean[c]) * inv) + beta[c];
      }
    }
    return out;
  }

  if (virtual_batch_size == 0 || x.rows == 0 || x.rows % virtual_batch_size != 0) {
    fail(ErrorCode::IndivisibleBatch, "batch of " + std::to_string(x.rows) + " rows is not a multiple of the virtual batch size " +
                                          std::to_string(virtual_batch_size));
  }
  const std::size_t subs = x.rows / virtual_batch_size;
  out.cache.xhat = Matrix(x.rows, cols);
  out.cache.inv_std = Matrix(subs, cols);
  out.cache.virtual_batch_size = virtual_batch_size;

  std::vector<double> mean(cols);
  std::vector<double> var(cols);
  std::vector<double> mean_acc(cols, 0.0);
  std::vector<double> var_acc(cols, 0.0);
  for (std::size_t k = 0; k < subs; ++k) {
    const std::size_t begin = k * virtual_batch_size;
    const std::size_t end = begin + virtual_batch_size;
    kernels::parallel::column_moments(x, begin, end, mean, var);
    for (std::size_t c = 0; c < cols; ++c) {
      const double denom = var[c] + eps;
      const double inv = denom > 0.0 ? 1.0 / std::sqrt(denom) : 0.0;
      out.cache.inv_std(k, c) = inv;
      for (std::size_t n = begin; n < end; ++n) {
        const double xh = (x(n, c) - mean[c]) * inv;
        out.cache.xhat(n, c) = xh;
        out.y(n, c) = gamma[c] * xh + beta[c];
      }
      mean_acc[c] += mean[c] + shift(c);
      var_acc[c] += var[c];
    }
  }
  const auto count = static_cast<double>(subs);
  for (std::size_t c = 0; c < cols; ++c) {
    out.stats.running_mean[c] = rho * stats.running_mean[c] + (1.0 - rho) * (mean_acc[c] / count);
    out.stats.running_var[c] = rho * stats.running_var[c] + (1.0 - rho) * (var_acc[c] / count);
  }
  return out;
}

BnGrads bn_backward(const Matrix& dy, const BnCache& cache, std::span<const double> gamma) {
  const std::size_t cols = dy.cols;
  const std::size_t vbs = cache.virtual_batch_size;
  if (vbs == 0 || cache.xhat.rows != dy.rows || cache.xhat.cols != cols || gamma.size() != cols) {
    fail(ErrorCode::StaleCache, "BN cache does not match the incoming gradient");
  }
  BnGrads g{Matrix(dy.rows, cols), std::vector<double>(cols, 0.0), std::vector<double>(cols, 0.0)};
  const std::size_t subs = dy.rows / vbs;
  const auto m = static_cast<double>(vbs);
  for (std::size_t k = 0; k < subs; ++k) {
    const std::size_t begin = k * vbs;
    const std::size_t end = begin + vbs;
    for (std::size_t c = 0; c < cols; ++c) {
      double sum_d = 0.0;
      double sum_dx = 0.0;
      for (std::size_t n = begin; n < end; ++n) {
        const double dxh = dy(n, c) * gamma[c];
        sum_d += dxh;
        sum_dx += dxh * cache.xhat(n, c);
        g.dgamma[c] += dy(n, c) * cache.xhat(n, c);
        g.dbeta[c] += dy(n, c);
      }
      const double inv = cache.inv_std(k, c);
      for (std::size_t n = begin; n < end; ++n) {
        const double dxh = dy(n, c) * gamma[c];
        g.dx(n, c) = inv / m * (m * dxh - sum_d - cache.xhat(n, c) * sum_dx);
      }
    }
  }
  return g;
}

Matrix softmax(const Matrix& logits) {
  Matrix p(logits.rows, logits.cols);
  for (std::size_t n = 0; n < logits.rows; ++n) {
    const auto row = logits.row(n);
    const double mx = *std::max_element(row.begin(), row.end());
    double sum = 0.0;
    for (std::size_t k = 0; k < logits.cols; ++k) {
      p(n, k) = std::exp(row[k] - mx);
      sum += p(n, k);
    }
    for (std::size_t k = 0; k < logits.cols; ++k) p(n, k) /= sum;
  }
  return p;
}

double smoothed_cross_entropy(const Matrix& logits, std::span<const int> labels, double tau) {
  if (labels.size() != logits.rows || logits.rows == 0) fail(ErrorCode::ShapeMismatch, "one label per logit row required");
  const auto k_count = static_cast<double>(logits.cols);
  double total = 0.0;
  for (std::size_t n = 0; n < logits.rows; ++n) {
    const auto row = logits.row(n);
    const double mx = *std::max_element(row.begin(), row.end());
    double sum = 0.0;
    double mean_logit = 0.0;
    for (double z : row) {
      sum += std::exp(z - mx);
      mean_logit += z;
    }
    mean_logit /= k_count;
    const double lse = mx + std::log(sum);
    const double target = row[static_cast<std::size_t>(labels[n])];
    total += lse - (1.0 - tau) * target - tau * mean_logit;
  }
  return total / static_cast<double>(logits.rows);
}

ParamStore init_mlp(const MlpConfig& config, std::uint64_t rng_seed) {
  config.validate();
  std::mt19937_64 rng(rng_seed);
  std::vector<ParamGroup> groups;
  std::size_t bn_index = 0;
  const std::size_t layers = config.layer_widths.size() - 1;
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t in = config.layer_widths[l];
    const std::size_t out = config.layer_widths[l + 1];
    const std::string id = std::to_string(l + 1);
    const double scale = 1.0 / std::sqrt(static_cast<double>(in));
    std::uniform_real_distribution<double> dist(-scale, scale);
    std::vector<double> w(in * out);
    for (double& v : w) v = dist(rng);
    groups.push_back({"w" + id, Tag::weight, std::move(w), {out, in}});
    groups.push_back({"b" + id, Tag::bias, std::vector<double>(out, 0.0), {out}});
    if (l < config.num_hidden() && config.use_bn[l]) {
      const double gamma0 = config.bn_gamma_init[bn_index++];
      groups.push_back({"bn" + id + "_scale", Tag::bn_scale, std::vector<double>(out, gamma0), {out}});
      groups.push_back({"bn" + id + "_shift", Tag::bn_shift, std::vector<double>(out, 0.0), {out}});
    }
  }
  return ParamStore::build(std::move(groups));
}

std::uint64_t fingerprint(const ParamStore& params) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const void* data, std::size_t bytes) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < bytes; ++i) {
      h ^= p[i];
      h *= 1099511628211ULL;
    }
  };
  for (const auto& g : params.groups()) {
    const std::size_t n = g.values.size();
    mix(&n, sizeof n);
    mix(g.values.data(), n * sizeof(double));
  }
  return h;
}

ForwardResult forward(const ParamStore& params, const BnRunningStats& stats, const Batch& batch,
                      const MlpConfig& config, Mode mode) {
  config.validate();
  const auto slots = checked_layout(params, config);
  if (batch.inputs.cols != config.layer_widths.front()) {
    fail(ErrorCode::ShapeMismatch, "batch has " + std::to_string(batch.inputs.cols) + " features, model expects " +
                                       std::to_string(config.layer_widths.front()));
  }
  if (batch.labels.size() != batch.inputs.rows || batch.labels.empty()) {
    fail(ErrorCode::ShapeMismatch, "batch needs one label per row and at least one row");
  }
  for (int y : batch.labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= config.num_classes()) fail(ErrorCode::ShapeMismatch, "label out of range");
  }
  if (stats.layers.size() != config.num_hidden()) fail(ErrorCode::ShapeMismatch, "running statistics do not match the model");
  require_finite(batch.inputs.data, "inputs");

  ForwardResult result;
  result.stats = stats;
  result.cache.mode = mode;
  result.cache.labels = batch.labels;
  result.cache.label_smoothing = config.label_smoothing;

  Matrix h = batch.inputs;
  for (std::size_t l = 0; l < config.num_hidden(); ++l) {
    const auto& s = slots[l];
    LayerCache lc;
    lc.input = h;
    lc.pre = Matrix(h.rows, config.layer_widths[l + 1]);
    const auto bias = params.values(s.bias);
    kernels::parallel::affine_forward(h, params.values(s.weight), s.bn ? std::span<const double>{} : bias, lc.pre);
    Matrix a;
    if (s.bn) {
      auto bn = bn_forward(lc.pre, params.values(s.scale), params.values(s.shift), config.bn_epsilon,
                           config.virtual_batch_size, mode, stats.layers[l], config.bn_stats_decay, bias);
      a = std::move(bn.y);
      lc.bn = std::move(bn.cache);
      result.stats.layers[l] = std::move(bn.stats);
    } else {
      a = lc.pre;
    }
    lc.activation = relu(a);
    h = lc.activation;
    result.cache.hidden.push_back(std::move(lc));
  }
  const auto& out_slots = slots.back();
  result.logits = Matrix(h.rows, config.num_classes());
  kernels::parallel::affine_forward(h, params.values(out_slots.weight), params.values(out_slots.bias), result.logits);
  require_finite(result.logits.data, "logits");
  result.cache.output_input = std::move(h);
  result.cache.probabilities = softmax(result.logits);
  result.loss = smoothed_cross_entropy(result.logits, batch.labels, config.label_smoothing);
  if (!std::isfinite(result.loss)) fail(ErrorCode::NonFiniteInput, "loss is not finite");
  if (mode == Mode::train) result.cache.param_fingerprint = fingerprint(params);
  return result;
}

std::vector<std::vector<double>> backward(const ForwardCache& cache, const ParamStore& params,
                                          const MlpConfig& config) {
  if (cache.mode != Mode::train || cache.labels.empty()) {
    fail(ErrorCode::StaleCache, "backward needs the cache of a train-mode forward");
  }
  if (cache.param_fingerprint != fingerprint(params)) {
    fail(ErrorCode::StaleCache, "parameters changed since the forward pass");
  }
  const auto slots = checked_layout(params, config);
  std::vector<std::vector<double>> grads(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) grads[i].assign(params.group(i).values.size(), 0.0);

  const std::size_t rows = cache.labels.size();
  const std::size_t classes = config.num_classes();
  const double tau = cache.label_smoothing;
  const double inv_n = 1.0 / static_cast<double>(rows);
  Matrix dz(rows, classes);
  for (std::size_t n = 0; n < rows; ++n) {
    for (std::size_t k = 0; k < classes; ++k) {
      const double target = (1.0 - tau) * (static_cast<std::size_t>(cache.labels[n]) == k ? 1.0 : 0.0) +
                            tau / static_cast<double>(classes);
      dz(n, k) = (cache.probabilities(n, k) - target) * inv_n;
    }
  }

  const auto& out_slots = slots.back();
  kernels::parallel::affine_backward_params(dz, cache.output_input, grads[out_slots.weight], grads[out_slots.bias]);
  Matrix dh(rows, cache.output_input.cols);
  kernels::parallel::affine_backward_input(dz, params.values(out_slots.weight), dh);

  for (std::size_t l = config.num_hidden(); l-- > 0;) {
    const auto& s = slots[l];
    const auto& lc = cache.hidden[l];
    Matrix da = dh;
    for (std::size_t i = 0; i < da.data.size(); ++i) {
      if (!(lc.activation.data[i] > 0.0)) da.data[i] = 0.0;
    }
    Matrix dpre;
    if (s.bn) {
      auto bg = bn_backward(da, lc.bn, params.values(s.scale));
      dpre = std::move(bg.dx);
      grads[s.scale] = std::move(bg.dgamma);
      grads[s.shift] = std::move(bg.dbeta);
      // The pre-BN bias cancels in train-mode normalization: its gradient is
      // exactly zero and stays in grads[s.bias].
      kernels::parallel::affine_backward_params(dpre, lc.input, grads[s.weight], {});
    } else {
      dpre = std::move(da);
      kernels::parallel::affine_backward_params(dpre, lc.input, grads[s.weight], grads[s.bias]);
    }
    if (l > 0) {
      dh = Matrix(rows, lc.input.cols);
      kernels::parallel::affine_backward_input(dpre, params.values(s.weight), dh);
    }
  }
  return grads;
}

double accuracy(const Matrix& logits, std::span<const int> labels) {
  if (labels.size() != logits.rows || logits.rows == 0) fail(ErrorCode::ShapeMismatch, "one label per logit row required");
  std::size_t correct = 0;
  for (std::size_t n = 0; n < logits.rows; ++n) {
    const auto row = logits.row(n);
    const auto best = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
    if (best == static_cast<std::size_t>(labels[n])) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(logits.rows);
}

FdReport finite_difference_check(const ParamStore& params, const BnRunningStats& stats, const Batch& batch,
                                 const MlpConfig& config, double h, std::size_t max_coordinates,
                                 std::uint64_t sample_seed) {
  if (!(h > 0.0) || !std::isfinite(h)) fail(ErrorCode::InvalidConfig, "finite-difference step must be > 0");
  const auto base = forward(params, stats, batch, config, Mode::train);
  const auto analytic = backward(base.cache, params, config);

  struct Coord {
    std::size_t group;
    std::size_t index;
  };
  std::vector<Coord> all;
  for (std::size_t g = 0; g < params.size(); ++g) {
    for (std::size_t i = 0; i < params.group(g).values.size(); ++i) all.push_back({g, i});
  }
  std::vector<Coord> picked;
  if (all.size() <= max_coordinates) {
    picked = all;
  } else {
    std::mt19937_64 rng(sample_seed);
    std::vector<bool> taken(all.size(), false);
    std::size_t offset = 0;
    for (std::size_t g = 0; g < params.size(); ++g) {
      const std::size_t n = params.group(g).values.size();
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      const std::size_t j = offset + pick(rng);
      taken[j] = true;
      picked.push_back(all[j]);
      offset += n;
    }
    std::vector<std::size_t> rest;
    for (std::size_t j = 0; j < all.size(); ++j) {
      if (!taken[j]) rest.push_back(j);
    }
    std::shuffle(rest.begin(), rest.end(), rng);
    for (std::size_t j = 0; picked.size() < max_coordinates && j < rest.size(); ++j) picked.push_back(all[rest[j]]);
  }

  std::vector<double> errors(picked.size(), 0.0);
  const auto count = static_cast<std::int64_t>(picked.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t j = 0; j < count; ++j) {
    const auto [g, i] = picked[static_cast<std::size_t>(j)];
    ParamStore probe = params;
    const double original = probe.values(g)[i];
    probe.values(g)[i] = original + h;
    const double plus = forward(probe, stats, batch, config, Mode::train).loss;
    probe.values(g)[i] = original - h;
    const double minus = forward(probe, stats, batch, config, Mode::train).loss;
    const double numeric = (plus - minus) / (2.0 * h);
    const double a = analytic[g][i];
    errors[static_cast<std::size_t>(j)] = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-8});
  }

  FdReport report;
  report.coordinates_checked = picked.size();
  for (std::size_t j = 0; j < picked.size(); ++j) {
    if (errors[j] > report.max_relative_error || j == 0) {
      report.max_relative_error = errors[j];
      report.worst_group = params.group(picked[j].group).name;
      report.worst_index = picked[j].index;
    }
  }
  return report;
}

Dataset gen_synthetic_dataset(std::size_t classes, std::size_t features, std::size_t per_class, double spread,
                              std::uint64_t seed) {
  if (classes < 2 || features == 0 || per_class == 0) {
    fail(ErrorCode::InvalidConfig, "need >= 2 classes and positive features and per_class");
  }
  if (!(spread > 0.0) || !std::isfinite(spread)) fail(ErrorCode::InvalidConfig, "spread must be > 0");
  const std::size_t total = classes * per_class;
  const auto n_train = static_cast<std::size_t>(std::llround(0.8 * static_cast<double>(total)));
  if (n_train == 0 || n_train >= total) fail(ErrorCode::InvalidConfig, "too few examples for an 80/20 split");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> center_dist(-1.0, 1.0);
  std::normal_distribution<double> noise(0.0, 1.0);
  Matrix centers(classes, features);
  for (double& c : centers.data) c = center_dist(rng);

  Batch all{Matrix(total, features), std::vector<int>(total)};
  for (std::size_t k = 0; k < classes; ++k) {
    for (std::size_t j = 0; j < per_class; ++j) {
      const std::size_t n = k * per_class + j;
      for (std::size_t f = 0; f < features; ++f) all.inputs(n, f) = centers(k, f) + spread * noise(rng);
      all.labels[n] = static_cast<int>(k);
    }
  }
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);

  Dataset ds;
  ds.train = gather_rows(all, std::span<const std::size_t>(order).first(n_train));
  ds.eval = gather_rows(all, std::span<const std::size_t>(order).subspan(n_train));
  return ds;
}

Batch gather_rows(const Batch& source, std::span<const std::size_t> rows) {
  Batch out{Matrix(rows.size(), source.inputs.cols), std::vector<int>(rows.size())};
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto src = source.inputs.row(rows[r]);
    std::copy(src.begin(), src.end(), out.inputs.row(r).begin());
    out.labels[r] = source.labels[rows[r]];
  }
  return out;
}

void write_dataset_csv(const Batch& batch, std::ostream& out) {
  for (std::size_t f = 0; f < batch.inputs.cols; ++f) out << "feature_" << f << ',';
  out << "label\n";
  char buf[40];
  for (std::size_t n = 0; n < batch.size(); ++n) {
    for (std::size_t f = 0; f < batch.inputs.cols; ++f) {
      std::snprintf(buf, sizeof buf, "%.17g,", batch.inputs(n, f));
      out << buf;
    }
    out << batch.labels[n] << '\n';
  }
}

}  // namespace optbench
